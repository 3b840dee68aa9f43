#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symhyp/scenario.hpp"

namespace symhyp {

enum class BoundaryLabel { kPlus, kMinus, kNeither };
const char* to_string(BoundaryLabel label);

/// The two endpoints of (x_lo, x_hi).
enum class Side { kLo = 0, kHi = 1 };
inline constexpr std::array<Side, 2> kSides{Side::kLo, Side::kHi};
const char* to_string(Side side);

/// Outward unit normal: -1 at x_lo, +1 at x_hi.
inline double outward_normal(Side side) { return side == Side::kLo ? -1.0 : 1.0; }
inline int boundary_node(const SpaceTimeGrid& grid, Side side) {
    return side == Side::kLo ? 0 : grid.nx() - 1;
}

inline constexpr double kDefinitenessTolerance = 1e-12;

/// PLUS when H1*nu is positive definite, MINUS when it is negative
/// semidefinite, NEITHER otherwise.
std::array<BoundaryLabel, 2> classify_boundary(const Scenario& scenario, int time_node);

/// Labels for every boundary node at every time node.
class BoundaryClassification {
public:
    explicit BoundaryClassification(const Scenario& scenario);

    BoundaryLabel label(Side side, int time_node) const {
        return labels_[static_cast<std::size_t>(time_node)][static_cast<std::size_t>(side)];
    }
    int time_nodes() const noexcept { return static_cast<int>(labels_.size()); }

private:
    std::vector<std::array<BoundaryLabel, 2>> labels_;
};

/// A grid node together with the quantity that was extremal there.
struct NodeWitness {
    int i = -1;
    int n = -1;
    double x = 0.0;
    double t = 0.0;
    double value = 0.0;
};

/// Result of a "matrix field is uniformly positive definite" check: `bound`
/// is the minimum of lambda_min over nodes, attained at `worst`.
struct DefinitenessCheck {
    bool passed = false;
    double bound = 0.0;
    NodeWitness worst;
};

/// (d_t phi) H0 + (d_x phi) H1 must be uniformly positive definite; bound is delta.
DefinitenessCheck check_weight_positivity(const Scenario& scenario);

/// (d_x eta) H1 must be uniformly positive definite; bound is delta0.
DefinitenessCheck check_eta_gradient_positivity(const Scenario& scenario);

/// delta1 |v|^2 <= H0 v.v <= M |v|^2 with delta1 > 0.
struct H0Bounds {
    bool passed = false;
    double delta1 = 0.0;
    double M = 0.0;
    NodeWitness worst_min;
    NodeWitness worst_max;
};
H0Bounds check_h0_bounds(const Scenario& scenario);

/// max eta - min eta over the spatial nodes.
double oscillation(const std::function<double(double)>& eta, const SpaceTimeGrid& grid);

/// Smallest observation horizon (M / delta0) * osc(eta).
double minimal_time(const std::function<double(double)>& eta, double delta0, double M,
                    const SpaceTimeGrid& grid);

/// Weight slope chosen inside (osc(eta)/T, delta0/M); delta = delta0 - beta*M
/// and delta2 = beta*T - osc(eta) are then both positive.
struct BetaSelection {
    bool ok = false;
    double lower = 0.0;
    double upper = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    double delta2 = 0.0;
    std::string reason;
};
BetaSelection select_beta(double delta0, double M, const std::function<double(double)>& eta,
                          const SpaceTimeGrid& grid);

/// Every structural hypothesis evaluated on one scenario.
struct HypothesisReport {
    std::string scenario;
    double beta = 0.0;
    double T = 0.0;
    DefinitenessCheck weight_positivity;    // delta
    DefinitenessCheck eta_gradient;         // delta0
    H0Bounds h0_bounds;                     // delta1, M
    double oscillation = 0.0;
    std::optional<double> T_min;            // present when delta0 > 0
    bool horizon_ok = false;                // T > T_min
    std::optional<BetaSelection> beta_choice;
    BoundaryClassification boundary;

    bool carleman_hypotheses_hold() const { return weight_positivity.passed; }
    bool observability_hypotheses_hold() const { return eta_gradient.passed && h0_bounds.passed; }
    bool all_pass() const {
        return weight_positivity.passed && eta_gradient.passed && h0_bounds.passed && horizon_ok;
    }
    std::vector<std::string> failed_hypotheses() const;
};

/// Stable names used in reports and refusal messages.
namespace hypothesis {
inline constexpr const char* kWeightPositivity = "weight-positivity";
inline constexpr const char* kEtaGradient = "eta-gradient-positivity";
inline constexpr const char* kH0Bounds = "h0-bounds";
inline constexpr const char* kHorizon = "time-horizon";
}  // namespace hypothesis

HypothesisReport check_hypotheses(const Scenario& scenario);

/// Flat `key = value` text block.
void write_report_text(std::ostream& os, const HypothesisReport& report);

/// One row per (boundary node, time node): side,x,normal,n,t,label.
void write_boundary_csv(std::ostream& os, const Scenario& scenario, const BoundaryClassification& bc);

}  // namespace symhyp
