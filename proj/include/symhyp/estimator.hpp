#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symhyp/error.hpp"
#include "symhyp/functionals.hpp"
#include "symhyp/hypotheses.hpp"
#include "symhyp/solver.hpp"

namespace symhyp {

/// Thrown when an experiment's hypotheses do not hold. Carries the full
/// report, the name of the violated hypothesis and the witnessing node.
class HypothesisRefusal : public Error {
public:
    HypothesisRefusal(HypothesisReport report, std::string hypothesis, NodeWitness witness);

    const HypothesisReport& report() const noexcept { return report_; }
    const std::string& hypothesis() const noexcept { return hypothesis_; }
    const NodeWitness& witness() const noexcept { return witness_; }

private:
    HypothesisReport report_;
    std::string hypothesis_;
    NodeWitness witness_;
};

/// Produces ensemble member `index` on `grid`. Members must depend only on
/// the index, not on the grid, so that refinement studies compare the same
/// underlying functions.
using MemberGenerator = std::function<GridFunction(const SpaceTimeGrid& grid, int index)>;
using ProfileGenerator = std::function<Profile(const SpaceTimeGrid& grid, int index)>;

/// Random smooth space-time members seeded with seed + index.
MemberGenerator smooth_members(int n, std::uint64_t seed, int modes = 4, double decay = 2.0);

/// Band-limited sine-series initial data seeded with seed + index.
ProfileGenerator band_limited_members(int n, std::uint64_t seed, int modes = 4, double decay = 2.0);

struct CarlemanScanOptions {
    std::vector<double> s_grid{1.0, 2.0, 4.0, 8.0, 16.0};
    int ensemble_size = 20;
    bool refine = true;  // repeat at doubled resolution and report drift
};

/// Aggregates at one resolution.
struct CarlemanScanLevel {
    SpaceTimeGrid grid;
    std::vector<double> rho_max;   // per s
    std::vector<int> rho_argmax;   // member attaining rho_max
    double C_hat = 0.0;
    double s0_hat = 0.0;
    int degenerate_members = 0;
    int violation_candidates = 0;  // ratio x/0 with x > 0
};

struct CarlemanScanRow {
    int member;
    CarlemanTerms terms;
    Ratio ratio;
};

struct CarlemanScanReport {
    std::string scenario;
    std::vector<double> s_grid;
    int ensemble_size = 0;
    CarlemanScanLevel base;
    std::optional<CarlemanScanLevel> refined;
    std::optional<double> drift;  // |C_hat_refined - C_hat_base| / C_hat_base
    std::vector<CarlemanScanRow> rows;  // base resolution, s-major
    HypothesisReport hypotheses;
};

/// Smallest scanned s whose rho_max lies within 10% of the median of the
/// rho_max values over the larger half of the s grid.
double stabilized_s0(const std::vector<double>& s_grid, const std::vector<double>& rho_max);

/// Evaluates the Carleman ratio on manufactured solutions (F := residual(u))
/// for every member and every s. Throws HypothesisRefusal if the weight
/// positivity condition fails.
CarlemanScanReport scan_carleman(const Scenario& scenario, const MemberGenerator& members,
                                 const CarlemanScanOptions& options = {});

enum class ObservabilityVerdict { kObservable, kNotCertified };
const char* to_string(ObservabilityVerdict v);

struct ObservabilitySample {
    int member;
    double initial_norm;
    double trace_norm;
    Ratio ratio;
};

struct ObservabilityReport {
    std::string scenario;
    double T = 0.0;
    double T_min = 0.0;
    std::vector<ObservabilitySample> samples;
    double C_obs = 0.0;  // max finite ratio, +inf if any ratio is infinite
    int degenerate_members = 0;
    ObservabilityVerdict verdict = ObservabilityVerdict::kNotCertified;
    std::optional<ObservabilitySample> counterexample;  // largest ratio when not certified
    std::vector<std::string> warnings;
    HypothesisReport hypotheses;
};

/// Solves the homogeneous system (F = 0, zero inflow) for each initial
/// datum and aggregates ||u(.,0)|| / ||u||_{boundary}. The scenario grid
/// must satisfy the solver CFL bound. Throws HypothesisRefusal if
/// eta-gradient positivity or the H0 bounds fail; T <= T_min only adds a
/// warning.
ObservabilityReport estimate_observability(const Scenario& scenario, const ProfileGenerator& initial_data,
                                           int ensemble_size, const SolverOptions& solver = {});

struct EnergySample {
    int member;
    double ratio;  // max_t energy_lhs(t) / energy_rhs_core
    EnergyLedger ledger;
};

struct EnergyReport {
    std::string scenario;
    std::vector<EnergySample> samples;
    double C_energy = 0.0;
    int degenerate_members = 0;
};

/// Max over members and time nodes of energy_lhs(t) / energy_rhs_core for
/// homogeneous solves with zero inflow. Throws HypothesisRefusal if the H0
/// bounds fail.
EnergyReport verify_energy_estimate(const Scenario& scenario, const ProfileGenerator& initial_data,
                                    int ensemble_size, const SolverOptions& solver = {});

void write_scan_summary_csv(std::ostream& os, const CarlemanScanReport& report);
void write_scan_summary_text(std::ostream& os, const CarlemanScanReport& report);
void write_observability_csv(std::ostream& os, const ObservabilityReport& report);
void write_observability_summary(std::ostream& os, const ObservabilityReport& report);
void write_energy_summary(std::ostream& os, const EnergyReport& report);

}  // namespace symhyp
