#include "symhyp/hypotheses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "symhyp/csv.hpp"
#include "symhyp/error.hpp"

namespace symhyp {

const char* to_string(BoundaryLabel label) {
    switch (label) {
        case BoundaryLabel::kPlus: return "PLUS";
        case BoundaryLabel::kMinus: return "MINUS";
        case BoundaryLabel::kNeither: return "NEITHER";
    }
    return "?";
}

const char* to_string(Side side) { return side == Side::kLo ? "lo" : "hi"; }

std::array<BoundaryLabel, 2> classify_boundary(const Scenario& scenario, int time_node) {
    const auto& grid = scenario.grid;
    if (time_node < 0 || time_node >= grid.nt()) throw InvalidArgument("classify_boundary: bad time node");
    std::array<BoundaryLabel, 2> out{};
    for (Side side : kSides) {
        const int i = boundary_node(grid, side);
        const Matrix flux = outward_normal(side) * scenario.h1(grid.x(i), grid.t(time_node));
        const EigenBounds ev = min_max_eigenvalues(flux);
        BoundaryLabel label = BoundaryLabel::kNeither;
        if (ev.min > kDefinitenessTolerance) {
            label = BoundaryLabel::kPlus;
        } else if (ev.max <= kDefinitenessTolerance) {
            label = BoundaryLabel::kMinus;
        }
        out[static_cast<std::size_t>(side)] = label;
    }
    return out;
}

BoundaryClassification::BoundaryClassification(const Scenario& scenario) {
    labels_.reserve(static_cast<std::size_t>(scenario.grid.nt()));
    for (int n = 0; n < scenario.grid.nt(); ++n) labels_.push_back(classify_boundary(scenario, n));
}

namespace {

// Minimum of lambda_min(matrix_at(x, t)) over all nodes.
template <typename MatrixAt>
DefinitenessCheck min_eigen_over_nodes(const SpaceTimeGrid& grid, MatrixAt&& matrix_at) {
    DefinitenessCheck check;
    check.bound = std::numeric_limits<double>::infinity();
    for (int n = 0; n < grid.nt(); ++n) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = grid.x(i);
            const double t = grid.t(n);
            const double lmin = min_max_eigenvalues(matrix_at(x, t)).min;
            if (lmin < check.bound) {
                check.bound = lmin;
                check.worst = {i, n, x, t, lmin};
            }
        }
    }
    check.passed = check.bound > 0.0;
    return check;
}

}  // namespace

DefinitenessCheck check_weight_positivity(const Scenario& scenario) {
    const Weight& w = scenario.weight;
    return min_eigen_over_nodes(scenario.grid, [&](double x, double t) -> Matrix {
        return w.dphi_dt() * scenario.h0(x, t) + w.dphi_dx(x) * scenario.h1(x, t);
    });
}

DefinitenessCheck check_eta_gradient_positivity(const Scenario& scenario) {
    const Weight& w = scenario.weight;
    return min_eigen_over_nodes(scenario.grid,
                                [&](double x, double t) -> Matrix { return w.deta(x) * scenario.h1(x, t); });
}

H0Bounds check_h0_bounds(const Scenario& scenario) {
    const auto& grid = scenario.grid;
    H0Bounds b;
    b.delta1 = std::numeric_limits<double>::infinity();
    b.M = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < grid.nt(); ++n) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = grid.x(i);
            const double t = grid.t(n);
            const EigenBounds ev = min_max_eigenvalues(scenario.h0(x, t));
            if (ev.min < b.delta1) {
                b.delta1 = ev.min;
                b.worst_min = {i, n, x, t, ev.min};
            }
            if (ev.max > b.M) {
                b.M = ev.max;
                b.worst_max = {i, n, x, t, ev.max};
            }
        }
    }
    b.passed = b.delta1 > 0.0;
    return b;
}

double oscillation(const std::function<double(double)>& eta, const SpaceTimeGrid& grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.nx(); ++i) {
        const double v = eta(grid.x(i));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double minimal_time(const std::function<double(double)>& eta, double delta0, double M,
                    const SpaceTimeGrid& grid) {
    if (!(delta0 > 0.0)) throw InvalidArgument("minimal_time: delta0 must be > 0");
    return (M / delta0) * oscillation(eta, grid);
}

BetaSelection select_beta(double delta0, double M, const std::function<double(double)>& eta,
                          const SpaceTimeGrid& grid) {
    BetaSelection sel;
    if (!(delta0 > 0.0) || !(M > 0.0)) {
        sel.reason = "delta0 and M must be positive";
        return sel;
    }
    const double osc = oscillation(eta, grid);
    sel.lower = osc / grid.T();
    sel.upper = delta0 / M;
    if (!(sel.lower < sel.upper)) {
        sel.reason = "admissible interval for beta is empty (T <= T_min)";
        return sel;
    }
    sel.ok = true;
    sel.beta = 0.5 * (sel.lower + sel.upper);
    sel.delta = delta0 - sel.beta * M;
    sel.delta2 = sel.beta * grid.T() - osc;
    return sel;
}

std::vector<std::string> HypothesisReport::failed_hypotheses() const {
    std::vector<std::string> out;
    if (!weight_positivity.passed) out.emplace_back(hypothesis::kWeightPositivity);
    if (!eta_gradient.passed) out.emplace_back(hypothesis::kEtaGradient);
    if (!h0_bounds.passed) out.emplace_back(hypothesis::kH0Bounds);
    if (!horizon_ok) out.emplace_back(hypothesis::kHorizon);
    return out;
}

HypothesisReport check_hypotheses(const Scenario& scenario) {
    scenario.check_structure();
    HypothesisReport r{scenario.name,
                       scenario.weight.beta,
                       scenario.grid.T(),
                       check_weight_positivity(scenario),
                       check_eta_gradient_positivity(scenario),
                       check_h0_bounds(scenario),
                       oscillation(scenario.weight.eta, scenario.grid),
                       std::nullopt,
                       false,
                       std::nullopt,
                       BoundaryClassification(scenario)};
    if (r.eta_gradient.passed && r.h0_bounds.passed) {
        r.T_min = minimal_time(scenario.weight.eta, r.eta_gradient.bound, r.h0_bounds.M, scenario.grid);
        r.horizon_ok = scenario.grid.T() > *r.T_min;
        r.beta_choice = select_beta(r.eta_gradient.bound, r.h0_bounds.M, scenario.weight.eta, scenario.grid);
    }
    return r;
}

namespace {

void write_witness(std::ostream& os, const std::string& key, const NodeWitness& w) {
    os << key << ".node = " << w.i << "," << w.n << "\n";
    os << key << ".x = " << csv::format(w.x) << "\n";
    os << key << ".t = " << csv::format(w.t) << "\n";
}

const char* verdict(bool b) { return b ? "PASS" : "FAIL"; }

}  // namespace

void write_report_text(std::ostream& os, const HypothesisReport& r) {
    os << "scenario = " << r.scenario << "\n";
    os << "T = " << csv::format(r.T) << "\n";
    os << "beta = " << csv::format(r.beta) << "\n";
    os << "delta = " << csv::format(r.weight_positivity.bound) << "\n";
    write_witness(os, "delta.worst", r.weight_positivity.worst);
    os << "delta0 = " << csv::format(r.eta_gradient.bound) << "\n";
    write_witness(os, "delta0.worst", r.eta_gradient.worst);
    os << "delta1 = " << csv::format(r.h0_bounds.delta1) << "\n";
    os << "M = " << csv::format(r.h0_bounds.M) << "\n";
    write_witness(os, "delta1.worst", r.h0_bounds.worst_min);
    os << "osc_eta = " << csv::format(r.oscillation) << "\n";
    os << "T_min = " << (r.T_min ? csv::format(*r.T_min) : std::string("undefined")) << "\n";
    if (r.beta_choice) {
        const BetaSelection& b = *r.beta_choice;
        os << "beta_interval = (" << csv::format(b.lower) << ", " << csv::format(b.upper) << ")\n";
        if (b.ok) {
            os << "beta_auto = " << csv::format(b.beta) << "\n";
            os << "beta_auto.delta = " << csv::format(b.delta) << "\n";
            os << "beta_auto.delta2 = " << csv::format(b.delta2) << "\n";
        } else {
            os << "beta_auto = none (" << b.reason << ")\n";
        }
    }
    os << "verdict." << hypothesis::kWeightPositivity << " = " << verdict(r.weight_positivity.passed) << "\n";
    os << "verdict." << hypothesis::kEtaGradient << " = " << verdict(r.eta_gradient.passed) << "\n";
    os << "verdict." << hypothesis::kH0Bounds << " = " << verdict(r.h0_bounds.passed) << "\n";
    os << "verdict." << hypothesis::kHorizon << " = " << verdict(r.horizon_ok) << "\n";
    const int last = r.boundary.time_nodes() - 1;
    os << "boundary.lo.t0 = " << to_string(r.boundary.label(Side::kLo, 0)) << "\n";
    os << "boundary.hi.t0 = " << to_string(r.boundary.label(Side::kHi, 0)) << "\n";
    os << "boundary.lo.tT = " << to_string(r.boundary.label(Side::kLo, last)) << "\n";
    os << "boundary.hi.tT = " << to_string(r.boundary.label(Side::kHi, last)) << "\n";
}

void write_boundary_csv(std::ostream& os, const Scenario& scenario, const BoundaryClassification& bc) {
    const auto& grid = scenario.grid;
    os << "side,x,normal,n,t,label\n";
    for (int n = 0; n < bc.time_nodes(); ++n) {
        for (Side side : kSides) {
            csv::Row(os) << to_string(side) << grid.x(boundary_node(grid, side)) << outward_normal(side) << n
                         << grid.t(n) << to_string(bc.label(side, n));
        }
    }
}

}  // namespace symhyp
