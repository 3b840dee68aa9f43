#include "symhyp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "symhyp/csv.hpp"
#include "symhyp/error.hpp"

namespace symhyp {

HypothesisRefusal::HypothesisRefusal(HypothesisReport report, std::string hypothesis, NodeWitness witness)
    : Error("hypothesis '" + hypothesis + "' fails on scenario '" + report.scenario + "' at node (i=" +
            std::to_string(witness.i) + ", n=" + std::to_string(witness.n) + "), value " +
            csv::format(witness.value)),
      report_(std::move(report)),
      hypothesis_(std::move(hypothesis)),
      witness_(witness) {}

MemberGenerator smooth_members(int n, std::uint64_t seed, int modes, double decay) {
    return [=](const SpaceTimeGrid& grid, int index) {
        return random_smooth_gridfunction(grid, n, seed + static_cast<std::uint64_t>(index), modes, decay);
    };
}

ProfileGenerator band_limited_members(int n, std::uint64_t seed, int modes, double decay) {
    return [=](const SpaceTimeGrid& grid, int index) {
        return random_band_limited_profile(grid, n, seed + static_cast<std::uint64_t>(index), modes, decay);
    };
}

double stabilized_s0(const std::vector<double>& s_grid, const std::vector<double>& rho_max) {
    if (s_grid.empty() || s_grid.size() != rho_max.size()) throw InvalidArgument("stabilized_s0: bad input");
    std::vector<std::size_t> order(s_grid.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s_grid[a] < s_grid[b]; });

    const std::size_t count = order.size();
    const std::size_t first_tail = count / 2;
    std::vector<double> tail;
    for (std::size_t k = first_tail; k < count; ++k) tail.push_back(rho_max[order[k]]);
    std::sort(tail.begin(), tail.end());
    const std::size_t m = tail.size();
    const double median = m % 2 == 1 ? tail[m / 2] : 0.5 * (tail[m / 2 - 1] + tail[m / 2]);

    // Walk down from the largest s while the values stay within 10%.
    std::size_t start = count - 1;
    for (std::size_t k = count; k-- > 0;) {
        const double rho = rho_max[order[k]];
        if (!(std::abs(rho - median) <= 0.1 * std::abs(median))) break;
        start = k;
    }
    return s_grid[order[start]];
}

namespace {

CarlemanScanLevel scan_level(const Scenario& scenario, const MemberGenerator& members,
                             const CarlemanScanOptions& options, std::vector<CarlemanScanRow>* rows) {
    const auto& s_grid = options.s_grid;
    const std::size_t ns = s_grid.size();
    CarlemanScanLevel level{scenario.grid, std::vector<double>(ns, 0.0), std::vector<int>(ns, -1), 0.0, 0.0, 0, 0};
    const BoundaryClassification boundary(scenario);

    if (rows) rows->assign(ns * static_cast<std::size_t>(options.ensemble_size), CarlemanScanRow{});
    int usable = 0;
    for (int m = 0; m < options.ensemble_size; ++m) {
        const GridFunction u = members(scenario.grid, m);
        if (!(u.grid() == scenario.grid) || u.n() != scenario.n) {
            throw InvalidArgument("scan_carleman: member does not match the scenario grid");
        }
        const bool degenerate = u.is_zero();
        if (degenerate) {
            ++level.degenerate_members;
        } else {
            ++usable;
        }
        const GridFunction f = residual(u, scenario);
        for (std::size_t k = 0; k < ns; ++k) {
            const CarlemanTerms terms = carleman_terms(u, f, scenario, s_grid[k], boundary);
            const Ratio r = carleman_ratio(terms);
            if (rows) (*rows)[k * static_cast<std::size_t>(options.ensemble_size) + m] = {m, terms, r};
            if (degenerate) continue;
            if (r.kind == Ratio::Kind::kInfinite) {
                ++level.violation_candidates;
                level.rho_max[k] = std::numeric_limits<double>::infinity();
                level.rho_argmax[k] = m;
            } else if (r.finite() && (level.rho_argmax[k] < 0 || r.value > level.rho_max[k])) {
                level.rho_max[k] = r.value;
                level.rho_argmax[k] = m;
            }
        }
    }
    if (usable == 0) {
        level.rho_max.assign(ns, std::numeric_limits<double>::quiet_NaN());
        level.C_hat = std::numeric_limits<double>::quiet_NaN();
        level.s0_hat = std::numeric_limits<double>::quiet_NaN();
        return level;
    }
    level.s0_hat = stabilized_s0(s_grid, level.rho_max);
    level.C_hat = 0.0;
    for (std::size_t k = 0; k < ns; ++k) {
        if (s_grid[k] >= level.s0_hat) level.C_hat = std::max(level.C_hat, level.rho_max[k]);
    }
    return level;
}

}  // namespace

CarlemanScanReport scan_carleman(const Scenario& scenario, const MemberGenerator& members,
                                 const CarlemanScanOptions& options) {
    if (options.s_grid.empty()) throw InvalidArgument("scan_carleman: empty s grid");
    for (double s : options.s_grid) {
        if (!(s > 0.0)) throw InvalidArgument("scan_carleman: s values must be > 0");
    }
    if (options.ensemble_size < 1) throw InvalidArgument("scan_carleman: ensemble size must be >= 1");
    HypothesisReport hyp = check_hypotheses(scenario);
    if (!hyp.weight_positivity.passed) {
        const NodeWitness w = hyp.weight_positivity.worst;
        throw HypothesisRefusal(std::move(hyp), hypothesis::kWeightPositivity, w);
    }

    std::vector<CarlemanScanRow> rows;
    CarlemanScanLevel base = scan_level(scenario, members, options, &rows);
    CarlemanScanReport report{scenario.name, options.s_grid, options.ensemble_size, std::move(base),
                              std::nullopt,   std::nullopt,   std::move(rows),        std::move(hyp)};
    if (options.refine) {
        report.refined = scan_level(scenario.on_grid(scenario.grid.refined()), members, options, nullptr);
        report.drift = std::abs(report.refined->C_hat - report.base.C_hat) / std::abs(report.base.C_hat);
    }
    return report;
}

const char* to_string(ObservabilityVerdict v) {
    return v == ObservabilityVerdict::kObservable ? "OBSERVABLE" : "NOT-CERTIFIED";
}

namespace {

HypothesisReport require_energy_hypotheses(const Scenario& scenario, bool need_eta_gradient) {
    HypothesisReport hyp = check_hypotheses(scenario);
    if (!hyp.h0_bounds.passed) {
        const NodeWitness w = hyp.h0_bounds.worst_min;
        throw HypothesisRefusal(std::move(hyp), hypothesis::kH0Bounds, w);
    }
    if (need_eta_gradient && !hyp.eta_gradient.passed) {
        const NodeWitness w = hyp.eta_gradient.worst;
        throw HypothesisRefusal(std::move(hyp), hypothesis::kEtaGradient, w);
    }
    return hyp;
}

}  // namespace

ObservabilityReport estimate_observability(const Scenario& input, const ProfileGenerator& initial_data,
                                           int ensemble_size, const SolverOptions& solver) {
    if (ensemble_size < 1) throw InvalidArgument("estimate_observability: ensemble size must be >= 1");
    const Scenario scenario = input.with_zero_source();
    HypothesisReport hyp = require_energy_hypotheses(scenario, true);

    ObservabilityReport report{scenario.name, scenario.grid.T(), *hyp.T_min, {}, 0.0, 0,
                               ObservabilityVerdict::kNotCertified, std::nullopt, {}, std::move(hyp)};
    const bool horizon_ok = report.T > report.T_min;
    if (!horizon_ok) {
        report.warnings.push_back("T = " + csv::format(report.T) + " does not exceed T_min = " +
                                  csv::format(report.T_min) + "; observability is not guaranteed");
    }

    bool all_finite = true;
    int usable = 0;
    for (int m = 0; m < ensemble_size; ++m) {
        const Profile u0 = initial_data(scenario.grid, m);
        const SolveResult result = solve(scenario, u0, {}, solver);
        const Ratio r = observability_ratio(result);
        ObservabilitySample sample{m, r.numerator, r.denominator, r};
        report.samples.push_back(sample);
        if (r.kind == Ratio::Kind::kDegenerate) {
            ++report.degenerate_members;
            continue;
        }
        ++usable;
        if (r.kind == Ratio::Kind::kInfinite) all_finite = false;
        if (r.value > report.C_obs) report.C_obs = r.value;
        if (!report.counterexample || r.value > report.counterexample->ratio.value) report.counterexample = sample;
    }
    if (horizon_ok && all_finite && usable > 0) {
        report.verdict = ObservabilityVerdict::kObservable;
        report.counterexample.reset();
    }
    return report;
}

EnergyReport verify_energy_estimate(const Scenario& input, const ProfileGenerator& initial_data, int ensemble_size,
                                    const SolverOptions& solver) {
    if (ensemble_size < 1) throw InvalidArgument("verify_energy_estimate: ensemble size must be >= 1");
    const Scenario scenario = input.with_zero_source();
    const HypothesisReport hyp = require_energy_hypotheses(scenario, false);
    EnergyReport report{scenario.name, {}, 0.0, 0};
    const BoundaryClassification& boundary = hyp.boundary;
    for (int m = 0; m < ensemble_size; ++m) {
        const Profile u0 = initial_data(scenario.grid, m);
        const SolveResult result = solve(scenario, u0, {}, solver);
        EnergyLedger ledger = energy_ledger(result.u, scenario, boundary);
        if (!(ledger.energy_rhs_core > 0.0)) {
            ++report.degenerate_members;
            continue;
        }
        const double peak = *std::max_element(ledger.energy_lhs.begin(), ledger.energy_lhs.end());
        const double ratio = peak / ledger.energy_rhs_core;
        report.C_energy = std::max(report.C_energy, ratio);
        report.samples.push_back({m, ratio, std::move(ledger)});
    }
    return report;
}

void write_scan_summary_csv(std::ostream& os, const CarlemanScanReport& report) {
    os << "scenario,nx,nt,s,rho_max,argmax_member\n";
    auto emit = [&](const CarlemanScanLevel& level) {
        for (std::size_t k = 0; k < report.s_grid.size(); ++k) {
            csv::Row(os) << report.scenario << level.grid.nx() << level.grid.nt() << report.s_grid[k]
                         << level.rho_max[k] << level.rho_argmax[k];
        }
    };
    emit(report.base);
    if (report.refined) emit(*report.refined);
}

void write_scan_summary_text(std::ostream& os, const CarlemanScanReport& report) {
    auto level_text = [&](const char* tag, const CarlemanScanLevel& level) {
        os << tag << ".nx = " << level.grid.nx() << "\n";
        os << tag << ".nt = " << level.grid.nt() << "\n";
        for (std::size_t k = 0; k < report.s_grid.size(); ++k) {
            os << tag << ".rho_max[s=" << csv::format(report.s_grid[k]) << "] = " << csv::format(level.rho_max[k])
               << "\n";
        }
        os << tag << ".s0_hat = " << csv::format(level.s0_hat) << "\n";
        os << tag << ".C_hat = " << csv::format(level.C_hat) << "\n";
        os << tag << ".degenerate_members = " << level.degenerate_members << "\n";
        os << tag << ".violation_candidates = " << level.violation_candidates << "\n";
    };
    os << "[carleman-scan]\n";
    os << "scenario = " << report.scenario << "\n";
    os << "beta = " << csv::format(report.hypotheses.beta) << "\n";
    os << "delta = " << csv::format(report.hypotheses.weight_positivity.bound) << "\n";
    os << "ensemble = " << report.ensemble_size << "\n";
    level_text("base", report.base);
    if (report.refined) level_text("refined", *report.refined);
    if (report.drift) os << "drift = " << csv::format(*report.drift) << "\n";
}

void write_observability_csv(std::ostream& os, const ObservabilityReport& report) {
    os << "scenario,member,initial_norm,trace_norm,ratio\n";
    for (const auto& s : report.samples) {
        csv::Row row(os);
        row << report.scenario << s.member << s.initial_norm << s.trace_norm;
        if (s.ratio.finite()) {
            row << s.ratio.value;
        } else {
            row << to_string(s.ratio.kind);
        }
    }
}

void write_observability_summary(std::ostream& os, const ObservabilityReport& report) {
    os << "[observability]\n";
    os << "scenario = " << report.scenario << "\n";
    os << "T = " << csv::format(report.T) << "\n";
    os << "T_min = " << csv::format(report.T_min) << "\n";
    os << "members = " << report.samples.size() << "\n";
    os << "degenerate_members = " << report.degenerate_members << "\n";
    os << "C_obs = " << csv::format(report.C_obs) << "\n";
    os << "verdict = " << to_string(report.verdict) << "\n";
    for (const auto& w : report.warnings) os << "warning = " << w << "\n";
    if (report.counterexample) {
        const auto& c = *report.counterexample;
        os << "[counterexample]\n";
        os << "member = " << c.member << "\n";
        os << "initial_norm = " << csv::format(c.initial_norm) << "\n";
        os << "trace_norm = " << csv::format(c.trace_norm) << "\n";
        os << "ratio = " << (c.ratio.finite() ? csv::format(c.ratio.value) : std::string(to_string(c.ratio.kind)))
           << "\n";
    }
}

void write_energy_summary(std::ostream& os, const EnergyReport& report) {
    os << "[energy]\n";
    os << "scenario = " << report.scenario << "\n";
    os << "members = " << report.samples.size() + static_cast<std::size_t>(report.degenerate_members) << "\n";
    os << "degenerate_members = " << report.degenerate_members << "\n";
    os << "C_energy = " << csv::format(report.C_energy) << "\n";
}

}  // namespace symhyp
