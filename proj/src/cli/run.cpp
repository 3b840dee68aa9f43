#include "symhyp/cli/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "symhyp/cli/catalog.hpp"
#include "symhyp/csv.hpp"
#include "symhyp/estimator.hpp"
#include "symhyp/functionals.hpp"
#include "symhyp/solver.hpp"

namespace symhyp::cli {

namespace {

namespace fs = std::filesystem;

class IoError : public Error {
public:
    using Error::Error;
};

MatrixField build_field(const FieldSpec& spec, const char* label, bool symmetric) {
    switch (spec.kind) {
        case FieldSpec::Kind::kConstant:
            return constant_field(spec.c0, label, symmetric);
        case FieldSpec::Kind::kAffine:
            return affine_x_field(spec.c0, spec.c1, label, symmetric);
        case FieldSpec::Kind::kCatalog:
            break;
    }
    auto f = catalog_field(spec.catalog_id);
    if (!f) throw ConfigError({std::string("scenario.") + label + ": unknown catalog field '" + spec.catalog_id + "'"});
    return *f;
}

constexpr double kInlineDefaultT = 2.0;

/// Nt from the CFL bound, or nx when H0 is unusable (so that the
/// hypotheses experiment can still report on such a scenario).
int derived_time_nodes(const Scenario& s, double cfl) {
    try {
        return cfl_time_nodes(s, cfl);
    } catch (const EvaluationError&) {
        return s.grid.nx();
    }
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    const fs::path path = dir / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
    return os;
}

void close_output(std::ofstream& os, const fs::path& dir, const std::string& name) {
    os.close();
    if (!os) throw IoError("failed writing '" + (dir / name).string() + "'");
}

template <class Writer>
void write_file(const fs::path& dir, const std::string& name, Writer&& writer) {
    std::ofstream os = open_output(dir, name);
    writer(os);
    close_output(os, dir, name);
}

ProfileGenerator initial_generator(const RunConfig& c, int n) {
    if (c.initial.kind == InitialConfig::Kind::kBump) {
        const double lo = c.initial.lo;
        const double hi = c.initial.hi;
        return [n, lo, hi](const SpaceTimeGrid& g, int) { return bump_profile(g, n, lo, hi); };
    }
    return band_limited_members(n, c.seed, c.initial.modes, c.initial.decay);
}

/// A bump ensemble would repeat one datum, so it runs once.
int initial_ensemble(const RunConfig& c) {
    return c.initial.kind == InitialConfig::Kind::kBump ? 1 : c.ensemble;
}

void emit_header(std::ostream& os, const RunConfig& c, const ResolvedScenario& r) {
    const Scenario& s = r.scenario;
    os << "experiment = " << to_string(c.experiment) << "\n";
    os << "scenario = " << s.name << "\n";
    os << "N = " << s.n << "\n";
    os << "grid = (" << csv::format(s.grid.x_lo()) << ", " << csv::format(s.grid.x_hi()) << ") x (0, "
       << csv::format(s.grid.T()) << ") Nx=" << s.grid.nx() << " Nt=" << s.grid.nt() << "\n";
    os << "eta = " << s.weight.label << "\n";
    os << "beta = " << csv::format(s.weight.beta);
    if (r.auto_beta) {
        os << " (auto, admissible interval (" << csv::format(r.auto_beta->lower) << ", "
           << csv::format(r.auto_beta->upper) << "))";
    }
    os << "\n";
    os << "seed = " << c.seed << "\n";
}

struct Outcome {
    int status = kExitOk;
    std::ostringstream summary;
};

void run_hypotheses(const RunConfig&, const Scenario& s, const fs::path& dir, Outcome& o) {
    const HypothesisReport rep = check_hypotheses(s);
    write_report_text(o.summary, rep);
    const auto failed = rep.failed_hypotheses();
    o.summary << "status = " << (failed.empty() ? "PASS" : "FAIL") << "\n";
    write_file(dir, "hypotheses.txt", [&](std::ostream& os) { write_report_text(os, rep); });
    write_file(dir, "boundary.csv", [&](std::ostream& os) { write_boundary_csv(os, s, rep.boundary); });
    if (!failed.empty()) o.status = kExitCheckFailed;
}

void run_solve(const RunConfig& c, const Scenario& s, const fs::path& dir, Outcome& o) {
    const Profile u0 = initial_generator(c, s.n)(s.grid, 0);
    const SolveResult res = solve(s, u0, {}, SolverOptions{c.grid.cfl});
    const EnergyLedger led = energy_ledger(res.u, s);
    o.summary << "scheme = " << res.scheme << "\n";
    o.summary << "max_speed = " << csv::format(res.max_speed) << "\n";
    o.summary << "cfl_used = " << csv::format(res.cfl_used) << "\n";
    o.summary << "cfl_limit = " << csv::format(res.cfl_limit) << "\n";
    o.summary << "E(0) = " << csv::format(led.E.front()) << "\n";
    o.summary << "E(T) = " << csv::format(led.E.back()) << "\n";
    o.summary << "max_abs_u = " << csv::format(res.u.sup_norm()) << "\n";
    write_file(dir, "solution.csv", [&](std::ostream& os) { write_solution_csv(os, res.u); });
    write_file(dir, "traces.csv", [&](std::ostream& os) { write_traces_csv(os, res); });
    if (!res.u.all_finite()) {
        o.summary << "status = FAIL (non-finite solution)\n";
        o.status = kExitCheckFailed;
    }
}

void run_carleman(const RunConfig& c, const Scenario& s, const fs::path& dir, Outcome& o) {
    CarlemanScanOptions opt;
    opt.s_grid = c.s_grid;
    opt.ensemble_size = c.ensemble;
    opt.refine = c.refine;
    const CarlemanScanReport rep = scan_carleman(s, smooth_members(s.n, c.seed, c.modes, c.decay), opt);
    write_scan_summary_text(o.summary, rep);
    write_file(dir, "carleman_terms.csv", [&](std::ostream& os) {
        write_carleman_header(os);
        for (const auto& row : rep.rows) write_carleman_row(os, rep.scenario, row.member, row.terms);
    });
    write_file(dir, "carleman_summary.csv", [&](std::ostream& os) { write_scan_summary_csv(os, rep); });
    bool ok = rep.base.violation_candidates == 0;
    for (double r : rep.base.rho_max) ok = ok && std::isfinite(r);
    o.summary << "status = " << (ok ? "PASS" : "FAIL") << "\n";
    if (!ok) o.status = kExitCheckFailed;
}

void run_observability(const RunConfig& c, const Scenario& s, const fs::path& dir, Outcome& o) {
    const ObservabilityReport rep = estimate_observability(s.with_zero_source(), initial_generator(c, s.n),
                                                           initial_ensemble(c), SolverOptions{c.grid.cfl});
    write_observability_summary(o.summary, rep);
    write_file(dir, "observability.csv", [&](std::ostream& os) { write_observability_csv(os, rep); });
    const bool short_horizon = !(rep.T > rep.T_min);
    if (rep.verdict == ObservabilityVerdict::kObservable) {
        o.summary << "status = PASS\n";
    } else if (short_horizon) {
        o.summary << "status = PASS (counterexample study below T_min)\n";
    } else {
        o.summary << "status = FAIL (not certified above T_min)\n";
        o.status = kExitCheckFailed;
    }
}

void run_energy(const RunConfig& c, const Scenario& s, const fs::path& dir, Outcome& o) {
    const EnergyReport rep = verify_energy_estimate(s.with_zero_source(), initial_generator(c, s.n),
                                                    initial_ensemble(c), SolverOptions{c.grid.cfl});
    write_energy_summary(o.summary, rep);
    write_file(dir, "energy.csv", [&](std::ostream& os) {
        write_energy_header(os);
        for (const auto& m : rep.samples) write_energy_rows(os, rep.scenario, m.member, m.ledger, s.grid);
    });
    const bool ok = std::isfinite(rep.C_energy);
    o.summary << "status = " << (ok ? "PASS" : "FAIL") << "\n";
    if (!ok) o.status = kExitCheckFailed;
}

constexpr double kIdentityRateFloor = 3.5;
constexpr double kExactDefect = 1e-12;

struct IdentityRow {
    std::string check;
    std::string detail;
    double coarse;
    double fine;
};

void run_identities(const RunConfig& c, const Scenario& s, const fs::path& dir, Outcome& o) {
    const SpaceTimeGrid g1 = s.grid;
    const SpaceTimeGrid g2 = g1.refined();
    const GridFunction w1 = random_smooth_gridfunction(g1, s.n, c.seed, c.modes, c.decay);
    const GridFunction w2 = random_smooth_gridfunction(g2, s.n, c.seed, c.modes, c.decay);
    std::vector<IdentityRow> rows;
    for (const auto* field : {&s.h0, &s.h1}) {
        const std::string name = field == &s.h0 ? "h0" : "h1";
        for (Axis axis : {Axis::kX, Axis::kT}) {
            rows.push_back({"ibp", name + (axis == Axis::kX ? ":x" : ":t"), ibp_identity_defect(*field, w1, axis),
                            ibp_identity_defect(*field, w2, axis)});
        }
    }
    const Scenario s2 = s.on_grid(g2);
    for (double sv : c.s_grid) {
        rows.push_back({"conjugation", "s=" + csv::format(sv), conjugation_defect(w1, s, sv).defect,
                        conjugation_defect(w2, s2, sv).defect});
    }
    bool all_ok = true;
    write_file(dir, "identities.csv", [&](std::ostream& os) {
        csv::Row(os) << "scenario" << "check" << "detail" << "nx_coarse" << "defect_coarse" << "nx_fine"
                     << "defect_fine" << "rate" << "pass";
        for (const auto& r : rows) {
            const double rate = r.fine > 0.0 ? r.coarse / r.fine : HUGE_VAL;
            const bool ok = rate >= kIdentityRateFloor || r.coarse <= kExactDefect;
            all_ok = all_ok && ok;
            csv::Row(os) << s.name << r.check << r.detail << g1.nx() << r.coarse << g2.nx() << r.fine << rate
                         << (ok ? "1" : "0");
            o.summary << r.check << "[" << r.detail << "] defect " << csv::format(r.coarse) << " -> "
                      << csv::format(r.fine) << " rate " << csv::format(rate) << (ok ? " ok" : " LOW") << "\n";
        }
    });
    o.summary << "status = " << (all_ok ? "PASS" : "FAIL") << "\n";
    if (!all_ok) o.status = kExitCheckFailed;
}

void print_refusal(std::ostream& os, const HypothesisRefusal& r) {
    os << "refused: " << r.what() << "\n";
    os << "hypothesis = " << r.hypothesis() << "\n";
    os << "witness.i = " << r.witness().i << "\n";
    os << "witness.n = " << r.witness().n << "\n";
    os << "witness.x = " << csv::format(r.witness().x) << "\n";
    os << "witness.t = " << csv::format(r.witness().t) << "\n";
    os << "witness.value = " << csv::format(r.witness().value) << "\n";
    os << "[report]\n";
    write_report_text(os, r.report());
    os << "status = FAIL\n";
}

}  // namespace

ResolvedScenario resolve_scenario(const RunConfig& c) {
    auto problems = validate_config(c);
    if (!problems.empty()) throw ConfigError(std::move(problems));

    std::string name;
    int n = 0;
    std::optional<MatrixField> h0, h1, p;
    double default_T = kInlineDefaultT;
    std::optional<double> default_beta;
    if (c.inline_scenario) {
        const InlineScenario& in = *c.inline_scenario;
        name = in.name;
        n = in.n;
        h0 = build_field(in.h0, "h0", true);
        h1 = build_field(in.h1, "h1", true);
        p = in.p ? build_field(*in.p, "p", false) : zero_field(n, "0");
        if (h0->n() != n || h1->n() != n || p->n() != n) {
            throw ConfigError({"scenario: catalog field size does not match n"});
        }
    } else {
        const CatalogEntry* e = find_catalog_entry(c.scenario);
        name = e->name;
        n = e->n;
        h0 = e->h0;
        h1 = e->h1;
        p = e->p;
        default_T = e->default_T;
        default_beta = e->default_beta;
    }
    const double T = c.grid.T.value_or(default_T);
    const bool auto_beta = c.weight.beta_auto || (!c.weight.beta && !default_beta);
    const double beta = c.weight.beta ? *c.weight.beta : default_beta.value_or(1.0);

    // Provisional grid; auto beta and the time step need sampled coefficients.
    const SpaceTimeGrid provisional(c.grid.x_lo, c.grid.x_hi, T, c.grid.nx, c.grid.nt.value_or(2));
    Scenario s{name, provisional, n, *h0, *h1, *p, VectorField::zero(n), Weight::linear(c.weight.a, c.weight.b, beta)};
    s.check_structure();
    if (!c.grid.nt) s = s.on_grid(provisional.with_time_nodes(derived_time_nodes(s, c.grid.cfl)));

    ResolvedScenario out{s, std::nullopt};
    if (auto_beta) {
        const DefinitenessCheck eg = check_eta_gradient_positivity(s);
        const H0Bounds hb = check_h0_bounds(s);
        const BetaSelection sel = select_beta(eg.bound, hb.M, s.weight.eta, s.grid);
        if (!sel.ok) {
            HypothesisReport rep = check_hypotheses(s);
            if (!eg.passed) throw HypothesisRefusal(std::move(rep), hypothesis::kEtaGradient, eg.worst);
            if (!hb.passed) throw HypothesisRefusal(std::move(rep), hypothesis::kH0Bounds, hb.worst_min);
            throw HypothesisRefusal(std::move(rep), hypothesis::kHorizon, NodeWitness{0, s.grid.nt() - 1, s.grid.x_lo(), T, T});
        }
        out.scenario = s.with_beta(sel.beta);
        out.auto_beta = sel;
    }
    return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    const fs::path dir(config.output);
    try {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

        std::optional<ResolvedScenario> resolved_scenario;
        try {
            resolved_scenario = resolve_scenario(config);
        } catch (const HypothesisRefusal& refusal) {
            std::ostringstream text;
            text << "experiment = " << to_string(config.experiment) << "\n";
            print_refusal(text, refusal);
            out << text.str();
            write_file(dir, "summary.txt", [&](std::ostream& os) { os << text.str(); });
            return kExitCheckFailed;
        }
        const ResolvedScenario& r = *resolved_scenario;

        RunConfig resolved = config;
        resolved.grid.T = r.scenario.grid.T();
        resolved.grid.nt = r.scenario.grid.nt();
        resolved.weight.beta = r.scenario.weight.beta;
        resolved.weight.beta_auto = false;
        write_file(dir, "config.resolved.json", [&](std::ostream& os) { os << serialize_config(resolved) << "\n"; });

        Outcome o;
        emit_header(o.summary, config, r);
        try {
            switch (config.experiment) {
                case Experiment::kHypotheses: run_hypotheses(config, r.scenario, dir, o); break;
                case Experiment::kSolve: run_solve(config, r.scenario, dir, o); break;
                case Experiment::kCarlemanScan: run_carleman(config, r.scenario, dir, o); break;
                case Experiment::kObservability: run_observability(config, r.scenario, dir, o); break;
                case Experiment::kEnergy: run_energy(config, r.scenario, dir, o); break;
                case Experiment::kIdentities: run_identities(config, r.scenario, dir, o); break;
            }
        } catch (const HypothesisRefusal& refusal) {
            print_refusal(o.summary, refusal);
            o.status = kExitCheckFailed;
        }
        out << o.summary.str();
        write_file(dir, "summary.txt", [&](std::ostream& os) { os << o.summary.str(); });
        return o.status;
    } catch (const ConfigError& e) {
        err << "config error:\n";
        for (const auto& p : e.problems()) err << "  " << p << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace symhyp::cli
