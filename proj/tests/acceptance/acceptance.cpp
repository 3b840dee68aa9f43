// Acceptance suite: prints one [PASS]/[FAIL] line per criterion and exits
// nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "symhyp/cli/catalog.hpp"
#include "symhyp/cli/run.hpp"
#include "symhyp/csv.hpp"
#include "symhyp/estimator.hpp"

using namespace symhyp;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(const char* id, const char* title, bool ok, const std::string& detail) {
    std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

void criterion(const char* id, const char* title, const std::function<bool(std::ostringstream&)>& body) {
    std::ostringstream detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail << " threw: " << e.what();
    }
    report(id, title, ok, detail.str());
}

std::string f(double v) { return csv::format(v); }

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Scenario catalog_scenario(const char* name, double T, int nx) {
    const cli::CatalogEntry* e = cli::find_catalog_entry(name);
    Scenario s = e->build(SpaceTimeGrid(0.0, 1.0, T, nx, 2), Weight::linear(1.0, 0.0, e->default_beta));
    return with_cfl_grid(s);
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Profile sine(const SpaceTimeGrid& g) {
    Profile p(1, g.nx());
    for (int i = 0; i < g.nx(); ++i) p(0, i) = std::sin(M_PI * g.x(i));
    return p;
}

double transport_error(int nx, bool smooth_inflow) {
    const Scenario s = catalog_scenario("transport", 0.5, nx);
    InflowData inflow;
    std::function<double(double)> g;
    if (smooth_inflow) {
        g = [](double t) { return -std::sin(M_PI * t); };
        inflow.lo = [g](double t) { return Vector::Constant(1, g(t)); };
    }
    const SolveResult r = solve(s, sine(s.grid), inflow);
    const GridFunction exact = exact_transport(1.0, [](double x) { return std::sin(M_PI * x); }, g, s.grid);
    const auto w = trapezoid_weights(s.grid.nx(), s.grid.hx());
    const int last = s.grid.nt() - 1;
    double e = 0.0;
    for (int i = 0; i < s.grid.nx(); ++i) e += w[i] * std::pow(r.u(0, i, last) - exact(0, i, last), 2);
    return std::sqrt(e);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

int main() {
    criterion("AC1", "hypothesis arithmetic on the catalog", [](std::ostringstream& d) {
        const HypothesisReport t = check_hypotheses(catalog_scenario("transport", 2.0, 201));
        const HypothesisReport c = check_hypotheses(catalog_scenario("coupled-spd", 4.0, 201));
        bool ok = near(t.eta_gradient.bound, 1, 1e-10) && near(t.h0_bounds.delta1, 1, 1e-10) &&
                  near(t.h0_bounds.M, 1, 1e-10) && t.T_min && near(*t.T_min, 1, 1e-10);
        ok = ok && near(c.eta_gradient.bound, 1, 1e-10) && near(c.h0_bounds.delta1, 1, 1e-10) &&
             near(c.h0_bounds.M, 3, 1e-10) && c.T_min && near(*c.T_min, 3, 1e-10);
        d << "transport delta0=" << f(t.eta_gradient.bound) << " delta1=" << f(t.h0_bounds.delta1)
          << " M=" << f(t.h0_bounds.M) << " T_min=" << f(t.T_min.value_or(NAN)) << "; coupled-spd delta0="
          << f(c.eta_gradient.bound) << " delta1=" << f(c.h0_bounds.delta1) << " M=" << f(c.h0_bounds.M)
          << " T_min=" << f(c.T_min.value_or(NAN));

        const Scenario w = catalog_scenario("wave-type", 2.0, 201);
        const double beta = w.weight.beta;
        double carleman_witness = NAN, observe_witness = NAN;
        try {
            scan_carleman(w, smooth_members(2, 1));
        } catch (const HypothesisRefusal& r) {
            if (r.hypothesis() == hypothesis::kWeightPositivity) carleman_witness = r.witness().value;
        }
        try {
            estimate_observability(w, band_limited_members(2, 1), 1);
        } catch (const HypothesisRefusal& r) {
            if (r.hypothesis() == hypothesis::kEtaGradient) observe_witness = r.witness().value;
        }
        ok = ok && near(carleman_witness, -beta - 1.0, 1e-10) && near(observe_witness, -1.0, 1e-10);
        d << "; wave-type refusals lambda_min=" << f(carleman_witness) << " (beta=" << f(beta) << ") and "
          << f(observe_witness);
        return ok;
    });

    criterion("AC2", "boundary partition", [](std::ostringstream& d) {
        auto labels = [](const Matrix& h1) {
            const int n = static_cast<int>(h1.rows());
            const Scenario s{"b", SpaceTimeGrid(0, 1, 1, 5, 3), n, constant_field(Matrix::Identity(n, n), "I"),
                             constant_field(h1, "H1"), zero_field(n), VectorField::zero(n), Weight::linear(1, 0, 0.5)};
            const BoundaryClassification bc(s);
            std::array<BoundaryLabel, 2> first{bc.label(Side::kLo, 0), bc.label(Side::kHi, 0)};
            for (int n2 = 1; n2 < bc.time_nodes(); ++n2) {
                if (bc.label(Side::kLo, n2) != first[0] || bc.label(Side::kHi, n2) != first[1]) first[0] = BoundaryLabel(-1);
            }
            return first;
        };
        const auto a = labels(Matrix::Constant(1, 1, 1.0));
        const auto b = labels(mat2(0, 1, 1, 0));
        const auto c = labels(mat2(2, 1, 1, 2));
        d << "H1=1: " << to_string(a[0]) << "/" << to_string(a[1]) << "; [[0,1],[1,0]]: " << to_string(b[0]) << "/"
          << to_string(b[1]) << "; [[2,1],[1,2]]: " << to_string(c[0]) << "/" << to_string(c[1]);
        return a[0] == BoundaryLabel::kMinus && a[1] == BoundaryLabel::kPlus && b[0] == BoundaryLabel::kNeither &&
               b[1] == BoundaryLabel::kNeither && c[0] == BoundaryLabel::kMinus && c[1] == BoundaryLabel::kPlus;
    });

    criterion("AC3", "solver convergence on the exact transport oracle", [](std::ostringstream& d) {
        const double e1 = transport_error(201, true), e2 = transport_error(401, true), e3 = transport_error(801, true);
        const double p1 = std::log2(e1 / e2), p2 = std::log2(e2 / e3);
        const double z1 = transport_error(201, false), z2 = transport_error(401, false), z3 = transport_error(801, false);
        d << "smooth inflow L2 errors " << f(e1) << ", " << f(e2) << ", " << f(e3) << " orders " << f(p1) << ", "
          << f(p2) << "; zero inflow (kinked solution, informational) orders " << f(std::log2(z1 / z2)) << ", "
          << f(std::log2(z2 / z3));
        return p1 >= 0.9 && p2 >= 0.9;
    });

    criterion("AC4", "identity defects shrink at second order", [](std::ostringstream& d) {
        const Scenario s = catalog_scenario("coupled-spd", 2.0, 101);
        const Scenario r = s.on_grid(s.grid.refined());
        const GridFunction w1 = random_smooth_gridfunction(s.grid, 2, 5, 4, 2.0);
        const GridFunction w2 = random_smooth_gridfunction(r.grid, 2, 5, 4, 2.0);
        const MatrixField id = constant_field(Matrix::Identity(2, 2), "I");
        const MatrixField rx = affine_x_field(Matrix::Identity(2, 2), mat2(1, 0, 0, 0), "1+x");
        bool ok = true;
        auto rate = [&](const char* name, double a, double b) {
            const double q = a / b;
            d << name << " " << f(q) << "; ";
            ok = ok && q >= 3.5;
        };
        rate("ibp[I,x]", ibp_identity_defect(id, w1, Axis::kX), ibp_identity_defect(id, w2, Axis::kX));
        rate("ibp[I,t]", ibp_identity_defect(id, w1, Axis::kT), ibp_identity_defect(id, w2, Axis::kT));
        rate("ibp[1+x,x]", ibp_identity_defect(rx, w1, Axis::kX), ibp_identity_defect(rx, w2, Axis::kX));
        rate("ibp[H1,x]", ibp_identity_defect(s.h1, w1, Axis::kX), ibp_identity_defect(s.h1, w2, Axis::kX));
        for (double sv : {1.0, 4.0}) {
            rate(sv == 1.0 ? "conj[s=1]" : "conj[s=4]", conjugation_defect(w1, s, sv).defect,
                 conjugation_defect(w2, r, sv).defect);
        }
        return ok;
    });

    criterion("AC5", "Carleman boundedness on coupled-spd", [](std::ostringstream& d) {
        const Scenario s = catalog_scenario("coupled-spd", 2.0, 201);
        CarlemanScanOptions opt;
        opt.ensemble_size = 20;
        const MemberGenerator members = smooth_members(2, 1);
        const CarlemanScanReport rep = scan_carleman(s, members, opt);
        bool finite = rep.base.violation_candidates == 0 && rep.refined && rep.refined->violation_candidates == 0;
        for (double v : rep.base.rho_max) finite = finite && std::isfinite(v);
        for (double v : rep.refined->rho_max) finite = finite && std::isfinite(v);
        double worst = 0.0;
        for (int m = 0; m < opt.ensemble_size; ++m) {
            const GridFunction u = members(s.grid, m);
            const GridFunction u3 = 3.0 * u;
            const GridFunction fu = residual(u, s), f3 = residual(u3, s);
            for (double sv : opt.s_grid) {
                const double a = carleman_ratio(carleman_terms(u, fu, s, sv)).value;
                const double b = carleman_ratio(carleman_terms(u3, f3, s, sv)).value;
                worst = std::max(worst, std::abs(a - b) / a);
            }
        }
        d << "rho_max(201)=";
        for (double v : rep.base.rho_max) d << f(v) << " ";
        d << "C_hat " << f(rep.base.C_hat) << " -> " << f(rep.refined->C_hat) << " drift " << f(*rep.drift)
          << "; u->3u max rel change " << f(worst);
        return finite && *rep.drift < 0.2 && worst <= 1e-12;
    });

    criterion("AC6", "observability above T_min", [](std::ostringstream& d) {
        const Scenario s = catalog_scenario("transport", 1.5, 401);
        const ObservabilityReport r = estimate_observability(s, band_limited_members(1, 1, 4, 2.0), 20);
        d << "T=" << f(r.T) << " T_min=" << f(r.T_min) << " C_obs=" << f(r.C_obs) << " verdict=" << to_string(r.verdict);
        return r.verdict == ObservabilityVerdict::kObservable && r.C_obs <= 1.1;
    });

    criterion("AC7", "observability counterexample below T_min", [](std::ostringstream& d) {
        auto ratio = [](int nx) {
            const Scenario s = catalog_scenario("transport", 0.5, nx);
            const ObservabilityReport r = estimate_observability(
                s, [](const SpaceTimeGrid& g, int) { return bump_profile(g, 1, 0.0, 0.4); }, 1);
            return r.counterexample ? r.counterexample->ratio.value : NAN;
        };
        const double r401 = ratio(401), r801 = ratio(801);
        d << "r(401)=" << f(r401) << " r(801)=" << f(r801);
        return r401 > 10.0 && r801 > r401;
    });

    criterion("AC8", "energy estimate", [](std::ostringstream& d) {
        bool ok = true;
        int checked = 0;
        for (const auto& e : cli::catalog()) {
            const Scenario s = catalog_scenario(e.name.c_str(), e.default_T, 201);
            if (!check_h0_bounds(s).passed) continue;
            const EnergyReport r = verify_energy_estimate(s, band_limited_members(s.n, 1), 20);
            ++checked;
            d << e.name << " C_energy=" << f(r.C_energy) << "; ";
            ok = ok && std::isfinite(r.C_energy);
            if (e.name == "transport") ok = ok && r.C_energy <= 1.05;
        }
        return ok && checked >= 1;
    });

    criterion("AC9", "determinism of CSV artifacts", [](std::ostringstream& d) {
        using cli::Experiment;
        bool ok = true;
        int files = 0;
        const fs::path root = fs::temp_directory_path() / "symhyp_acceptance";
        for (Experiment e : {Experiment::kHypotheses, Experiment::kSolve, Experiment::kCarlemanScan,
                             Experiment::kObservability, Experiment::kEnergy, Experiment::kIdentities}) {
            cli::RunConfig c;
            c.experiment = e;
            c.scenario = "coupled-varying";
            c.grid.nx = 51;
            c.ensemble = 5;
            c.seed = 7;
            std::ostringstream sink;
            for (const char* tag : {"a", "b"}) {
                c.output = (root / tag).string();
                fs::remove_all(c.output);
                cli::run(c, sink, sink);
            }
            for (const auto& entry : fs::directory_iterator(root / "a")) {
                if (entry.path().extension() != ".csv") continue;
                ++files;
                ok = ok && slurp(entry.path()) == slurp(root / "b" / entry.path().filename());
            }
        }
        d << files << " CSV files compared across two runs";
        return ok && files >= 6;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
