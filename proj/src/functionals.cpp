#include "symhyp/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "symhyp/csv.hpp"
#include "symhyp/error.hpp"

namespace symhyp {

std::vector<double> trapezoid_weights(int count, double h) {
    std::vector<double> w(static_cast<std::size_t>(count), h);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

namespace {

void require_same_grid(const GridFunction& g, const Scenario& scenario, const char* what) {
    if (!(g.grid() == scenario.grid) || g.n() != scenario.n) {
        throw InvalidArgument(std::string(what) + ": grid function does not match the scenario grid");
    }
}

double max_phi(const Scenario& scenario) {
    const auto& grid = scenario.grid;
    double m = -std::numeric_limits<double>::infinity();
    for (int n = 0; n < grid.nt(); ++n) {
        for (int i = 0; i < grid.nx(); ++i) m = std::max(m, scenario.weight.phi(grid.x(i), grid.t(n)));
    }
    return m;
}

double quadratic_form(const Matrix& m, const Vector& v) { return v.dot(m * v); }

}  // namespace

CarlemanTerms carleman_terms(const GridFunction& u, const GridFunction& source, const Scenario& scenario,
                             double s, const BoundaryClassification& boundary) {
    require_same_grid(u, scenario, "carleman_terms");
    require_same_grid(source, scenario, "carleman_terms");
    if (!(s > 0.0)) throw InvalidArgument("carleman_terms: s must be > 0");
    const auto& grid = scenario.grid;
    if (boundary.time_nodes() != grid.nt()) throw InvalidArgument("carleman_terms: classification size mismatch");

    const double phi_max = max_phi(scenario);
    const auto wx = trapezoid_weights(grid.nx(), grid.hx());
    const auto wt = trapezoid_weights(grid.nt(), grid.ht());
    auto weight = [&](int i, int n) {
        return std::exp(2.0 * s * (scenario.weight.phi(grid.x(i), grid.t(n)) - phi_max));
    };

    CarlemanTerms terms;
    terms.s = s;
    terms.log_scale = 2.0 * s * phi_max;

    const int last = grid.nt() - 1;
    double initial = 0.0;
    double terminal = 0.0;
    for (int i = 0; i < grid.nx(); ++i) {
        const double x = grid.x(i);
        initial += wx[i] * quadratic_form(scenario.h0(x, 0.0), u.at(i, 0)) * weight(i, 0);
        terminal += wx[i] * quadratic_form(scenario.h0(x, grid.t(last)), u.at(i, last)) * weight(i, last);
    }
    terms.lhs_initial = s * initial;
    terms.rhs_terminal = s * terminal;

    double volume = 0.0;
    double forcing = 0.0;
    for (int n = 0; n < grid.nt(); ++n) {
        double vol_n = 0.0;
        double src_n = 0.0;
        for (int i = 0; i < grid.nx(); ++i) {
            const double e = weight(i, n);
            vol_n += wx[i] * u.at(i, n).squaredNorm() * e;
            src_n += wx[i] * source.at(i, n).squaredNorm() * e;
        }
        volume += wt[n] * vol_n;
        forcing += wt[n] * src_n;
    }
    terms.lhs_volume = s * s * volume;
    terms.rhs_source = forcing;

    double minus = 0.0;
    double rest = 0.0;
    for (int n = 0; n < grid.nt(); ++n) {
        for (Side side : kSides) {
            const int b = boundary_node(grid, side);
            const Vector ub = u.at(b, n);
            const double e = weight(b, n);
            if (boundary.label(side, n) == BoundaryLabel::kMinus) {
                const Matrix flux = outward_normal(side) * scenario.h1(grid.x(b), grid.t(n));
                minus += wt[n] * std::abs(quadratic_form(flux, ub)) * e;
            } else {
                rest += wt[n] * ub.squaredNorm() * e;
            }
        }
    }
    terms.lhs_gamma_minus = s * minus;
    terms.rhs_gamma_rest = s * rest;
    return terms;
}

CarlemanTerms carleman_terms(const GridFunction& u, const GridFunction& source, const Scenario& scenario,
                             double s) {
    return carleman_terms(u, source, scenario, s, BoundaryClassification(scenario));
}

Ratio Ratio::of(double num, double den) {
    Ratio r;
    r.numerator = num;
    r.denominator = den;
    if (den > 0.0) {
        r.kind = Kind::kFinite;
        r.value = num / den;
    } else if (num > 0.0) {
        r.kind = Kind::kInfinite;
        r.value = std::numeric_limits<double>::infinity();
    } else {
        r.kind = Kind::kDegenerate;
        r.value = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

const char* to_string(Ratio::Kind kind) {
    switch (kind) {
        case Ratio::Kind::kFinite: return "finite";
        case Ratio::Kind::kDegenerate: return "degenerate";
        case Ratio::Kind::kInfinite: return "infinite";
    }
    return "?";
}

Ratio carleman_ratio(const CarlemanTerms& terms) { return Ratio::of(terms.lhs(), terms.rhs()); }

EnergyLedger energy_ledger(const GridFunction& u, const Scenario& scenario, const BoundaryClassification& boundary) {
    require_same_grid(u, scenario, "energy_ledger");
    const auto& grid = scenario.grid;
    if (boundary.time_nodes() != grid.nt()) throw InvalidArgument("energy_ledger: classification size mismatch");
    const auto wx = trapezoid_weights(grid.nx(), grid.hx());
    const double ht = grid.ht();

    EnergyLedger ledger;
    ledger.E.resize(static_cast<std::size_t>(grid.nt()));
    ledger.energy_lhs.resize(static_cast<std::size_t>(grid.nt()));
    std::vector<double> outflow(static_cast<std::size_t>(grid.nt()), 0.0);
    std::vector<double> rest(static_cast<std::size_t>(grid.nt()), 0.0);
    for (int n = 0; n < grid.nt(); ++n) {
        double e = 0.0;
        for (int i = 0; i < grid.nx(); ++i) e += wx[i] * u.at(i, n).squaredNorm();
        ledger.E[n] = e;
        for (Side side : kSides) {
            const int b = boundary_node(grid, side);
            const Vector ub = u.at(b, n);
            if (boundary.label(side, n) == BoundaryLabel::kPlus) {
                const Matrix flux = outward_normal(side) * scenario.h1(grid.x(b), grid.t(n));
                outflow[n] += quadratic_form(flux, ub);
            } else {
                rest[n] += ub.squaredNorm();
            }
        }
    }
    double cumulative = 0.0;
    double rest_total = 0.0;
    for (int n = 0; n < grid.nt(); ++n) {
        if (n > 0) {
            cumulative += 0.5 * ht * (outflow[n - 1] + outflow[n]);
            rest_total += 0.5 * ht * (rest[n - 1] + rest[n]);
        }
        ledger.energy_lhs[n] = ledger.E[n] + cumulative;
    }
    ledger.energy_rhs_core = ledger.E[0] + rest_total;
    return ledger;
}

EnergyLedger energy_ledger(const GridFunction& u, const Scenario& scenario) {
    return energy_ledger(u, scenario, BoundaryClassification(scenario));
}

double profile_norm(const Profile& p, const SpaceTimeGrid& grid) {
    const auto wx = trapezoid_weights(grid.nx(), grid.hx());
    double sum = 0.0;
    for (int i = 0; i < grid.nx(); ++i) sum += wx[i] * p.col(i).squaredNorm();
    return std::sqrt(sum);
}

double trace_norm(const SolveResult& result) {
    const auto& grid = result.u.grid();
    const auto wt = trapezoid_weights(grid.nt(), grid.ht());
    double sum = 0.0;
    for (Side side : kSides) {
        for (int n = 0; n < grid.nt(); ++n) sum += wt[n] * result.trace(side).col(n).squaredNorm();
    }
    return std::sqrt(sum);
}

Ratio observability_ratio(const SolveResult& result) {
    return Ratio::of(profile_norm(result.u.slice(0), result.u.grid()), trace_norm(result));
}

double ibp_identity_defect(const MatrixField& R, const GridFunction& w, Axis axis) {
    if (R.n() != w.n()) throw InvalidArgument("ibp_identity_defect: size mismatch");
    const auto& grid = w.grid();
    require_symmetric(R, grid);
    const MatrixSamples r = sample_field(R, grid);
    const MatrixSamples dr = field_derivative(R, grid, axis);
    const GridFunction dw = central_derivative(w, axis);

    GridFunction q(grid, 1);
    for (int n = 0; n < grid.nt(); ++n) {
        for (int i = 0; i < grid.nx(); ++i) q(0, i, n) = quadratic_form(r.at(i, n), w.at(i, n));
    }
    const GridFunction dq = central_derivative(q, axis);

    const int i0 = axis == Axis::kX ? 1 : 0;
    const int i1 = axis == Axis::kX ? grid.nx() - 1 : grid.nx();
    const int n0 = axis == Axis::kT ? 1 : 0;
    const int n1 = axis == Axis::kT ? grid.nt() - 1 : grid.nt();
    double defect = 0.0;
    for (int n = n0; n < n1; ++n) {
        for (int i = i0; i < i1; ++i) {
            const Vector wi = w.at(i, n);
            const double lhs = Vector(r.at(i, n) * Vector(dw.at(i, n))).dot(wi);
            const double rhs = 0.5 * dq(0, i, n) - 0.5 * quadratic_form(dr.at(i, n), wi);
            defect = std::max(defect, std::abs(lhs - rhs));
        }
    }
    return defect;
}

ConjugationDefect conjugation_defect(const GridFunction& u, const Scenario& scenario, double s) {
    require_same_grid(u, scenario, "conjugation_defect");
    if (!(s >= 0.0)) throw InvalidArgument("conjugation_defect: s must be >= 0");
    const auto& grid = scenario.grid;
    const Weight& wgt = scenario.weight;
    const double phi_max = max_phi(scenario);

    GridFunction w(grid, scenario.n);
    for (int n = 0; n < grid.nt(); ++n) {
        for (int i = 0; i < grid.nx(); ++i) {
            w.at(i, n) = std::exp(s * (wgt.phi(grid.x(i), grid.t(n)) - phi_max)) * u.at(i, n);
        }
    }
    if (!w.all_finite()) throw EvaluationError("conjugation_defect: rescaled weight overflowed", 0, 0);

    const GridFunction ut = central_derivative(u, Axis::kT);
    const GridFunction ux = central_derivative(u, Axis::kX);
    const GridFunction wt = central_derivative(w, Axis::kT);
    const GridFunction wx = central_derivative(w, Axis::kX);

    ConjugationDefect out;
    out.log_scale = s * phi_max;
    for (int n = 1; n + 1 < grid.nt(); ++n) {
        const double t = grid.t(n);
        for (int i = 1; i + 1 < grid.nx(); ++i) {
            const double x = grid.x(i);
            const Matrix h0 = scenario.h0(x, t);
            const Matrix h1 = scenario.h1(x, t);
            const double e = std::exp(s * (wgt.phi(x, t) - phi_max));
            const Vector conjugated = e * (h0 * Vector(ut.at(i, n)) + h1 * Vector(ux.at(i, n)));
            const Matrix A = wgt.dphi_dt() * h0 + wgt.dphi_dx(x) * h1;
            const Vector expanded =
                h0 * Vector(wt.at(i, n)) + h1 * Vector(wx.at(i, n)) - s * (A * Vector(w.at(i, n)));
            out.defect = std::max(out.defect, (conjugated - expanded).cwiseAbs().maxCoeff());
        }
    }
    return out;
}

void write_carleman_header(std::ostream& os) {
    os << "scenario,s,member,log_scale,lhs_initial,lhs_volume,lhs_gamma_minus,rhs_source,rhs_gamma_rest,"
          "rhs_terminal,ratio\n";
}

void write_carleman_row(std::ostream& os, const std::string& scenario, int member, const CarlemanTerms& t) {
    const Ratio r = carleman_ratio(t);
    csv::Row row(os);
    row << scenario << t.s << member << t.log_scale << t.lhs_initial << t.lhs_volume << t.lhs_gamma_minus
        << t.rhs_source << t.rhs_gamma_rest << t.rhs_terminal;
    if (r.finite()) {
        row << r.value;
    } else {
        row << to_string(r.kind);
    }
}

void write_energy_header(std::ostream& os) { os << "scenario,member,n,t,E,energy_lhs,energy_rhs_core\n"; }

void write_energy_rows(std::ostream& os, const std::string& scenario, int member, const EnergyLedger& ledger,
                       const SpaceTimeGrid& grid) {
    for (int n = 0; n < grid.nt(); ++n) {
        csv::Row(os) << scenario << member << n << grid.t(n) << ledger.E[n] << ledger.energy_lhs[n]
                     << ledger.energy_rhs_core;
    }
}

}  // namespace symhyp
