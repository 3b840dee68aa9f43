#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "symhyp/grid_function.hpp"
#include "symhyp/hypotheses.hpp"
#include "symhyp/scenario.hpp"
#include "symhyp/solver.hpp"

namespace symhyp {

/// Composite trapezoid weights for `count` uniform nodes of spacing h.
std::vector<double> trapezoid_weights(int count, double h);

/// The six weighted integrals of the Carleman inequality at parameter s.
///
/// All values are multiplied by exp(-log_scale) with
/// log_scale = 2 s max_Q phi, so that e^{2 s phi} never overflows; both
/// sides of the inequality carry the same factor, so ratios are unaffected.
struct CarlemanTerms {
    double s = 0.0;
    double log_scale = 0.0;
    double lhs_initial = 0.0;      // s   int_Omega (H0 u.u)(x,0) e^{2 s phi(x,0)}
    double lhs_volume = 0.0;       // s^2 int_Q |u|^2 e^{2 s phi}
    double lhs_gamma_minus = 0.0;  // s   int int_{MINUS} |(H1 nu u.u)| e^{2 s phi}
    double rhs_source = 0.0;       //     int_Q |F|^2 e^{2 s phi}
    double rhs_gamma_rest = 0.0;   // s   int int_{PLUS or NEITHER} |u|^2 e^{2 s phi}
    double rhs_terminal = 0.0;     // s   int_Omega (H0 u.u)(x,T) e^{2 s phi(x,T)}

    double lhs() const { return lhs_initial + lhs_volume + lhs_gamma_minus; }
    double rhs() const { return rhs_source + rhs_gamma_rest + rhs_terminal; }
};

CarlemanTerms carleman_terms(const GridFunction& u, const GridFunction& source, const Scenario& scenario,
                             double s, const BoundaryClassification& boundary);
CarlemanTerms carleman_terms(const GridFunction& u, const GridFunction& source, const Scenario& scenario,
                             double s);

/// A quotient num/den that may be 0/0 or x/0.
struct Ratio {
    enum class Kind { kFinite, kDegenerate, kInfinite };
    Kind kind = Kind::kDegenerate;
    double value = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;

    static Ratio of(double num, double den);
    bool finite() const { return kind == Kind::kFinite; }
};
const char* to_string(Ratio::Kind kind);

/// lhs / rhs of the Carleman inequality.
Ratio carleman_ratio(const CarlemanTerms& terms);

/// Energy E(t) = int |u|^2 dx together with both sides of the energy estimate
///   E(t) + int_0^t int_{PLUS} (H1 nu u.u)  vs  E(0) + int_0^T int_{not PLUS} |u|^2.
struct EnergyLedger {
    std::vector<double> E;
    std::vector<double> energy_lhs;
    double energy_rhs_core = 0.0;
};

EnergyLedger energy_ledger(const GridFunction& u, const Scenario& scenario,
                           const BoundaryClassification& boundary);
EnergyLedger energy_ledger(const GridFunction& u, const Scenario& scenario);

/// ||u(.,0)||_{L2(Omega)} / ||u||_{L2(boundary x (0,T))}.
Ratio observability_ratio(const SolveResult& result);

/// L2(Omega) norm of a profile by trapezoid quadrature.
double profile_norm(const Profile& p, const SpaceTimeGrid& grid);

/// L2(boundary x (0, T)) norm of the recorded traces.
double trace_norm(const SolveResult& result);

/// max over nodes interior along `axis` of
///   | (R d_k w . w) - 1/2 d_k (R w . w) + 1/2 ((d_k R) w . w) |
/// with every derivative taken by central differences (d_k R analytically
/// when R carries the derivative).
double ibp_identity_defect(const MatrixField& R, const GridFunction& w, Axis axis);

/// max over interior nodes of
///   | e^{s phi} L(e^{-s phi} w) - (H0 w_t + H1 w_x - s A w) |,
/// w = e^{s phi} u, A = (d_t phi) H0 + (d_x phi) H1, L = H0 d_t + H1 d_x,
/// all derivatives by central differences. Reported in units of
/// e^{s max phi} (w is formed with phi - max phi).
struct ConjugationDefect {
    double defect = 0.0;
    double log_scale = 0.0;  // s * max_Q phi
};
ConjugationDefect conjugation_defect(const GridFunction& u, const Scenario& scenario, double s);

/// Header + one row per term set: scenario,s,member,log_scale,<six terms>,ratio.
void write_carleman_header(std::ostream& os);
void write_carleman_row(std::ostream& os, const std::string& scenario, int member, const CarlemanTerms& terms);

/// Header + rows scenario,member,n,t,E,energy_lhs,energy_rhs_core.
void write_energy_header(std::ostream& os);
void write_energy_rows(std::ostream& os, const std::string& scenario, int member, const EnergyLedger& ledger,
                       const SpaceTimeGrid& grid);

}  // namespace symhyp
