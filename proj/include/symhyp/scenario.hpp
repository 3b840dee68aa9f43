#pragma once

#include <string>

#include "symhyp/fields.hpp"
#include "symhyp/grid.hpp"

namespace symhyp {

/// A complete problem instance
///
///   H0(x,t) u_t + H1(x,t) u_x + P(x,t) u = F(x,t)  on (x_lo, x_hi) x (0, T)
///
/// together with the weight phi = eta(x) - beta*t used by the weighted
/// functionals. H0 and H1 must be symmetric; P is an arbitrary bounded
/// matrix and is never differentiated.
struct Scenario {
    std::string name;
    SpaceTimeGrid grid;
    int n;
    MatrixField h0;
    MatrixField h1;
    MatrixField p;
    VectorField source;
    Weight weight;

    /// Checks sizes and sampled symmetry of H0, H1.
    void check_structure() const;

    /// check_structure() plus beta > 0.
    void validate() const;

    /// Copy with a different grid.
    Scenario on_grid(const SpaceTimeGrid& g) const;
    Scenario with_beta(double beta) const;
    Scenario with_zero_source() const;
};

/// (lambda_min, lambda_max) of a symmetric matrix. Throws InvalidArgument if
/// the input is asymmetric beyond 1e-10.
struct EigenBounds {
    double min;
    double max;
};
EigenBounds min_max_eigenvalues(const Matrix& m);

}  // namespace symhyp
