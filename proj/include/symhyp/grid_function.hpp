#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "symhyp/fields.hpp"
#include "symhyp/grid.hpp"

namespace symhyp {

/// Values of an N-vector valued function at one time level: column i holds
/// the vector at x_i.
using Profile = Eigen::MatrixXd;

/// N-vector valued samples on every node of a SpaceTimeGrid.
class GridFunction {
public:
    GridFunction(const SpaceTimeGrid& grid, int n);

    static GridFunction sample(const SpaceTimeGrid& grid, const VectorField& f);

    const SpaceTimeGrid& grid() const noexcept { return grid_; }
    int n() const noexcept { return n_; }

    auto at(int i, int step) { return slices_[static_cast<std::size_t>(step)].col(i); }
    auto at(int i, int step) const { return slices_[static_cast<std::size_t>(step)].col(i); }
    double& operator()(int component, int i, int step) {
        return slices_[static_cast<std::size_t>(step)](component, i);
    }
    double operator()(int component, int i, int step) const {
        return slices_[static_cast<std::size_t>(step)](component, i);
    }

    Profile& slice(int step) { return slices_[static_cast<std::size_t>(step)]; }
    const Profile& slice(int step) const { return slices_[static_cast<std::size_t>(step)]; }

    /// Largest absolute entry.
    double sup_norm() const;
    bool all_finite() const;
    bool is_zero() const;

    GridFunction& operator*=(double c);
    GridFunction& operator+=(const GridFunction& other);
    friend GridFunction operator*(double c, GridFunction g) { return g *= c; }
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }

    friend bool operator==(const GridFunction& a, const GridFunction& b);

private:
    SpaceTimeGrid grid_;
    int n_;
    std::vector<Profile> slices_;
};

/// Second-order central differences in the interior, second-order one-sided
/// differences at the two ends. Requires at least 3 nodes along `axis`.
GridFunction central_derivative(const GridFunction& f, Axis axis);
MatrixSamples central_derivative(const MatrixSamples& f, Axis axis);

/// Truncated trigonometric series per component:
///   u_c(x, t) = sum_{m=1}^{modes} a_{c,m} m^{-decay} sin(m*pi*X + b_{c,m}*pi*tau + theta_{c,m})
/// with X = (x - x_lo)/(x_hi - x_lo), tau = t/T, a ~ U(-1, 1), b ~ U(-m, m),
/// theta ~ U(0, 2*pi). Coefficients depend only on (seed, n, modes), so the
/// same seed describes the same continuous function on every grid.
/// decay = +infinity keeps only the m = 1 term.
GridFunction random_smooth_gridfunction(const SpaceTimeGrid& grid, int n, std::uint64_t seed,
                                        int modes, double decay);

/// Initial datum sum_{k=1}^{modes} a_{c,k} k^{-decay} sin(k*pi*X), a ~ U(-1, 1).
/// Vanishes at both endpoints, so it is compatible with zero inflow.
Profile random_band_limited_profile(const SpaceTimeGrid& grid, int n, std::uint64_t seed, int modes,
                                    double decay);

/// sin^2 bump supported in (lo, hi), same bump in every component.
Profile bump_profile(const SpaceTimeGrid& grid, int n, double lo, double hi);

}  // namespace symhyp
