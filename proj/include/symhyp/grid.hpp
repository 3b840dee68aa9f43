#pragma once

#include <Eigen/Dense>

namespace symhyp {

/// Largest supported system size N. Small matrices live on the stack.
inline constexpr int kMaxSystemSize = 8;

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                             kMaxSystemSize, kMaxSystemSize>;
using Vector = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxSystemSize, 1>;

enum class Axis { kX, kT };

/// Uniform tensor grid on Q = (x_lo, x_hi) x (0, T).
///
/// Node (i, n) sits at (x_lo + i*hx, n*ht) with i in [0, nx) and n in [0, nt).
/// The spatial dimension is carried as a constant so that a rectangle
/// extension only adds members.
class SpaceTimeGrid {
public:
    static constexpr int kSpatialDim = 1;

    SpaceTimeGrid(double x_lo, double x_hi, double T, int nx, int nt);

    double x_lo() const noexcept { return x_lo_; }
    double x_hi() const noexcept { return x_hi_; }
    double T() const noexcept { return T_; }
    int nx() const noexcept { return nx_; }
    int nt() const noexcept { return nt_; }
    double hx() const noexcept { return (x_hi_ - x_lo_) / (nx_ - 1); }
    double ht() const noexcept { return T_ / (nt_ - 1); }
    double length() const noexcept { return x_hi_ - x_lo_; }

    double x(int i) const noexcept { return x_lo_ + i * hx(); }
    double t(int n) const noexcept { return n * ht(); }

    int nodes_along(Axis axis) const noexcept { return axis == Axis::kX ? nx_ : nt_; }

    /// Same domain with (n-1) -> 2(n-1) intervals along both axes.
    SpaceTimeGrid refined() const;

    /// Same domain and nx, with nt replaced.
    SpaceTimeGrid with_time_nodes(int nt) const;

    friend bool operator==(const SpaceTimeGrid&, const SpaceTimeGrid&) = default;

private:
    double x_lo_;
    double x_hi_;
    double T_;
    int nx_;
    int nt_;
};

}  // namespace symhyp
