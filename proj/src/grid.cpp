#include "symhyp/grid.hpp"

#include <cmath>
#include <string>

#include "symhyp/error.hpp"

namespace symhyp {

SpaceTimeGrid::SpaceTimeGrid(double x_lo, double x_hi, double T, int nx, int nt)
    : x_lo_(x_lo), x_hi_(x_hi), T_(T), nx_(nx), nt_(nt) {
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || !(x_hi > x_lo)) {
        throw InvalidArgument("grid: x_hi must exceed x_lo");
    }
    if (!std::isfinite(T) || !(T > 0.0)) throw InvalidArgument("grid: T must be > 0");
    if (nx < 3) throw InvalidArgument("grid: Nx must be >= 3, got " + std::to_string(nx));
    if (nt < 2) throw InvalidArgument("grid: Nt must be >= 2, got " + std::to_string(nt));
}

SpaceTimeGrid SpaceTimeGrid::refined() const {
    return {x_lo_, x_hi_, T_, 2 * (nx_ - 1) + 1, 2 * (nt_ - 1) + 1};
}

SpaceTimeGrid SpaceTimeGrid::with_time_nodes(int nt) const { return {x_lo_, x_hi_, T_, nx_, nt}; }

}  // namespace symhyp
