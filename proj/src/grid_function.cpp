#include "symhyp/grid_function.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "symhyp/error.hpp"

namespace symhyp {

GridFunction::GridFunction(const SpaceTimeGrid& grid, int n) : grid_(grid), n_(n) {
    if (n < 1 || n > kMaxSystemSize) throw InvalidArgument("grid function: bad component count");
    slices_.assign(static_cast<std::size_t>(grid.nt()), Profile::Zero(n, grid.nx()));
}

GridFunction GridFunction::sample(const SpaceTimeGrid& grid, const VectorField& f) {
    GridFunction g(grid, f.n());
    if (f.is_zero()) return g;
    for (int step = 0; step < grid.nt(); ++step) {
        for (int i = 0; i < grid.nx(); ++i) {
            const Vector v = f(grid.x(i), grid.t(step));
            if (v.size() != f.n() || !v.allFinite()) {
                throw EvaluationError("vector field '" + f.label() + "' is not finite", i, step);
            }
            g.at(i, step) = v;
        }
    }
    return g;
}

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (const auto& s : slices_) m = std::max(m, s.cwiseAbs().maxCoeff());
    return m;
}

bool GridFunction::all_finite() const {
    for (const auto& s : slices_) {
        if (!s.allFinite()) return false;
    }
    return true;
}

bool GridFunction::is_zero() const {
    for (const auto& s : slices_) {
        if (!s.isZero(0.0)) return false;
    }
    return true;
}

GridFunction& GridFunction::operator*=(double c) {
    for (auto& s : slices_) s *= c;
    return *this;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (!(other.grid_ == grid_) || other.n_ != n_) throw InvalidArgument("grid function: shape mismatch");
    for (std::size_t k = 0; k < slices_.size(); ++k) slices_[k] += other.slices_[k];
    return *this;
}

bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.grid_ == b.grid_ && a.n_ == b.n_ && a.slices_ == b.slices_;
}

namespace {

void require_stencil(const SpaceTimeGrid& grid, Axis axis) {
    if (grid.nodes_along(axis) < 3) {
        throw InvalidArgument(std::string("central_derivative: need >= 3 nodes along ") +
                              (axis == Axis::kX ? "x" : "t"));
    }
}

// f'(k) from values along one axis; `get(k)` returns a reference to a dense value.
template <typename Get>
auto stencil(Get&& get, int k, int count, double h) {
    using Value = std::decay_t<decltype(get(0))>;
    if (k == 0) return Value((-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h));
    if (k == count - 1) {
        return Value((3.0 * get(count - 1) - 4.0 * get(count - 2) + get(count - 3)) / (2.0 * h));
    }
    return Value((get(k + 1) - get(k - 1)) / (2.0 * h));
}

}  // namespace

GridFunction central_derivative(const GridFunction& f, Axis axis) {
    const auto& grid = f.grid();
    require_stencil(grid, axis);
    GridFunction d(grid, f.n());
    if (axis == Axis::kX) {
        const int nx = grid.nx();
        const double h = grid.hx();
        for (int step = 0; step < grid.nt(); ++step) {
            const Profile& s = f.slice(step);
            Profile& out = d.slice(step);
            out.middleCols(1, nx - 2) = (s.rightCols(nx - 2) - s.leftCols(nx - 2)) / (2.0 * h);
            out.col(0) = (-3.0 * s.col(0) + 4.0 * s.col(1) - s.col(2)) / (2.0 * h);
            out.col(nx - 1) = (3.0 * s.col(nx - 1) - 4.0 * s.col(nx - 2) + s.col(nx - 3)) / (2.0 * h);
        }
    } else {
        auto get = [&f](int step) -> const Profile& { return f.slice(step); };
        for (int step = 0; step < grid.nt(); ++step) {
            d.slice(step) = stencil(get, step, grid.nt(), grid.ht());
        }
    }
    return d;
}

MatrixSamples central_derivative(const MatrixSamples& f, Axis axis) {
    const auto& grid = f.grid;
    require_stencil(grid, axis);
    MatrixSamples d(grid, f.n);
    const bool along_x = axis == Axis::kX;
    const int count = grid.nodes_along(axis);
    const double h = along_x ? grid.hx() : grid.ht();
    for (int step = 0; step < grid.nt(); ++step) {
        for (int i = 0; i < grid.nx(); ++i) {
            const int k = along_x ? i : step;
            auto get = [&](int j) { return along_x ? f.at(j, step) : f.at(i, j); };
            if (k == 0) {
                d.at(i, step) = (-3.0 * get(0) + 4.0 * get(1) - get(2)) / (2.0 * h);
            } else if (k == count - 1) {
                d.at(i, step) = (3.0 * get(count - 1) - 4.0 * get(count - 2) + get(count - 3)) / (2.0 * h);
            } else {
                d.at(i, step) = (get(k + 1) - get(k - 1)) / (2.0 * h);
            }
        }
    }
    return d;
}

namespace {

void require_modes(int modes) {
    if (modes < 1) throw InvalidArgument("random field: modes must be >= 1");
}

double mode_scale(int m, double decay) {
    if (std::isinf(decay) && decay > 0) return m == 1 ? 1.0 : 0.0;
    return std::pow(static_cast<double>(m), -decay);
}

}  // namespace

GridFunction random_smooth_gridfunction(const SpaceTimeGrid& grid, int n, std::uint64_t seed, int modes,
                                        double decay) {
    require_modes(modes);
    if (std::isnan(decay)) throw InvalidArgument("random field: decay is NaN");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    struct Term {
        double amp, freq_t, theta;
    };
    std::vector<Term> terms(static_cast<std::size_t>(n * modes));
    for (int c = 0; c < n; ++c) {
        for (int m = 1; m <= modes; ++m) {
            Term& term = terms[static_cast<std::size_t>(c * modes + m - 1)];
            term.amp = unit(rng) * mode_scale(m, decay);
            term.freq_t = unit(rng) * m;
            term.theta = phase(rng);
        }
    }

    GridFunction g(grid, n);
    constexpr double pi = std::numbers::pi;
    for (int step = 0; step < grid.nt(); ++step) {
        const double tau = grid.t(step) / grid.T();
        for (int i = 0; i < grid.nx(); ++i) {
            const double X = (grid.x(i) - grid.x_lo()) / grid.length();
            for (int c = 0; c < n; ++c) {
                double v = 0.0;
                for (int m = 1; m <= modes; ++m) {
                    const Term& term = terms[static_cast<std::size_t>(c * modes + m - 1)];
                    if (term.amp == 0.0) continue;
                    v += term.amp * std::sin(m * pi * X + term.freq_t * pi * tau + term.theta);
                }
                g(c, i, step) = v;
            }
        }
    }
    return g;
}

Profile random_band_limited_profile(const SpaceTimeGrid& grid, int n, std::uint64_t seed, int modes,
                                    double decay) {
    require_modes(modes);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Eigen::MatrixXd amp(n, modes);
    for (int c = 0; c < n; ++c) {
        for (int k = 1; k <= modes; ++k) amp(c, k - 1) = unit(rng) * mode_scale(k, decay);
    }
    Profile p = Profile::Zero(n, grid.nx());
    for (int i = 0; i < grid.nx(); ++i) {
        const double X = (grid.x(i) - grid.x_lo()) / grid.length();
        for (int k = 1; k <= modes; ++k) {
            p.col(i) += amp.col(k - 1) * std::sin(k * std::numbers::pi * X);
        }
    }
    return p;
}

Profile bump_profile(const SpaceTimeGrid& grid, int n, double lo, double hi) {
    if (!(hi > lo)) throw InvalidArgument("bump_profile: empty support");
    Profile p = Profile::Zero(n, grid.nx());
    for (int i = 0; i < grid.nx(); ++i) {
        const double x = grid.x(i);
        if (x > lo && x < hi) {
            const double s = std::sin(std::numbers::pi * (x - lo) / (hi - lo));
            p.col(i).setConstant(s * s);
        }
    }
    return p;
}

}  // namespace symhyp
