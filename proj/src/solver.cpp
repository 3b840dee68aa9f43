#include "symhyp/solver.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "symhyp/csv.hpp"
#include "symhyp/error.hpp"

namespace symhyp {

namespace {

using GenEigen = Eigen::GeneralizedSelfAdjointEigenSolver<Matrix>;

// Frozen coefficients at one node and one time level.
struct NodeCoefficients {
    Matrix h0inv;
    Matrix advection;  // H0^{-1} H1
    Matrix reaction;   // H0^{-1} P
    Matrix p;
    double speed = 0.0;
};

Matrix invert_h0(const Matrix& h0, int i, int n) {
    Eigen::LLT<Matrix> llt(h0);
    if (llt.info() != Eigen::Success) throw EvaluationError("H0 is not positive definite", i, n);
    return llt.solve(Matrix::Identity(h0.rows(), h0.cols()));
}

double spectral_radius(const Matrix& h0, const Matrix& h1, int i, int n) {
    GenEigen es(h1, h0, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw EvaluationError("H0 is not positive definite", i, n);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool coefficients_time_independent(const Scenario& s) {
    return s.h0.time_independent() && s.h1.time_independent() && s.p.time_independent();
}

std::vector<NodeCoefficients> coefficients_at(const Scenario& s, int step) {
    const auto& grid = s.grid;
    const double t = grid.t(step);
    std::vector<NodeCoefficients> out(static_cast<std::size_t>(grid.nx()));
    for (int i = 0; i < grid.nx(); ++i) {
        const double x = grid.x(i);
        const Matrix h0 = s.h0(x, t);
        const Matrix h1 = s.h1(x, t);
        NodeCoefficients& c = out[static_cast<std::size_t>(i)];
        c.p = s.p(x, t);
        c.h0inv = invert_h0(h0, i, step);
        c.advection = c.h0inv * h1;
        c.reaction = c.h0inv * c.p;
        c.speed = spectral_radius(h0, h1, i, step);
    }
    return out;
}

Vector inflow_value(const InflowData& inflow, Side side, double t, int n) {
    const auto& g = inflow.at(side);
    if (!g) return Vector::Zero(n);
    Vector v = g(t);
    if (v.size() != n || !v.allFinite()) throw InvalidArgument("solve: inflow data has wrong size or is not finite");
    return v;
}

}  // namespace

double max_characteristic_speed(const Scenario& scenario) {
    const auto& grid = scenario.grid;
    const int steps = coefficients_time_independent(scenario) ? 1 : grid.nt();
    double alpha = 0.0;
    for (int n = 0; n < steps; ++n) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = grid.x(i);
            const double t = grid.t(n);
            alpha = std::max(alpha, spectral_radius(scenario.h0(x, t), scenario.h1(x, t), i, n));
        }
    }
    return alpha;
}

int cfl_time_nodes(const Scenario& scenario, double cfl_factor) {
    if (!(cfl_factor > 0.0)) throw InvalidArgument("cfl factor must be > 0");
    const double alpha = max_characteristic_speed(scenario);
    if (alpha == 0.0) return 2;
    const double ht_max = cfl_factor * scenario.grid.hx() / alpha;
    // Guard against ceil() landing one short because of rounding.
    int steps = static_cast<int>(std::ceil(scenario.grid.T() / ht_max - 1e-9));
    while (alpha * (scenario.grid.T() / steps) / scenario.grid.hx() > cfl_factor * (1.0 + 1e-12)) ++steps;
    return std::max(steps, 1) + 1;
}

Scenario with_cfl_grid(const Scenario& scenario, double cfl_factor) {
    return scenario.on_grid(scenario.grid.with_time_nodes(cfl_time_nodes(scenario, cfl_factor)));
}

SolveResult solve(const Scenario& scenario, const Profile& initial, const InflowData& inflow,
                  const SolverOptions& options) {
    scenario.check_structure();
    const auto& grid = scenario.grid;
    const int N = scenario.n;
    const int nx = grid.nx();
    if (initial.rows() != N || initial.cols() != nx) throw InvalidArgument("solve: initial data has wrong shape");
    if (!initial.allFinite()) throw InvalidArgument("solve: initial data is not finite");

    const double hx = grid.hx();
    const double ht = grid.ht();
    const double alpha = max_characteristic_speed(scenario);
    const double courant = alpha * ht / hx;
    if (courant > options.cfl_factor * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "solve: CFL violated (alpha*ht/hx = " << courant << " > " << options.cfl_factor
            << "); need Nt >= " << cfl_time_nodes(scenario, options.cfl_factor);
        throw InvalidArgument(msg.str());
    }

    SolveResult result{GridFunction(grid, N), {Eigen::MatrixXd::Zero(N, grid.nt()), Eigen::MatrixXd::Zero(N, grid.nt())},
                       alpha, courant, options.cfl_factor, "rusanov+characteristic"};
    GridFunction& u = result.u;
    u.slice(0) = initial;

    const bool frozen = coefficients_time_independent(scenario);
    std::vector<NodeCoefficients> coeffs;
    const double lambda = ht / hx;

    for (int n = 0; n + 1 < grid.nt(); ++n) {
        if (!frozen || n == 0) coeffs = coefficients_at(scenario, n);
        const Profile& cur = u.slice(n);
        Profile& next = u.slice(n + 1);
        const double t = grid.t(n);

        Profile source = Profile::Zero(N, nx);
        if (!scenario.source.is_zero()) {
            for (int i = 0; i < nx; ++i) source.col(i) = scenario.source(grid.x(i), t);
        }

        for (int i = 1; i + 1 < nx; ++i) {
            const NodeCoefficients& c = coeffs[static_cast<std::size_t>(i)];
            const double a_loc =
                std::max({coeffs[static_cast<std::size_t>(i - 1)].speed, c.speed, coeffs[static_cast<std::size_t>(i + 1)].speed});
            const Vector ui = cur.col(i);
            const Vector diff = cur.col(i + 1) - cur.col(i - 1);
            const Vector lap = cur.col(i + 1) - 2.0 * ui + cur.col(i - 1);
            Vector un = ui - 0.5 * lambda * (c.advection * diff) + 0.5 * lambda * a_loc * lap;
            un += ht * (c.h0inv * Vector(source.col(i)) - c.reaction * ui);
            next.col(i) = un;
        }

        const double t_next = grid.t(n + 1);
        for (Side side : kSides) {
            const int b = boundary_node(grid, side);
            const int nb = side == Side::kLo ? 1 : nx - 2;
            const double x = grid.x(b);
            const Matrix h0 = scenario.h0(x, t);
            const Matrix flux = outward_normal(side) * scenario.h1(x, t);
            GenEigen es(flux, h0, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
            if (es.info() != Eigen::Success) throw EvaluationError("H0 is not positive definite", b, n);
            const Matrix& V = es.eigenvectors();  // V^T H0 V = I
            const Vector& speeds = es.eigenvalues();
            const Matrix left = V.transpose() * h0;

            const Vector ub = cur.col(b);
            const Vector cb = left * ub;
            const Vector cn = left * Vector(cur.col(nb));
            const Vector forcing = V.transpose() * (Vector(source.col(b)) - coeffs[static_cast<std::size_t>(b)].p * ub);
            const Vector cin = left * inflow_value(inflow, side, t_next, N);

            Vector cnext(N);
            for (int k = 0; k < N; ++k) {
                const double s = speeds(k);
                if (s > kDefinitenessTolerance) {
                    cnext(k) = cb(k) - s * lambda * (cb(k) - cn(k)) + ht * forcing(k);
                } else if (s < -kDefinitenessTolerance) {
                    cnext(k) = cin(k);
                } else {
                    cnext(k) = cb(k) + ht * forcing(k);
                }
            }
            next.col(b) = V * cnext;
        }
        if (!next.allFinite()) throw EvaluationError("solution became non-finite", 0, n + 1);
    }

    for (Side side : kSides) {
        const int b = boundary_node(grid, side);
        for (int n = 0; n < grid.nt(); ++n) result.traces[static_cast<std::size_t>(side)].col(n) = u.at(b, n);
    }
    return result;
}

GridFunction residual(const GridFunction& u, const Scenario& scenario) {
    if (!(u.grid() == scenario.grid) || u.n() != scenario.n) throw InvalidArgument("residual: grid mismatch");
    const auto& grid = scenario.grid;
    const GridFunction ut = central_derivative(u, Axis::kT);
    const GridFunction ux = central_derivative(u, Axis::kX);
    GridFunction f(grid, scenario.n);
    for (int n = 0; n < grid.nt(); ++n) {
        const double t = grid.t(n);
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = grid.x(i);
            const Vector v = scenario.h0(x, t) * Vector(ut.at(i, n)) + scenario.h1(x, t) * Vector(ux.at(i, n)) +
                             scenario.p(x, t) * Vector(u.at(i, n));
            f.at(i, n) = v;
        }
    }
    return f;
}

GridFunction exact_transport(double c, const std::function<double(double)>& u0,
                             const std::function<double(double)>& inflow, const SpaceTimeGrid& grid) {
    if (!(c > 0.0)) throw InvalidArgument("exact_transport: speed must be > 0");
    GridFunction g(grid, 1);
    for (int n = 0; n < grid.nt(); ++n) {
        const double t = grid.t(n);
        for (int i = 0; i < grid.nx(); ++i) {
            const double x = grid.x(i);
            const double foot = x - c * t;
            g(0, i, n) = foot >= grid.x_lo() ? u0(foot) : (inflow ? inflow(t - (x - grid.x_lo()) / c) : 0.0);
        }
    }
    return g;
}

void write_solution_csv(std::ostream& os, const GridFunction& u) {
    os << "i,n,x,t";
    for (int c = 0; c < u.n(); ++c) os << ",u_" << c + 1;
    os << "\n";
    const auto& grid = u.grid();
    for (int n = 0; n < grid.nt(); ++n) {
        for (int i = 0; i < grid.nx(); ++i) {
            csv::Row row(os);
            row << i << n << grid.x(i) << grid.t(n);
            for (int c = 0; c < u.n(); ++c) row << u(c, i, n);
        }
    }
}

void write_traces_csv(std::ostream& os, const SolveResult& result) {
    const auto& grid = result.u.grid();
    os << "side,n,t";
    for (int c = 0; c < result.u.n(); ++c) os << ",u_" << c + 1;
    os << "\n";
    for (Side side : kSides) {
        for (int n = 0; n < grid.nt(); ++n) {
            csv::Row row(os);
            row << to_string(side) << n << grid.t(n);
            for (int c = 0; c < result.u.n(); ++c) row << result.trace(side)(c, n);
        }
    }
}

}  // namespace symhyp
