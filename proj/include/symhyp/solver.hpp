#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <string>

#include "symhyp/grid_function.hpp"
#include "symhyp/hypotheses.hpp"
#include "symhyp/scenario.hpp"

namespace symhyp {

/// Boundary data g(t) for each endpoint. Only the components carried by
/// incoming characteristics are used. An empty function means zero data.
struct InflowData {
    std::function<Vector(double t)> lo;
    std::function<Vector(double t)> hi;

    const std::function<Vector(double t)>& at(Side side) const { return side == Side::kLo ? lo : hi; }
};

struct SolverOptions {
    double cfl_factor = 0.5;
};

struct SolveResult {
    GridFunction u;
    /// traces[side] is N x Nt; column n is u at the boundary node at t_n.
    std::array<Eigen::MatrixXd, 2> traces;
    double max_speed = 0.0;   // alpha, max spectral radius of H0^{-1} H1
    double cfl_used = 0.0;    // alpha * ht / hx
    double cfl_limit = 0.0;   // configured cfl_factor
    std::string scheme;

    const Eigen::MatrixXd& trace(Side side) const { return traces[static_cast<std::size_t>(side)]; }
};

/// Largest |eigenvalue| of H0^{-1} H1 over all nodes, i.e. the fastest
/// characteristic speed. Throws EvaluationError if H0 is not positive
/// definite somewhere.
double max_characteristic_speed(const Scenario& scenario);

/// Smallest Nt with alpha * ht / hx <= cfl_factor.
int cfl_time_nodes(const Scenario& scenario, double cfl_factor = 0.5);

/// Copy of `scenario` whose grid uses cfl_time_nodes().
Scenario with_cfl_grid(const Scenario& scenario, double cfl_factor = 0.5);

/// Explicit local Lax-Friedrichs (Rusanov) scheme for
/// H0 u_t + H1 u_x + P u = F with a characteristic boundary closure:
/// at each endpoint the state is split along the eigenvectors of
/// H0^{-1} H1 nu; incoming characteristics take the inflow data and
/// outgoing ones are advanced by one-sided upwinding.
///
/// `initial` is N x Nx. Throws InvalidArgument if the grid violates the
/// CFL bound and EvaluationError if H0 is singular or indefinite at a node.
SolveResult solve(const Scenario& scenario, const Profile& initial, const InflowData& inflow = {},
                  const SolverOptions& options = {});

/// H0 u_t + H1 u_x + P u with second-order differences (one-sided at the
/// grid edges). Declares u an exact solution with source equal to the result.
GridFunction residual(const GridFunction& u, const Scenario& scenario);

/// Exact solution of u_t + c u_x = 0 with c > 0, u(x,0) = u0(x), and
/// u(x_lo, t) = inflow(t).
GridFunction exact_transport(double c, const std::function<double(double)>& u0,
                             const std::function<double(double)>& inflow, const SpaceTimeGrid& grid);

/// Columns i,n,x,t,u_1..u_N.
void write_solution_csv(std::ostream& os, const GridFunction& u);

/// Columns side,n,t,u_1..u_N.
void write_traces_csv(std::ostream& os, const SolveResult& result);

}  // namespace symhyp
