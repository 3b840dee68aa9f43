#include "symhyp/scenario.hpp"

#include <cmath>

#include "symhyp/error.hpp"

namespace symhyp {

void Scenario::check_structure() const {
    if (n < 1 || n > kMaxSystemSize) throw InvalidArgument("scenario '" + name + "': bad N");
    if (h0.n() != n || h1.n() != n || p.n() != n || source.n() != n) {
        throw InvalidArgument("scenario '" + name + "': field sizes do not match N");
    }
    if (!weight.eta || !weight.deta) throw InvalidArgument("scenario '" + name + "': weight has no eta");
    if (!std::isfinite(weight.beta)) throw InvalidArgument("scenario '" + name + "': beta not finite");
    require_symmetric(h0, grid);
    require_symmetric(h1, grid);
}

void Scenario::validate() const {
    check_structure();
    if (!(weight.beta > 0.0)) throw InvalidArgument("scenario '" + name + "': beta must be > 0");
}

Scenario Scenario::on_grid(const SpaceTimeGrid& g) const {
    Scenario s = *this;
    s.grid = g;
    return s;
}

Scenario Scenario::with_beta(double beta) const {
    Scenario s = *this;
    s.weight.beta = beta;
    return s;
}

Scenario Scenario::with_zero_source() const {
    Scenario s = *this;
    s.source = VectorField::zero(n);
    return s;
}

EigenBounds min_max_eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1) throw InvalidArgument("eigenvalues: matrix must be square");
    if (!(symmetry_defect(m) <= 1e-10)) throw InvalidArgument("eigenvalues: matrix is not symmetric");
    if (m.rows() == 1) return {m(0, 0), m(0, 0)};
    if (m.rows() == 2) {
        const double mean = 0.5 * (m(0, 0) + m(1, 1));
        const double half_gap = std::hypot(0.5 * (m(0, 0) - m(1, 1)), 0.5 * (m(0, 1) + m(1, 0)));
        return {mean - half_gap, mean + half_gap};
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace symhyp
