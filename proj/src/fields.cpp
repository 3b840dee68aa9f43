#include "symhyp/fields.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "symhyp/error.hpp"
#include "symhyp/grid_function.hpp"

namespace symhyp {

MatrixField::MatrixField(int n, MatrixFn eval, std::string label, bool symmetric)
    : n_(n), eval_(std::move(eval)), label_(std::move(label)), symmetric_(symmetric) {
    if (n < 1 || n > kMaxSystemSize) {
        throw InvalidArgument("matrix field '" + label_ + "': N must be in [1, " +
                              std::to_string(kMaxSystemSize) + "]");
    }
    if (!eval_) throw InvalidArgument("matrix field '" + label_ + "': empty evaluator");
}

Matrix MatrixField::derivative(Axis axis, double x, double t) const {
    const auto& d = axis == Axis::kX ? dx_ : dt_;
    if (!d) throw InvalidArgument("matrix field '" + label_ + "' has no analytic derivative");
    return (*d)(x, t);
}

MatrixField& MatrixField::with_derivative(Axis axis, MatrixFn d) {
    (axis == Axis::kX ? dx_ : dt_) = std::move(d);
    return *this;
}

MatrixField constant_field(const Matrix& m, std::string label, bool symmetric) {
    if (m.rows() != m.cols()) throw InvalidArgument("constant_field: matrix must be square");
    const int n = static_cast<int>(m.rows());
    const Matrix zero = Matrix::Zero(n, n);
    MatrixField f(n, [m](double, double) { return m; }, std::move(label), symmetric);
    f.with_derivative(Axis::kX, [zero](double, double) { return zero; })
        .with_derivative(Axis::kT, [zero](double, double) { return zero; })
        .with_time_independence();
    return f;
}

MatrixField affine_x_field(const Matrix& c0, const Matrix& c1, std::string label, bool symmetric) {
    if (c0.rows() != c0.cols() || c1.rows() != c0.rows() || c1.cols() != c0.cols()) {
        throw InvalidArgument("affine_x_field: coefficient shapes differ");
    }
    const int n = static_cast<int>(c0.rows());
    const Matrix zero = Matrix::Zero(n, n);
    MatrixField f(n, [c0, c1](double x, double) -> Matrix { return c0 + x * c1; }, std::move(label),
                  symmetric);
    f.with_derivative(Axis::kX, [c1](double, double) { return c1; })
        .with_derivative(Axis::kT, [zero](double, double) { return zero; })
        .with_time_independence();
    return f;
}

MatrixField zero_field(int n, std::string label) {
    return constant_field(Matrix::Zero(n, n), std::move(label), true);
}

VectorField::VectorField(int n, VectorFn eval, std::string label)
    : n_(n), eval_(std::move(eval)), label_(std::move(label)) {
    if (n < 1 || n > kMaxSystemSize) throw InvalidArgument("vector field: bad N");
    if (!eval_) throw InvalidArgument("vector field: empty evaluator");
}

VectorField VectorField::zero(int n) {
    VectorField f(n, [n](double, double) -> Vector { return Vector::Zero(n); }, "0");
    f.is_zero_ = true;
    return f;
}

Weight Weight::linear(double a, double b, double beta) {
    std::ostringstream label;
    label << a << "*x+" << b;
    return Weight{[a, b](double x) { return a * x + b; }, [a](double) { return a; }, beta,
                  label.str()};
}

double symmetry_defect(const Matrix& m) {
    double d = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = r + 1; c < m.cols(); ++c) d = std::max(d, std::abs(m(r, c) - m(c, r)));
    }
    return d;
}

MatrixSamples sample_field(const MatrixField& field, const SpaceTimeGrid& grid) {
    MatrixSamples s(grid, field.n());
    for (int step = 0; step < grid.nt(); ++step) {
        for (int i = 0; i < grid.nx(); ++i) {
            const Matrix m = field(grid.x(i), grid.t(step));
            if (m.rows() != field.n() || m.cols() != field.n()) {
                throw EvaluationError("field '" + field.label() + "' returned a matrix of wrong shape",
                                      i, step);
            }
            if (!m.allFinite()) {
                throw EvaluationError("field '" + field.label() + "' is not finite", i, step);
            }
            s.symmetry_defect = std::max(s.symmetry_defect, symmetry_defect(m));
            s.at(i, step) = m;
        }
    }
    return s;
}

void require_symmetric(const MatrixField& field, const SpaceTimeGrid& grid) {
    for (int step = 0; step < grid.nt(); ++step) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double d = symmetry_defect(field(grid.x(i), grid.t(step)));
            if (!(d <= kSymmetryTolerance)) {
                std::ostringstream msg;
                msg << "field '" << field.label() << "' is not symmetric (defect " << d << ")";
                throw EvaluationError(msg.str(), i, step);
            }
        }
    }
}

MatrixSamples field_derivative(const MatrixField& field, const SpaceTimeGrid& grid, Axis axis) {
    if (!field.has_derivative(axis)) return central_derivative(sample_field(field, grid), axis);
    MatrixSamples s(grid, field.n());
    for (int step = 0; step < grid.nt(); ++step) {
        for (int i = 0; i < grid.nx(); ++i) {
            s.at(i, step) = field.derivative(axis, grid.x(i), grid.t(step));
        }
    }
    return s;
}

}  // namespace symhyp
