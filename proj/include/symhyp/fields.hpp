#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "symhyp/grid.hpp"

namespace symhyp {

using MatrixFn = std::function<Matrix(double x, double t)>;
using VectorFn = std::function<Vector(double x, double t)>;

/// Evaluator of an N x N coefficient matrix at (x, t).
///
/// Optional analytic partial derivatives can be attached; consumers fall
/// back to central differences on sampled values when they are absent.
/// `symmetric()` records whether the field is meant to be symmetric (H^k),
/// as opposed to the zeroth-order coefficient P which need not be.
class MatrixField {
public:
    MatrixField(int n, MatrixFn eval, std::string label, bool symmetric = true);

    int n() const noexcept { return n_; }
    const std::string& label() const noexcept { return label_; }
    bool symmetric() const noexcept { return symmetric_; }
    bool time_independent() const noexcept { return time_independent_; }

    Matrix operator()(double x, double t) const { return eval_(x, t); }

    bool has_derivative(Axis axis) const noexcept {
        return axis == Axis::kX ? dx_.has_value() : dt_.has_value();
    }
    Matrix derivative(Axis axis, double x, double t) const;

    MatrixField& with_derivative(Axis axis, MatrixFn d);
    MatrixField& with_time_independence(bool flag = true) {
        time_independent_ = flag;
        return *this;
    }

private:
    int n_;
    MatrixFn eval_;
    std::string label_;
    bool symmetric_;
    bool time_independent_ = false;
    std::optional<MatrixFn> dx_;
    std::optional<MatrixFn> dt_;
};

/// M everywhere, with zero analytic derivatives.
MatrixField constant_field(const Matrix& m, std::string label, bool symmetric = true);

/// c0 + x * c1, with analytic derivatives.
MatrixField affine_x_field(const Matrix& c0, const Matrix& c1, std::string label,
                           bool symmetric = true);

MatrixField zero_field(int n, std::string label = "0");

/// Vector-valued field, used for the source F.
class VectorField {
public:
    VectorField(int n, VectorFn eval, std::string label);

    static VectorField zero(int n);

    int n() const noexcept { return n_; }
    const std::string& label() const noexcept { return label_; }
    bool is_zero() const noexcept { return is_zero_; }
    Vector operator()(double x, double t) const { return eval_(x, t); }

private:
    int n_;
    VectorFn eval_;
    std::string label_;
    bool is_zero_ = false;
};

/// Weight phi(x, t) = eta(x) - beta * t.
struct Weight {
    std::function<double(double)> eta;
    std::function<double(double)> deta;
    double beta = 0.0;
    std::string label;

    double phi(double x, double t) const { return eta(x) - beta * t; }
    double dphi_dx(double x) const { return deta(x); }
    double dphi_dt() const noexcept { return -beta; }

    /// eta(x) = a*x + b.
    static Weight linear(double a, double b, double beta);
};

/// Grid of N x N matrices produced by sampling a MatrixField, plus the
/// largest |M_ij - M_ji| seen. Storage is one contiguous column-major
/// N x N block per node, node index n * nx + i.
struct MatrixSamples {
    SpaceTimeGrid grid;
    int n = 0;
    std::vector<double> data;
    double symmetry_defect = 0.0;

    MatrixSamples(const SpaceTimeGrid& g, int size)
        : grid(g), n(size), data(static_cast<std::size_t>(g.nx()) * g.nt() * size * size, 0.0) {}

    Eigen::Map<const Eigen::MatrixXd> at(int i, int step) const { return {data.data() + offset(i, step), n, n}; }
    Eigen::Map<Eigen::MatrixXd> at(int i, int step) { return {data.data() + offset(i, step), n, n}; }

private:
    std::size_t offset(int i, int step) const {
        return (static_cast<std::size_t>(step) * grid.nx() + static_cast<std::size_t>(i)) * n * n;
    }
};

inline constexpr double kSymmetryTolerance = 1e-12;

/// Samples `field` at every node. Throws EvaluationError on a non-finite entry.
MatrixSamples sample_field(const MatrixField& field, const SpaceTimeGrid& grid);

/// max_ij |M_ij - M_ji|.
double symmetry_defect(const Matrix& m);

/// Throws EvaluationError naming the node if the sampled symmetry defect of a
/// field declared symmetric exceeds kSymmetryTolerance.
void require_symmetric(const MatrixField& field, const SpaceTimeGrid& grid);

/// Derivative of `field` along `axis` at every node: analytic if attached,
/// otherwise second-order differences of the samples.
MatrixSamples field_derivative(const MatrixField& field, const SpaceTimeGrid& grid, Axis axis);

}  // namespace symhyp
