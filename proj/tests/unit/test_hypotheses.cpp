#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "symhyp/error.hpp"
#include "symhyp/hypotheses.hpp"

using namespace symhyp;

namespace {

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Matrix one() { return Matrix::Constant(1, 1, 1.0); }

Scenario make(const Matrix& h0, const Matrix& h1, double eta_slope, double beta, double T = 2.0, int nx = 11,
              int nt = 5) {
    const int n = static_cast<int>(h0.rows());
    return Scenario{"test", SpaceTimeGrid(0.0, 1.0, T, nx, nt), n, constant_field(h0, "h0"), constant_field(h1, "h1"),
                    zero_field(n), VectorField::zero(n), Weight::linear(eta_slope, 0.0, beta)};
}

}  // namespace

TEST_CASE("scalar transport boundary labels") {
    const Scenario s = make(one(), one(), 1.0, 0.5);
    const BoundaryClassification bc(s);
    for (int n = 0; n < bc.time_nodes(); ++n) {
        CHECK(bc.label(Side::kLo, n) == BoundaryLabel::kMinus);
        CHECK(bc.label(Side::kHi, n) == BoundaryLabel::kPlus);
    }
}

TEST_CASE("indefinite H1 gives NEITHER at both ends") {
    const auto labels = classify_boundary(make(Matrix::Identity(2, 2), mat2(0, 1, 1, 0), 1.0, 0.5), 0);
    CHECK(labels[0] == BoundaryLabel::kNeither);
    CHECK(labels[1] == BoundaryLabel::kNeither);
}

TEST_CASE("positive definite H1 gives MINUS at x_lo and PLUS at x_hi") {
    const auto labels = classify_boundary(make(mat2(2, 1, 1, 2), mat2(2, 1, 1, 2), 1.0, 0.5), 3);
    CHECK(labels[0] == BoundaryLabel::kMinus);
    CHECK(labels[1] == BoundaryLabel::kPlus);
}

TEST_CASE("semidefinite H1 nu is MINUS, not PLUS") {
    // H1 = diag(0, 1): at x_hi lambda_min = 0 is not > 0; at x_lo lambda_max = 0 <= 0.
    const auto labels = classify_boundary(make(Matrix::Identity(2, 2), mat2(0, 0, 0, 1), 1.0, 0.5), 0);
    CHECK(labels[0] == BoundaryLabel::kMinus);
    CHECK(labels[1] == BoundaryLabel::kNeither);
}

TEST_CASE("labels follow time-dependent H1") {
    Scenario s = make(one(), one(), 1.0, 0.5, 2.0, 5, 5);
    s.h1 = MatrixField(1, [](double, double t) { return Matrix::Constant(1, 1, 1.0 - t); }, "1-t");
    const BoundaryClassification bc(s);
    CHECK(bc.label(Side::kHi, 0) == BoundaryLabel::kPlus);
    CHECK(bc.label(Side::kHi, 2) == BoundaryLabel::kMinus);  // t = 1, H1 = 0
    CHECK(bc.label(Side::kLo, 2) == BoundaryLabel::kMinus);
    CHECK(bc.label(Side::kHi, 4) == BoundaryLabel::kMinus);
    CHECK(bc.label(Side::kLo, 4) == BoundaryLabel::kPlus);
}

TEST_CASE("classification coherence with random unit vectors") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> G;
    for (const Matrix& h1 : {mat2(2, 1, 1, 2), mat2(0, 1, 1, 0), mat2(-1, 0.2, 0.2, -3), mat2(0, 0, 0, 1)}) {
        const Scenario s = make(Matrix::Identity(2, 2), h1, 1.0, 0.5);
        const auto labels = classify_boundary(s, 0);
        for (Side side : kSides) {
            const Matrix a = outward_normal(side) * h1;
            for (int k = 0; k < 100; ++k) {
                Vector v(2);
                v << G(rng), G(rng);
                v.normalize();
                const double q = v.dot(a * v);
                if (labels[static_cast<std::size_t>(side)] == BoundaryLabel::kPlus) CHECK(q > 0.0);
                if (labels[static_cast<std::size_t>(side)] == BoundaryLabel::kMinus) CHECK(q <= 1e-12);
            }
        }
    }
}

TEST_CASE("weight positivity examples") {
    auto r = check_weight_positivity(make(one(), one(), 1.0, 0.5));
    CHECK(r.passed);
    CHECK(std::abs(r.bound - 0.5) <= 1e-12);

    for (double beta : {0.1, 0.5, 2.0}) {
        r = check_weight_positivity(make(Matrix::Identity(2, 2), mat2(0, 1, 1, 0), 1.0, beta));
        CHECK_FALSE(r.passed);
        CHECK(std::abs(r.bound - (-beta - 1.0)) <= 1e-12);
        CHECK(r.worst.i >= 0);
        CHECK(r.worst.n >= 0);
    }

    r = check_weight_positivity(make(mat2(2, 1, 1, 2), mat2(2, 1, 1, 2), 1.0, 0.5));
    CHECK(r.passed);
    CHECK(std::abs(r.bound - 0.5) <= 1e-12);
}

TEST_CASE("eta-gradient positivity examples") {
    auto r = check_eta_gradient_positivity(make(mat2(2, 1, 1, 2), mat2(2, 1, 1, 2), 1.0, 0.5));
    CHECK(r.passed);
    CHECK(std::abs(r.bound - 1.0) <= 1e-12);
    r = check_eta_gradient_positivity(make(Matrix::Identity(2, 2), mat2(0, 1, 1, 0), 1.0, 0.5));
    CHECK_FALSE(r.passed);
    CHECK(std::abs(r.bound + 1.0) <= 1e-12);
    r = check_eta_gradient_positivity(make(one(), one(), 2.0, 0.5));
    CHECK(r.passed);
    CHECK(std::abs(r.bound - 2.0) <= 1e-12);
}

TEST_CASE("H0 bounds examples") {
    auto r = check_h0_bounds(make(Matrix::Identity(2, 2), Matrix::Identity(2, 2), 1.0, 0.5));
    CHECK(r.passed);
    CHECK(r.delta1 == doctest::Approx(1.0));
    CHECK(r.M == doctest::Approx(1.0));
    r = check_h0_bounds(make(mat2(2, 1, 1, 2), Matrix::Identity(2, 2), 1.0, 0.5));
    CHECK(r.passed);
    CHECK(std::abs(r.delta1 - 1.0) <= 1e-12);
    CHECK(std::abs(r.M - 3.0) <= 1e-12);
    CHECK(r.delta1 <= r.M);
    r = check_h0_bounds(make(mat2(1, 2, 2, 1), Matrix::Identity(2, 2), 1.0, 0.5));
    CHECK_FALSE(r.passed);
    CHECK(std::abs(r.delta1 + 1.0) <= 1e-12);
}

TEST_CASE("minimal time") {
    const SpaceTimeGrid g(0, 1, 1, 11, 3);
    auto eta = [](double x) { return x; };
    CHECK(minimal_time(eta, 1.0, 1.0, g) == doctest::Approx(1.0));
    CHECK(minimal_time(eta, 1.0, 3.0, g) == doctest::Approx(3.0));
    CHECK(minimal_time([](double) { return 4.0; }, 1.0, 1.0, g) == 0.0);
    CHECK_THROWS_AS(minimal_time(eta, 0.0, 1.0, g), InvalidArgument);
}

TEST_CASE("constant eta is degenerate: eta-gradient positivity fails") {
    const HypothesisReport r = check_hypotheses(make(one(), one(), 0.0, 0.5));
    CHECK_FALSE(r.eta_gradient.passed);
    CHECK_FALSE(r.T_min.has_value());
}

TEST_CASE("select_beta examples") {
    auto eta = [](double x) { return x; };
    BetaSelection b = select_beta(1.0, 1.0, eta, SpaceTimeGrid(0, 1, 2, 11, 3));
    REQUIRE(b.ok);
    CHECK(b.lower == doctest::Approx(0.5));
    CHECK(b.upper == doctest::Approx(1.0));
    CHECK(b.beta == doctest::Approx(0.75));
    CHECK(b.delta == doctest::Approx(0.25));
    CHECK(b.delta2 == doctest::Approx(0.5));

    CHECK_FALSE(select_beta(1.0, 1.0, eta, SpaceTimeGrid(0, 1, 1, 11, 3)).ok);

    b = select_beta(2.0, 1.0, eta, SpaceTimeGrid(0, 1, 1, 11, 3));
    REQUIRE(b.ok);
    CHECK(b.lower == doctest::Approx(1.0));
    CHECK(b.upper == doctest::Approx(2.0));
    CHECK(b.beta == doctest::Approx(1.5));
    CHECK(b.delta == doctest::Approx(0.5));
    CHECK(b.delta2 == doctest::Approx(0.5));
}

TEST_CASE("delta and delta2 are monotone in beta") {
    // delta = delta0 - beta*M and delta2 = beta*T - osc evaluated through the checkers.
    const double T = 2.0;
    double prev_delta = HUGE_VAL, prev_delta2 = -HUGE_VAL;
    for (double beta = 0.55; beta < 1.0; beta += 0.05) {
        const Scenario s = make(one(), one(), 1.0, beta, T);
        const double delta = check_weight_positivity(s).bound;
        const double delta2 = beta * T - oscillation(s.weight.eta, s.grid);
        CHECK(delta < prev_delta);
        CHECK(delta2 > prev_delta2);
        prev_delta = delta;
        prev_delta2 = delta2;
    }
}

TEST_CASE("observability hypotheses imply weight positivity for small beta") {
    const std::vector<std::pair<Matrix, Matrix>> cases{
        {one(), one()}, {mat2(2, 1, 1, 2), mat2(2, 1, 1, 2)}, {Matrix::Identity(2, 2), mat2(3, 1, 1, 2)}};
    for (const auto& [h0, h1] : cases) {
        const Scenario probe = make(h0, h1, 1.0, 0.1);
        const double d0 = check_eta_gradient_positivity(probe).bound;
        const double M = check_h0_bounds(probe).M;
        for (double frac : {0.1, 0.5, 0.9}) {
            const double beta = frac * d0 / M;
            const auto r = check_weight_positivity(make(h0, h1, 1.0, beta));
            CHECK(r.passed);
            CHECK(r.bound >= d0 - beta * M - 1e-10);
        }
    }
}

TEST_CASE("T_min is invariant under eta -> c eta") {
    for (double c : {0.25, 1.0, 3.0, 10.0}) {
        const HypothesisReport r = check_hypotheses(make(mat2(2, 1, 1, 2), mat2(2, 1, 1, 2), c, 0.1));
        REQUIRE(r.T_min.has_value());
        CHECK(std::abs(*r.T_min - 3.0) <= 1e-10);
        CHECK(std::abs(r.eta_gradient.bound - c) <= 1e-10);
    }
}

TEST_CASE("report for the transport scenario") {
    const HypothesisReport r = check_hypotheses(make(one(), one(), 1.0, 0.75, 2.0));
    CHECK(r.all_pass());
    CHECK(r.failed_hypotheses().empty());
    REQUIRE(r.beta_choice.has_value());
    CHECK(r.beta_choice->beta == doctest::Approx(0.75));
    std::ostringstream os;
    write_report_text(os, r);
    CHECK(os.str().find("T_min = 1\n") != std::string::npos);
    CHECK(os.str().find("delta = 0.25\n") != std::string::npos);
}

TEST_CASE("report names both weight hypotheses for wave-type coefficients") {
    const HypothesisReport r = check_hypotheses(make(Matrix::Identity(2, 2), mat2(0, 1, 1, 0), 1.0, 0.5));
    const auto failed = r.failed_hypotheses();
    CHECK(std::find(failed.begin(), failed.end(), std::string(hypothesis::kWeightPositivity)) != failed.end());
    CHECK(std::find(failed.begin(), failed.end(), std::string(hypothesis::kEtaGradient)) != failed.end());
    CHECK(r.h0_bounds.passed);
}

TEST_CASE("boundary csv is total over boundary and time nodes") {
    const Scenario s = make(one(), one(), 1.0, 0.5, 1.0, 5, 7);
    const BoundaryClassification bc(s);
    std::ostringstream os;
    write_boundary_csv(os, s, bc);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 7);
}

TEST_CASE("asymmetric H0 is rejected by the report") {
    Scenario s = make(one(), one(), 1.0, 0.5);
    s.h0 = constant_field(mat2(1, 1, 0, 1), "asym");
    s.h1 = constant_field(Matrix::Identity(2, 2), "I");
    s.n = 2;
    s.p = zero_field(2);
    s.source = VectorField::zero(2);
    CHECK_THROWS_AS(check_hypotheses(s), Error);
}
