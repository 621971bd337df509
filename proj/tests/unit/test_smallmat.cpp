#include <doctest.h>

#include <cmath>
#include <random>

#include "paracont/errors.hpp"
#include "paracont/smallmat.hpp"

using namespace paracont;

TEST_CASE("identity and diagonal solves") {
    const Vector b{3.0, -1.0, 2.5};
    CHECK(lu_solve(Matrix::identity(3), b) == b);
    const Vector x = lu_solve(Matrix::diagonal({2.0, -4.0, 0.5}), b);
    CHECK(x[0] == doctest::Approx(1.5));
    CHECK(x[1] == doctest::Approx(0.25));
    CHECK(x[2] == doctest::Approx(5.0));
    CHECK(determinant(Matrix::diagonal({2.0, -4.0, 0.5})) == doctest::Approx(-4.0));
}

TEST_CASE("2x2 Jacobian at the origin") {
    const Matrix a = Matrix::from_rows({{-1.2, 4.0}, {-0.2, 1.0}});
    CHECK(determinant(a) == doctest::Approx(-0.4).epsilon(1e-14));
    const Vector x = lu_solve(a, Vector{1.0, 1.0});
    CHECK(x[0] == doctest::Approx(7.5).epsilon(1e-13));
    CHECK(x[1] == doctest::Approx(2.5).epsilon(1e-13));
}

TEST_CASE("singular matrices keep their determinant but refuse to solve") {
    const Matrix a = Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
    LuFactorization lu(a);
    CHECK(lu.singular());
    CHECK(std::fabs(lu.determinant()) <= 1e-14);
    CHECK_THROWS_AS(lu.solve(Vector{1.0, 0.0}), SingularMatrix);
    CHECK_THROWS_AS(lu_solve(Matrix(3), Vector(3)), SingularMatrix);
}

TEST_CASE("pivots are judged relative to the row scale") {
    // Tiny but perfectly conditioned.
    const Matrix a = Matrix::diagonal({1e-20, 1e-20});
    CHECK_FALSE(LuFactorization(a).singular());
    const Matrix b = Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0 + 1e-15}});
    CHECK(LuFactorization(b).singular());
}

TEST_CASE("dimension and finiteness checks") {
    CHECK_THROWS_AS(lu_solve(Matrix::identity(2), Vector(3)), DimensionMismatch);
    CHECK_THROWS_AS(Matrix::from_rows({{1.0, 2.0}, {3.0}}), DimensionMismatch);
    CHECK_THROWS_AS(eig2(Matrix::identity(3)), DimensionMismatch);
    Matrix bad = Matrix::identity(2);
    bad(0, 1) = NAN;
    CHECK_THROWS(LuFactorization{bad});
}

TEST_CASE("random solves reproduce the right-hand side") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 4;
        Matrix a(n);
        Vector b(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = u(rng);
            for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng) + (i == j ? 2.0 : 0.0);
        }
        const Vector r = a * lu_solve(a, b) - b;
        CHECK(r.norm_inf() <= 1e-12);
    }
}

TEST_CASE("product of determinants") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix a(3), b(3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                a(i, j) = u(rng);
                b(i, j) = u(rng);
            }
        const double lhs = determinant(a * b);
        const double rhs = determinant(a) * determinant(b);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("2x2 eigenvalues") {
    const EigenPair2 real = eig2(Matrix::from_rows({{2.0, 0.0}, {0.0, -3.0}}));
    CHECK_FALSE(real.is_complex());
    CHECK(real.lambda1.real() == doctest::Approx(2.0));
    CHECK(real.lambda2.real() == doctest::Approx(-3.0));

    const EigenPair2 rot = eig2(Matrix::from_rows({{0.5, -2.0}, {2.0, 0.5}}));
    CHECK(rot.is_complex());
    CHECK(rot.lambda1.real() == doctest::Approx(0.5));
    CHECK(rot.lambda1.imag() == doctest::Approx(2.0));
    CHECK(rot.lambda2 == std::conj(rot.lambda1));

    // Widely separated roots stay accurate.
    const EigenPair2 stiff = eig2(Matrix::from_rows({{1e8, 1.0}, {0.0, 1e-8}}));
    CHECK(stiff.lambda2.real() == doctest::Approx(1e-8).epsilon(1e-10));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix a = Matrix::from_rows({{u(rng), u(rng)}, {u(rng), u(rng)}});
        const EigenPair2 e = eig2(a);
        CHECK(std::abs(e.lambda1 + e.lambda2 - a.trace()) <= 1e-12);
        CHECK(std::abs(e.lambda1 * e.lambda2 - determinant(a)) <= 1e-11);
    }
}
