#pragma once

// Dense linear algebra for the small (n <= 4 in practice) systems handled by
// the continuation engine.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace paracont {

class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double value = 0.0) : data_(n, value) {}
    Vector(std::initializer_list<double> values) : data_(values) {}
    explicit Vector(std::vector<double> values) : data_(std::move(values)) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) noexcept { return data_[i]; }
    double operator[](std::size_t i) const noexcept { return data_[i]; }

    double* data() noexcept { return data_.data(); }
    const double* data() const noexcept { return data_.data(); }
    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    double norm_inf() const noexcept;
    bool all_finite() const noexcept;

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double s) noexcept;

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> data_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(Vector a, double s);
Vector operator*(double s, Vector a);

/// Square matrix stored row-major.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double value = 0.0) : n_(n), data_(n * n, value) {}

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::initializer_list<double> diag);
    /// Throws DimensionMismatch when the rows do not form a square.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t dim() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }

    std::span<const double> entries() const noexcept { return data_; }

    double trace() const noexcept;
    /// max_i sum_j |a_ij|
    double max_row_norm() const noexcept;
    bool all_finite() const noexcept;

    Vector operator*(const Vector& x) const;
    Matrix operator*(const Matrix& b) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Relative pivot threshold; pivots below kSingularScale * max_row_norm(A)
/// mark the matrix as singular.
inline constexpr double kSingularScale = 1e-12;

/// LU factorization with partial pivoting. Factoring never fails on
/// singular input: the determinant stays available and only solve() throws.
class LuFactorization {
public:
    explicit LuFactorization(const Matrix& a);

    std::size_t dim() const noexcept { return lu_.dim(); }
    bool singular() const noexcept { return singular_; }
    double determinant() const noexcept { return det_; }
    double singular_tol() const noexcept { return tol_; }

    /// Throws SingularMatrix or DimensionMismatch.
    Vector solve(const Vector& b) const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    double det_ = 1.0;
    double tol_ = 0.0;
    bool singular_ = false;
};

Vector lu_solve(const Matrix& a, const Vector& b);
double determinant(const Matrix& a);

struct EigenPair2 {
    // For a real pair lambda1 >= lambda2; for a complex pair lambda1 has the
    // positive imaginary part.
    std::complex<double> lambda1;
    std::complex<double> lambda2;

    bool is_complex() const noexcept { return lambda1.imag() != 0.0; }
};

/// Roots of lambda^2 - tr(A) lambda + det(A) for a 2x2 matrix.
EigenPair2 eig2(const Matrix& a);

}  // namespace paracont
