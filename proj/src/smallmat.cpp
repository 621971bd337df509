#include "paracont/smallmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "paracont/errors.hpp"

namespace paracont {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": size " + std::to_string(a) + " vs " +
                                std::to_string(b));
    }
}

}  // namespace

double Vector::norm_inf() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
}

bool Vector::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vector& Vector::operator+=(const Vector& other) {
    require_same_size(size(), other.size(), "vector add");
    for (std::size_t i = 0; i < size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_size(size(), other.size(), "vector subtract");
    for (std::size_t i = 0; i < size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Vector& Vector::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(Vector a, double s) { return a *= s; }
Vector operator*(double s, Vector a) { return a *= s; }

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<double> diag) {
    Matrix m(diag.size());
    std::size_t i = 0;
    for (double d : diag) {
        m(i, i) = d;
        ++i;
    }
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(rows.size());
    std::size_t i = 0;
    for (const auto& row : rows) {
        require_same_size(row.size(), rows.size(), "Matrix::from_rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

double Matrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

double Matrix::max_row_norm() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += std::fabs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vector Matrix::operator*(const Vector& x) const {
    require_same_size(n_, x.size(), "matrix-vector product");
    Vector y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

Matrix Matrix::operator*(const Matrix& b) const {
    require_same_size(n_, b.n_, "matrix product");
    Matrix c(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            const double aik = (*this)(i, k);
            for (std::size_t j = 0; j < n_; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

LuFactorization::LuFactorization(const Matrix& a) : lu_(a), perm_(a.dim()) {
    const std::size_t n = a.dim();
    if (n == 0) throw DimensionMismatch("LU of an empty matrix");
    if (!a.all_finite()) throw DomainViolation("LU of a matrix with non-finite entries");

    tol_ = kSingularScale * a.max_row_norm();
    for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::fabs(lu_(i, k)) > std::fabs(lu_(piv, k))) piv = i;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
            det_ = -det_;
        }
        const double pivot = lu_(k, k);
        det_ *= pivot;
        if (!(std::fabs(pivot) > tol_)) singular_ = true;
        if (pivot == 0.0) continue;  // column already zero below the diagonal
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu_(i, k) / pivot;
            lu_(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
        }
    }
}

Vector LuFactorization::solve(const Vector& b) const {
    const std::size_t n = dim();
    require_same_size(n, b.size(), "lu_solve");
    if (singular_) throw SingularMatrix("pivot below singular tolerance " + std::to_string(tol_));

    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

Vector lu_solve(const Matrix& a, const Vector& b) { return LuFactorization(a).solve(b); }

double determinant(const Matrix& a) { return LuFactorization(a).determinant(); }

EigenPair2 eig2(const Matrix& a) {
    if (a.dim() != 2) throw DimensionMismatch("eig2 requires a 2x2 matrix, got n=" + std::to_string(a.dim()));
    const double tr = a.trace();
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr * tr - 4.0 * det;

    if (disc < 0.0) {
        const double re = 0.5 * tr;
        const double im = 0.5 * std::sqrt(-disc);
        return {{re, im}, {re, -im}};
    }
    // Larger-magnitude root first, then the other from the product to avoid cancellation.
    const double q = 0.5 * (tr + std::copysign(std::sqrt(disc), tr));
    const double r1 = q;
    const double r2 = q != 0.0 ? det / q : 0.0;
    return {{std::max(r1, r2), 0.0}, {std::min(r1, r2), 0.0}};
}

}  // namespace paracont
