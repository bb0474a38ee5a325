#include "numkit/dense.hpp"

#include <cmath>
#include <cstdio>

namespace numkit {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vector data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw DimensionError("DenseMatrix: data length != rows * cols");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw DimensionError("DenseMatrix::multiply: length mismatch");
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        const double* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

Vector DenseMatrix::multiply_transposed(std::span<const double> x) const {
    if (x.size() != rows_) throw DimensionError("DenseMatrix::multiply_transposed: length mismatch");
    Vector y(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) continue;
        const double* r = data_.data() + i * cols_;
        for (std::size_t j = 0; j < cols_; ++j) y[j] += r[j] * xi;
    }
    return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
    if (cols_ != other.rows_) throw DimensionError("DenseMatrix::multiply: inner dimensions differ");
    DenseMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            if (a == 0.0) continue;
            const double* brow = other.data_.data() + k * other.cols_;
            double* orow = out.data_.data() + i * other.cols_;
            for (std::size_t j = 0; j < other.cols_; ++j) orow[j] += a * brow[j];
        }
    }
    return out;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

bool DenseMatrix::is_symmetric(double tol) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Vector add_scaled(std::span<const double> a, double alpha, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionError("add_scaled: length mismatch");
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + alpha * b[i];
    return out;
}

Vector scaled(std::span<const double> a, double alpha) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = alpha * a[i];
    return out;
}

void Tolerances::validate() const {
    if (!(abs_tol > 0.0)) throw ValueError("Tolerances: abs_tol must be > 0");
    if (!(rel_tol >= 0.0)) throw ValueError("Tolerances: rel_tol must be >= 0");
    if (max_iter < 1) throw ValueError("Tolerances: max_iter must be >= 1");
}

Vector finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> x, double h) {
    if (!(h > 0.0)) throw ValueError("finite_diff_gradient: h must be > 0");
    Vector probe(x.begin(), x.end());
    Vector grad(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = probe[i];
        probe[i] = xi + h;
        const double fp = f(probe);
        probe[i] = xi - h;
        const double fm = f(probe);
        probe[i] = xi;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "finite_diff_gradient: non-finite f at probe %zu", i);
            throw EvaluationError(buf);
        }
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

}  // namespace numkit
