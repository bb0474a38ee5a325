#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "numkit/errors.hpp"

namespace numkit {

using Vector = std::vector<double>;

/// Row-major dense matrix of 64-bit floats. Serves as the dense oracle for
/// sparse kernels and carries the small solves used by the optimizers.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, Vector data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const Vector& data() const { return data_; }
    Vector& data() { return data_; }

    Vector multiply(std::span<const double> x) const;             // A x
    Vector multiply_transposed(std::span<const double> x) const;  // A^T x
    DenseMatrix multiply(const DenseMatrix& other) const;
    DenseMatrix transposed() const;

    bool all_finite() const;
    bool is_symmetric(double tol = 0.0) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    Vector data_;
};

// Small vector helpers shared across modules.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);
Vector add_scaled(std::span<const double> a, double alpha, std::span<const double> b);  // a + alpha*b
Vector scaled(std::span<const double> a, double alpha);

/// Iteration/tolerance knobs shared by the iterative solvers.
struct Tolerances {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    std::size_t max_iter = 100;

    void validate() const;
};

/// Central-difference gradient estimate: (f(x+h e_i) - f(x-h e_i)) / (2h).
/// Throws EvaluationError if f produces a non-finite value at any probe point.
Vector finite_diff_gradient(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> x, double h);

}  // namespace numkit
