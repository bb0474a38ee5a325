#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "numkit/dense.hpp"

namespace numkit::interp {

/// Piecewise polynomial in the power basis: on interval [x_i, x_{i+1}),
/// coeffs(d, i) multiplies (x - x_i)^(k - d), so row 0 carries the highest
/// power. Extrapolation (on by default) evaluates the nearest interval's
/// polynomial outside the domain; with extrapolation off those points are NaN.
class PPoly {
public:
    PPoly(Vector breakpoints, DenseMatrix coeffs, bool extrapolate = true);

    std::size_t degree() const { return coeffs_.rows() - 1; }
    std::size_t intervals() const { return coeffs_.cols(); }
    const Vector& breakpoints() const { return breaks_; }
    const DenseMatrix& coefficients() const { return coeffs_; }
    bool extrapolates() const { return extrapolate_; }

    double operator()(double x) const;
    Vector eval(std::span<const double> xs) const;
    double derivative_value(double x, std::size_t order) const;

    PPoly derivative() const;
    PPoly antiderivative() const;
    double integrate(double a, double b) const;

    /// All real roots inside the domain, ascending, duplicates across
    /// breakpoints merged within 1e-12. An interval on which the polynomial
    /// is identically zero contributes one NaN sentinel, appended after the
    /// finite roots.
    Vector roots() const;

private:
    std::size_t locate(double x) const;
    Vector breaks_;
    DenseMatrix coeffs_;  // (k+1) x N
    bool extrapolate_;
};

/// Piecewise polynomial in the Bernstein basis; coeffs(j, i) is the j-th
/// Bernstein coefficient on interval i. Evaluated by de Casteljau on the
/// normalized local coordinate.
class BPoly {
public:
    BPoly(Vector breakpoints, DenseMatrix coeffs, bool extrapolate = true);

    std::size_t degree() const { return coeffs_.rows() - 1; }
    std::size_t intervals() const { return coeffs_.cols(); }
    const Vector& breakpoints() const { return breaks_; }
    const DenseMatrix& coefficients() const { return coeffs_; }

    double operator()(double x) const;
    Vector eval(std::span<const double> xs) const;

private:
    std::size_t locate(double x) const;
    Vector breaks_;
    DenseMatrix coeffs_;
    bool extrapolate_;
};

// Basis changes; pointwise values are preserved to roundoff.
PPoly to_power_basis(const BPoly& b);
BPoly to_bernstein_basis(const PPoly& p);

/// Spline curve as a linear combination of B-spline basis elements over a
/// nondecreasing knot vector (length n + k + 1 for n coefficients of degree
/// k). The evaluation domain is [t_k, t_n]; at the right endpoint the value
/// is the left limit. Extrapolation is off (NaN) by default.
class BSpline {
public:
    BSpline(Vector knots, Vector coefficients, std::size_t degree, bool extrapolate = false);

    std::size_t degree() const { return degree_; }
    const Vector& knots() const { return knots_; }
    const Vector& coefficients() const { return coeffs_; }
    double domain_min() const { return knots_[degree_]; }
    double domain_max() const { return knots_[coeffs_.size()]; }

    double operator()(double x) const;
    Vector eval(std::span<const double> xs) const;

    BSpline derivative() const;

private:
    Vector knots_, coeffs_;
    std::size_t degree_;
    bool extrapolate_;
};

/// Convert to the power basis; breakpoints are the distinct knots in the
/// evaluation domain.
PPoly to_ppoly(const BSpline& s);

struct BoundaryCondition {
    enum class Type { not_a_knot, natural, clamped };
    Type type = Type::not_a_knot;
    double deriv_left = 0.0, deriv_right = 0.0;

    static BoundaryCondition not_a_knot() { return {Type::not_a_knot, 0.0, 0.0}; }
    static BoundaryCondition natural() { return {Type::natural, 0.0, 0.0}; }
    static BoundaryCondition clamped(double d0, double dn) { return {Type::clamped, d0, dn}; }
};

/// Interpolating cubic spline, C2 at the interior breakpoints. not_a_knot
/// falls back to the single parabola through three points and the straight
/// line through two.
PPoly cubic_spline(std::span<const double> xs, std::span<const double> ys,
                   BoundaryCondition bc = BoundaryCondition::not_a_knot());

/// Monotone shape-preserving C1 cubic Hermite interpolant with
/// Fritsch-Carlson slope limiting; endpoint slopes use the one-sided
/// three-point formula with sign clipping.
PPoly pchip(std::span<const double> xs, std::span<const double> ys);

/// Akima's C1 interpolant (classic end rule, needs at least 5 points).
PPoly akima(std::span<const double> xs, std::span<const double> ys);

}  // namespace numkit::interp
