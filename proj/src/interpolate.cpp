#include "numkit/interpolate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "numkit/errors.hpp"
#include "numkit/linalg.hpp"

namespace numkit::interp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_breakpoints(const Vector& breaks, std::size_t intervals, const char* name) {
    if (breaks.size() != intervals + 1)
        throw DimensionError(std::string(name) + ": breakpoints must number intervals + 1");
    if (breaks.size() < 2) throw ValueError(std::string(name) + ": need at least one interval");
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        if (!(breaks[i] < breaks[i + 1]))
            throw ValueError(std::string(name) + ": breakpoints must be strictly increasing");
}

std::size_t locate_interval(const Vector& breaks, double x) {
    // Last breakpoint <= x, clamped to a valid interval index; out-of-domain
    // points get the nearest interval (extrapolation policy decides NaN).
    if (x <= breaks.front()) return 0;
    if (x >= breaks[breaks.size() - 2]) return breaks.size() - 2;
    const auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    return static_cast<std::size_t>(it - breaks.begin()) - 1;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return r;
}

void check_strict_xs(std::span<const double> xs, const char* name) {
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        if (!(xs[i] < xs[i + 1]))
            throw ValueError(std::string(name) + ": abscissae must be strictly increasing");
}

/// Power-basis piecewise cubic from node values and slopes (Hermite data).
PPoly hermite_to_ppoly(std::span<const double> xs, std::span<const double> ys,
                       std::span<const double> slopes) {
    const std::size_t n = xs.size() - 1;
    DenseMatrix coeffs(4, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = xs[i + 1] - xs[i];
        const double d = (ys[i + 1] - ys[i]) / h;
        coeffs(0, i) = (slopes[i] + slopes[i + 1] - 2.0 * d) / (h * h);
        coeffs(1, i) = (3.0 * d - 2.0 * slopes[i] - slopes[i + 1]) / h;
        coeffs(2, i) = slopes[i];
        coeffs(3, i) = ys[i];
    }
    return PPoly(Vector(xs.begin(), xs.end()), std::move(coeffs));
}

}  // namespace

PPoly::PPoly(Vector breakpoints, DenseMatrix coeffs, bool extrapolate)
    : breaks_(std::move(breakpoints)), coeffs_(std::move(coeffs)), extrapolate_(extrapolate) {
    if (coeffs_.rows() == 0) throw ValueError("PPoly: empty coefficient array");
    check_breakpoints(breaks_, coeffs_.cols(), "PPoly");
}

std::size_t PPoly::locate(double x) const { return locate_interval(breaks_, x); }

double PPoly::operator()(double x) const {
    if (!std::isfinite(x)) return kNaN;
    if (!extrapolate_ && (x < breaks_.front() || x > breaks_.back())) return kNaN;
    const std::size_t i = locate(x);
    const double t = x - breaks_[i];
    double acc = coeffs_(0, i);
    for (std::size_t d = 1; d < coeffs_.rows(); ++d) acc = acc * t + coeffs_(d, i);
    return acc;
}

Vector PPoly::eval(std::span<const double> xs) const {
    Vector out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
    return out;
}

double PPoly::derivative_value(double x, std::size_t order) const {
    PPoly d = *this;
    for (std::size_t r = 0; r < order; ++r) d = d.derivative();
    return d(x);
}

PPoly PPoly::derivative() const {
    const std::size_t k = degree();
    if (k == 0) return PPoly(breaks_, DenseMatrix(1, intervals(), 0.0), extrapolate_);
    DenseMatrix out(k, intervals());
    for (std::size_t i = 0; i < intervals(); ++i)
        for (std::size_t d = 0; d < k; ++d) out(d, i) = coeffs_(d, i) * static_cast<double>(k - d);
    return PPoly(breaks_, std::move(out), extrapolate_);
}

PPoly PPoly::antiderivative() const {
    const std::size_t k = degree();
    DenseMatrix out(k + 2, intervals());
    double offset = 0.0;  // keeps the antiderivative continuous across breaks
    for (std::size_t i = 0; i < intervals(); ++i) {
        for (std::size_t d = 0; d <= k; ++d)
            out(d, i) = coeffs_(d, i) / static_cast<double>(k + 1 - d);
        out(k + 1, i) = offset;
        const double h = breaks_[i + 1] - breaks_[i];
        double acc = out(0, i);
        for (std::size_t d = 1; d <= k + 1; ++d) acc = acc * h + out(d, i);
        offset = acc;
    }
    return PPoly(breaks_, std::move(out), extrapolate_);
}

double PPoly::integrate(double a, double b) const {
    if (!extrapolate_ &&
        (a < breaks_.front() || a > breaks_.back() || b < breaks_.front() || b > breaks_.back()))
        return kNaN;
    const PPoly anti = antiderivative();
    return anti(b) - anti(a);
}

Vector PPoly::roots() const {
    const std::size_t k = degree();
    Vector found;
    std::size_t zero_pieces = 0;

    double scale = 0.0;
    for (double c : coeffs_.data()) scale = std::max(scale, std::abs(c));

    for (std::size_t i = 0; i < intervals(); ++i) {
        const double h = breaks_[i + 1] - breaks_[i];
        Vector local(k + 1);
        for (std::size_t d = 0; d <= k; ++d) local[d] = coeffs_(d, i);

        double piece_scale = 0.0;
        for (double c : local) piece_scale = std::max(piece_scale, std::abs(c));
        if (piece_scale <= 1e-300 || piece_scale <= 1e-14 * scale) {
            ++zero_pieces;  // identically-zero piece: NaN sentinel
            continue;
        }

        const bool last = (i + 1 == intervals());
        const double edge_tol = 1e-12 * std::max(1.0, std::abs(h));
        for (const auto& z : linalg::polynomial_roots(local)) {
            if (std::abs(z.imag()) >= 1e-10) continue;
            double t = z.real();
            if (t < -edge_tol || t > h + edge_tol) continue;
            if (!last && t >= h - edge_tol) continue;  // owned by the next interval
            t = std::clamp(t, 0.0, h);
            found.push_back(breaks_[i] + t);
        }
    }

    std::sort(found.begin(), found.end());
    Vector merged;
    for (double r : found)
        if (merged.empty() || r - merged.back() > 1e-12) merged.push_back(r);
    for (std::size_t z = 0; z < zero_pieces; ++z) merged.push_back(kNaN);
    return merged;
}

BPoly::BPoly(Vector breakpoints, DenseMatrix coeffs, bool extrapolate)
    : breaks_(std::move(breakpoints)), coeffs_(std::move(coeffs)), extrapolate_(extrapolate) {
    if (coeffs_.rows() == 0) throw ValueError("BPoly: empty coefficient array");
    check_breakpoints(breaks_, coeffs_.cols(), "BPoly");
}

std::size_t BPoly::locate(double x) const { return locate_interval(breaks_, x); }

double BPoly::operator()(double x) const {
    if (!std::isfinite(x)) return kNaN;
    if (!extrapolate_ && (x < breaks_.front() || x > breaks_.back())) return kNaN;
    const std::size_t i = locate(x);
    const double s = (x - breaks_[i]) / (breaks_[i + 1] - breaks_[i]);
    // de Casteljau; also evaluates the polynomial for s outside [0, 1].
    Vector beta(coeffs_.rows());
    for (std::size_t j = 0; j < beta.size(); ++j) beta[j] = coeffs_(j, i);
    for (std::size_t r = 1; r < beta.size(); ++r)
        for (std::size_t j = 0; j + r < beta.size(); ++j)
            beta[j] = (1.0 - s) * beta[j] + s * beta[j + 1];
    return beta[0];
}

Vector BPoly::eval(std::span<const double> xs) const {
    Vector out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
    return out;
}

PPoly to_power_basis(const BPoly& b) {
    const std::size_t k = b.degree(), n = b.intervals();
    DenseMatrix out(k + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = b.breakpoints()[i + 1] - b.breakpoints()[i];
        // p(t) = sum_j c_j C(k,j) (t/h)^j (1-t/h)^(k-j); expand into powers of s=t/h.
        Vector spow(k + 1, 0.0);
        for (std::size_t j = 0; j <= k; ++j) {
            const double cj = b.coefficients()(j, i) * binomial(k, j);
            double sign = 1.0;
            for (std::size_t m = j; m <= k; ++m) {
                spow[m] += cj * binomial(k - j, m - j) * sign;
                sign = -sign;
            }
        }
        double hp = 1.0;
        for (std::size_t m = 0; m <= k; ++m) {
            out(k - m, i) = spow[m] / hp;  // row k-m holds the t^m coefficient
            hp *= h;
        }
    }
    return PPoly(b.breakpoints(), std::move(out));
}

BPoly to_bernstein_basis(const PPoly& p) {
    const std::size_t k = p.degree(), n = p.intervals();
    DenseMatrix out(k + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double h = p.breakpoints()[i + 1] - p.breakpoints()[i];
        // Power coefficients in the normalized coordinate s = t/h.
        Vector spow(k + 1);
        double hp = 1.0;
        for (std::size_t m = 0; m <= k; ++m) {
            spow[m] = p.coefficients()(k - m, i) * hp;
            hp *= h;
        }
        for (std::size_t j = 0; j <= k; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m <= j; ++m)
                acc += binomial(j, m) / binomial(k, m) * spow[m];
            out(j, i) = acc;
        }
    }
    return BPoly(p.breakpoints(), std::move(out));
}

BSpline::BSpline(Vector knots, Vector coefficients, std::size_t degree, bool extrapolate)
    : knots_(std::move(knots)), coeffs_(std::move(coefficients)), degree_(degree),
      extrapolate_(extrapolate) {
    if (coeffs_.empty()) throw ValueError("BSpline: need at least one coefficient");
    if (knots_.size() != coeffs_.size() + degree_ + 1)
        throw DimensionError("BSpline: knots must number coefficients + degree + 1");
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i)
        if (knots_[i] > knots_[i + 1]) throw ValueError("BSpline: knots must be nondecreasing");
    if (!(domain_min() < domain_max()))
        throw ValueError("BSpline: empty evaluation domain (knot multiplicity too high)");
    // Multiplicity above degree + 1 makes basis functions collapse entirely.
    std::size_t run = 1;
    for (std::size_t i = 1; i < knots_.size(); ++i) {
        run = knots_[i] == knots_[i - 1] ? run + 1 : 1;
        if (run > degree_ + 1) throw ValueError("BSpline: knot multiplicity exceeds degree + 1");
    }
}

double BSpline::operator()(double x) const {
    if (!std::isfinite(x)) return kNaN;
    const std::size_t n = coeffs_.size(), k = degree_;
    if (x < domain_min() || x > domain_max()) {
        if (!extrapolate_) return kNaN;
        x = std::clamp(x, domain_min(), domain_max());  // clamp-to-domain extrapolation
    }
    // Right-continuous interval lookup; the right domain edge takes the left
    // limit by sliding to the last non-empty interval.
    std::size_t i;
    {
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        i = static_cast<std::size_t>(it - knots_.begin());
        i = i == 0 ? k : i - 1;
        i = std::clamp(i, k, n - 1);
        while (i > k && knots_[i] == knots_[i + 1]) --i;
    }

    // de Boor's recurrence on the k+1 active coefficients.
    Vector d(k + 1);
    for (std::size_t j = 0; j <= k; ++j) d[j] = coeffs_[i - k + j];
    for (std::size_t r = 1; r <= k; ++r) {
        for (std::size_t j = k; j >= r; --j) {
            const std::size_t idx = i - k + j;
            const double den = knots_[idx + k + 1 - r] - knots_[idx];
            const double alpha = den > 0.0 ? (x - knots_[idx]) / den : 0.0;
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
        }
    }
    return d[k];
}

Vector BSpline::eval(std::span<const double> xs) const {
    Vector out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (*this)(xs[i]);
    return out;
}

BSpline BSpline::derivative() const {
    if (degree_ == 0) {
        // Derivative of a step function is zero on each interval.
        Vector knots(knots_.begin(), knots_.end());
        return BSpline(knots, Vector(coeffs_.size(), 0.0), 0, extrapolate_);
    }
    const std::size_t n = coeffs_.size(), k = degree_;
    Vector dcoef(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double den = knots_[j + k + 1] - knots_[j + 1];
        dcoef[j] = den > 0.0 ? static_cast<double>(k) * (coeffs_[j + 1] - coeffs_[j]) / den : 0.0;
    }
    Vector dknots(knots_.begin() + 1, knots_.end() - 1);
    return BSpline(std::move(dknots), std::move(dcoef), k - 1, extrapolate_);
}

PPoly to_ppoly(const BSpline& s) {
    const std::size_t k = s.degree();
    Vector breaks;
    for (double t : s.knots()) {
        if (t < s.domain_min() || t > s.domain_max()) continue;
        if (breaks.empty() || t > breaks.back()) breaks.push_back(t);
    }

    // Successive derivative splines give the local Taylor coefficients at the
    // left edge of every interval.
    std::vector<BSpline> derivs;
    derivs.push_back(s);
    for (std::size_t r = 0; r < k; ++r) derivs.push_back(derivs.back().derivative());

    const std::size_t n = breaks.size() - 1;
    DenseMatrix coeffs(k + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        double factorial = 1.0;
        for (std::size_t r = 0; r <= k; ++r) {
            if (r > 0) factorial *= static_cast<double>(r);
            coeffs(k - r, i) = derivs[r](breaks[i]) / factorial;
        }
    }
    return PPoly(std::move(breaks), std::move(coeffs), false);
}

PPoly cubic_spline(std::span<const double> xs, std::span<const double> ys, BoundaryCondition bc) {
    if (xs.size() != ys.size()) throw DimensionError("cubic_spline: xs/ys length mismatch");
    if (xs.size() < 2) throw ValueError("cubic_spline: need at least two points");
    check_strict_xs(xs, "cubic_spline");
    const std::size_t n = xs.size() - 1;  // intervals

    Vector slopes(n + 1);
    Vector dx(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = xs[i + 1] - xs[i];
        d[i] = (ys[i + 1] - ys[i]) / dx[i];
    }

    if (n == 1) {
        if (bc.type == BoundaryCondition::Type::clamped) {
            slopes[0] = bc.deriv_left;
            slopes[1] = bc.deriv_right;
        } else {
            slopes[0] = slopes[1] = d[0];
        }
        return hermite_to_ppoly(xs, ys, slopes);
    }

    if (bc.type == BoundaryCondition::Type::not_a_knot && n == 2) {
        // Three points: the single parabola through them.
        const double c2 = (d[1] - d[0]) / (xs[2] - xs[0]);
        slopes[0] = d[0] - c2 * dx[0];
        slopes[1] = d[0] + c2 * dx[0];
        slopes[2] = d[1] + c2 * dx[1];
        return hermite_to_ppoly(xs, ys, slopes);
    }

    Vector sub(n, 0.0), diag(n + 1, 0.0), sup(n, 0.0), rhs(n + 1, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        sub[i - 1] = dx[i];
        diag[i] = 2.0 * (dx[i] + dx[i - 1]);
        sup[i] = dx[i - 1];
        rhs[i] = 3.0 * (dx[i] * d[i - 1] + dx[i - 1] * d[i]);
    }
    switch (bc.type) {
        case BoundaryCondition::Type::natural:
            diag[0] = 2.0;
            sup[0] = 1.0;
            rhs[0] = 3.0 * d[0];
            diag[n] = 2.0;
            sub[n - 1] = 1.0;
            rhs[n] = 3.0 * d[n - 1];
            break;
        case BoundaryCondition::Type::clamped:
            diag[0] = 1.0;
            sup[0] = 0.0;
            rhs[0] = bc.deriv_left;
            diag[n] = 1.0;
            sub[n - 1] = 0.0;
            rhs[n] = bc.deriv_right;
            break;
        case BoundaryCondition::Type::not_a_knot: {
            // Third-derivative continuity at the second and penultimate breaks.
            const double dl = xs[2] - xs[0];
            diag[0] = dx[1];
            sup[0] = dl;
            rhs[0] = ((dx[0] + 2.0 * dl) * dx[1] * d[0] + dx[0] * dx[0] * d[1]) / dl;
            const double dr = xs[n] - xs[n - 2];
            diag[n] = dx[n - 2];
            sub[n - 1] = dr;
            rhs[n] = (dx[n - 1] * dx[n - 1] * d[n - 2] +
                      (2.0 * dr + dx[n - 1]) * dx[n - 2] * d[n - 1]) /
                     dr;
            break;
        }
    }
    slopes = linalg::solve_tridiagonal(sub, diag, sup, rhs);
    return hermite_to_ppoly(xs, ys, slopes);
}

PPoly pchip(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DimensionError("pchip: xs/ys length mismatch");
    if (xs.size() < 2) throw ValueError("pchip: need at least two points");
    check_strict_xs(xs, "pchip");
    const std::size_t n = xs.size() - 1;

    Vector dx(n), d(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = xs[i + 1] - xs[i];
        d[i] = (ys[i + 1] - ys[i]) / dx[i];
    }

    Vector slopes(n + 1, 0.0);
    if (n == 1) {
        slopes[0] = slopes[1] = d[0];
        return hermite_to_ppoly(xs, ys, slopes);
    }

    auto edge_slope = [](double h0, double h1, double m0, double m1) {
        // One-sided three-point estimate with Fritsch-Carlson sign clipping.
        double s = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
        if (s * m0 <= 0.0)
            s = 0.0;
        else if (m0 * m1 < 0.0 && std::abs(s) > 3.0 * std::abs(m0))
            s = 3.0 * m0;
        return s;
    };
    slopes[0] = edge_slope(dx[0], dx[1], d[0], d[1]);
    slopes[n] = edge_slope(dx[n - 1], dx[n - 2], d[n - 1], d[n - 2]);
    for (std::size_t i = 1; i < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) {
            slopes[i] = 0.0;  // local extremum or flat segment
        } else {
            const double w1 = 2.0 * dx[i] + dx[i - 1];
            const double w2 = dx[i] + 2.0 * dx[i - 1];
            slopes[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    return hermite_to_ppoly(xs, ys, slopes);
}

PPoly akima(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw DimensionError("akima: xs/ys length mismatch");
    if (xs.size() < 5) throw ValueError("akima: classic end rule needs at least 5 points");
    check_strict_xs(xs, "akima");
    const std::size_t n = xs.size() - 1;

    // Segment slopes extended by two linear-extrapolation ghosts per side.
    Vector m(n + 4);
    for (std::size_t i = 0; i < n; ++i) m[i + 2] = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    m[1] = 2.0 * m[2] - m[3];
    m[0] = 2.0 * m[1] - m[2];
    m[n + 2] = 2.0 * m[n + 1] - m[n];
    m[n + 3] = 2.0 * m[n + 2] - m[n + 1];

    Vector slopes(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double w1 = std::abs(m[i + 3] - m[i + 2]);
        const double w2 = std::abs(m[i + 1] - m[i]);
        slopes[i] = (w1 + w2) > 0.0 ? (w1 * m[i + 1] + w2 * m[i + 2]) / (w1 + w2)
                                    : 0.5 * (m[i + 1] + m[i + 2]);
    }
    return hermite_to_ppoly(xs, ys, slopes);
}

}  // namespace numkit::interp
