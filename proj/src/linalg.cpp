#include "numkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "numkit/errors.hpp"

namespace numkit::linalg {

bool cholesky_factor(DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionError("cholesky_factor: matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
    }
    return true;
}

Vector forward_substitute(const DenseMatrix& lower, Vector b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw DimensionError("forward_substitute: length mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * b[k];
        b[i] = s / lower(i, i);
    }
    return b;
}

Vector back_substitute_transposed(const DenseMatrix& lower, Vector b) {
    const std::size_t n = lower.rows();
    if (b.size() != n) throw DimensionError("back_substitute_transposed: length mismatch");
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * b[k];
        b[ii] = s / lower(ii, ii);
    }
    return b;
}

Vector cholesky_solve(const DenseMatrix& chol_lower, Vector b) {
    return back_substitute_transposed(chol_lower, forward_substitute(chol_lower, std::move(b)));
}

Vector solve_lu(DenseMatrix a, Vector b) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionError("solve_lu: matrix must be square");
    if (b.size() != n) throw DimensionError("solve_lu: rhs length mismatch");
    std::vector<std::size_t> piv(n);
    std::iota(piv.begin(), piv.end(), std::size_t{0});
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        if (best == 0.0 || !std::isfinite(best)) throw SingularMatrixError("solve_lu: singular matrix");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(b[k], b[p]);
        }
        const double pivot = a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a(i, k) / pivot;
            a(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
            b[i] -= m * b[k];
        }
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * b[j];
        b[ii] = s / a(ii, ii);
    }
    return b;
}

Vector solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                         std::span<const double> sup, Vector rhs) {
    const std::size_t n = diag.size();
    if (rhs.size() != n || sub.size() + 1 != n || sup.size() + 1 != n)
        throw DimensionError("solve_tridiagonal: band lengths inconsistent");
    Vector c(n, 0.0);
    double denom = diag[0];
    if (denom == 0.0) throw SingularMatrixError("solve_tridiagonal: zero pivot");
    if (n > 1) c[0] = sup[0] / denom;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - sub[i - 1] * c[i - 1];
        if (denom == 0.0) throw SingularMatrixError("solve_tridiagonal: zero pivot");
        if (i + 1 < n) c[i] = sup[i] / denom;
        rhs[i] = (rhs[i] - sub[i - 1] * rhs[i - 1]) / denom;
    }
    for (std::size_t ii = n - 1; ii-- > 0;) rhs[ii] -= c[ii] * rhs[ii + 1];
    return rhs;
}

Vector PivotedQr::solve_r_leading(std::size_t col) const {
    Vector x(rank, 0.0);
    for (std::size_t i = 0; i < rank && i <= col; ++i) x[i] = qr(i, col);
    for (std::size_t ii = rank; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t j = ii + 1; j < rank; ++j) s -= qr(ii, j) * x[j];
        x[ii] = s / qr(ii, ii);
    }
    return x;
}

PivotedQr qr_column_pivoted(DenseMatrix a, double rel_tol) {
    const std::size_t m = a.rows(), n = a.cols();
    const std::size_t steps = std::min(m, n);
    PivotedQr out;
    out.tau.assign(steps, 0.0);
    out.perm.resize(n);
    std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});

    Vector colnorm2(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) colnorm2[j] += a(i, j) * a(i, j);

    double r00 = 0.0;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t p = k;
        for (std::size_t j = k + 1; j < n; ++j)
            if (colnorm2[j] > colnorm2[p]) p = j;
        if (p != k) {
            for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, p));
            std::swap(colnorm2[k], colnorm2[p]);
            std::swap(out.perm[k], out.perm[p]);
        }

        double normx = 0.0;
        for (std::size_t i = k; i < m; ++i) normx += a(i, k) * a(i, k);
        normx = std::sqrt(normx);
        if (k == 0) r00 = normx;

        const double tol = (rel_tol > 0.0 ? rel_tol : std::max(m, n) * std::numeric_limits<double>::epsilon()) *
                           std::max(r00, 1e-300);
        if (normx <= tol) break;
        rank = k + 1;

        const double alpha = a(k, k) >= 0.0 ? -normx : normx;
        const double v0 = a(k, k) - alpha;
        a(k, k) = alpha;
        // Householder vector stored with implicit leading 1 after scaling by v0.
        for (std::size_t i = k + 1; i < m; ++i) a(i, k) /= v0;
        out.tau[k] = -v0 / alpha;

        for (std::size_t j = k + 1; j < n; ++j) {
            double s = a(k, j);
            for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
            s *= out.tau[k];
            a(k, j) -= s;
            for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= a(i, k) * s;
            colnorm2[j] = std::max(0.0, colnorm2[j] - a(k, j) * a(k, j));
        }
    }
    out.rank = rank;
    out.qr = std::move(a);
    return out;
}

SymmetricEigen eigh(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DimensionError("eigh: matrix must be square");
    DenseMatrix s = a;
    DenseMatrix v = DenseMatrix::identity(n);

    auto offdiag = [&]() {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) sum += s(i, j) * s(i, j);
        return std::sqrt(sum);
    };

    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(s(i, j)));
    const double stop = std::max(scale, 1e-300) * 1e-15 * n;

    for (int sweep = 0; sweep < 100 && offdiag() > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::abs(apq) <= stop / (n * n + 1)) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double sip = s(i, p), siq = s(i, q);
                    s(i, p) = c * sip - sn * siq;
                    s(i, q) = sn * sip + c * siq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const double spj = s(p, j), sqj = s(q, j);
                    s(p, j) = c * spj - sn * sqj;
                    s(q, j) = sn * spj + c * sqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - sn * viq;
                    v(i, q) = sn * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return s(i, i) < s(j, j); });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = s(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

namespace {

using cplx = std::complex<double>;

/// Eigenvalues of a complex upper Hessenberg matrix by the explicit
/// single-shift QR iteration with Wilkinson shifts and deflation.
std::vector<cplx> hessenberg_eigenvalues(std::vector<std::vector<cplx>> h) {
    const int n = static_cast<int>(h.size());
    std::vector<cplx> eigs;
    eigs.reserve(n);
    const double eps = std::numeric_limits<double>::epsilon();

    int hi = n - 1;
    int stuck = 0;
    int guard = 0;
    while (hi >= 0) {
        if (++guard > 200 * n + 200)
            throw ConvergenceError("polynomial_roots: QR iteration did not converge");
        if (hi == 0) {
            eigs.push_back(h[0][0]);
            --hi;
            continue;
        }
        // Deflate negligible subdiagonals.
        int lo = hi;
        while (lo > 0) {
            const double sub = std::abs(h[lo][lo - 1]);
            const double local = std::abs(h[lo - 1][lo - 1]) + std::abs(h[lo][lo]);
            if (sub <= eps * std::max(local, 1e-300)) {
                h[lo][lo - 1] = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            eigs.push_back(h[hi][hi]);
            --hi;
            stuck = 0;
            continue;
        }

        // Wilkinson shift: eigenvalue of the trailing 2x2 closest to h[hi][hi].
        const cplx a = h[hi - 1][hi - 1], b = h[hi - 1][hi];
        const cplx c = h[hi][hi - 1], d = h[hi][hi];
        const cplx tr = a + d;
        const cplx disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
        cplx mu1 = (tr + disc) * 0.5, mu2 = (tr - disc) * 0.5;
        cplx sigma = std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
        if (++stuck % 21 == 20) sigma = cplx(std::abs(h[hi][hi - 1]), 0.0) + d;  // exceptional shift

        // Explicit shifted QR step on the active block via Givens rotations.
        const int bn = hi - lo + 1;
        std::vector<double> cs(bn - 1);
        std::vector<cplx> sn(bn - 1);
        for (int i = lo; i <= hi; ++i) h[i][i] -= sigma;
        for (int i = lo; i < hi; ++i) {
            const cplx f = h[i][i], g = h[i + 1][i];
            const double fn = std::abs(f), gn = std::abs(g);
            double cc;
            cplx ss;
            if (gn == 0.0) {
                cc = 1.0;
                ss = 0.0;
            } else if (fn == 0.0) {
                cc = 0.0;
                ss = std::conj(g) / gn;
            } else {
                const double r = std::hypot(fn, gn);
                cc = fn / r;
                ss = (f / fn) * (std::conj(g) / r);
            }
            cs[i - lo] = cc;
            sn[i - lo] = ss;
            for (int j = i; j <= hi; ++j) {
                const cplx hij = h[i][j], hi1j = h[i + 1][j];
                h[i][j] = cc * hij + ss * hi1j;
                h[i + 1][j] = -std::conj(ss) * hij + cc * hi1j;
            }
        }
        for (int i = lo; i < hi; ++i) {
            const double cc = cs[i - lo];
            const cplx ss = sn[i - lo];
            for (int r = lo; r <= i + 1; ++r) {
                const cplx hri = h[r][i], hri1 = h[r][i + 1];
                h[r][i] = cc * hri + std::conj(ss) * hri1;
                h[r][i + 1] = -ss * hri + cc * hri1;
            }
        }
        for (int i = lo; i <= hi; ++i) h[i][i] += sigma;
    }
    return eigs;
}

}  // namespace

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs_high_first) {
    // Trim leading (near-)zero coefficients relative to the largest magnitude.
    double maxc = 0.0;
    for (double c : coeffs_high_first) maxc = std::max(maxc, std::abs(c));
    if (maxc == 0.0) throw ValueError("polynomial_roots: zero polynomial");
    std::size_t first = 0;
    while (first < coeffs_high_first.size() &&
           std::abs(coeffs_high_first[first]) <= 1e-14 * maxc)
        ++first;
    std::vector<double> c(coeffs_high_first.begin() + first, coeffs_high_first.end());
    const std::size_t deg = c.empty() ? 0 : c.size() - 1;
    std::vector<cplx> roots;
    if (deg == 0) return roots;
    if (deg == 1) {
        roots.emplace_back(-c[1] / c[0], 0.0);
        return roots;
    }
    if (deg == 2) {
        const double a = c[0], b = c[1], cc = c[2];
        const double disc = b * b - 4.0 * a * cc;
        if (disc >= 0.0) {
            const double sq = std::sqrt(disc);
            // Citardauq form avoids cancellation for the small root.
            const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
            roots.emplace_back(q / a, 0.0);
            roots.emplace_back(q != 0.0 ? cc / q : -b / a - q / a, 0.0);
        } else {
            const double re = -b / (2.0 * a), im = std::sqrt(-disc) / (2.0 * a);
            roots.emplace_back(re, im);
            roots.emplace_back(re, -im);
        }
        return roots;
    }

    // Companion matrix of the monic polynomial, already upper Hessenberg.
    std::vector<std::vector<cplx>> h(deg, std::vector<cplx>(deg, cplx(0.0)));
    for (std::size_t j = 0; j < deg; ++j) h[0][j] = -c[j + 1] / c[0];
    for (std::size_t i = 1; i < deg; ++i) h[i][i - 1] = 1.0;
    return hessenberg_eigenvalues(std::move(h));
}

}  // namespace numkit::linalg
