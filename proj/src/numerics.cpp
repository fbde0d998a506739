#include "mburqr/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mburqr/errors.hpp"

namespace mburqr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

void require_finite(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite entry");
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw DomainError("Matrix: non-finite fill value");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw DomainError("Matrix: entry count " + std::to_string(entries_.size()) +
                          " does not match " + std::to_string(rows) + "x" +
                          std::to_string(cols));
    }
    require_finite(entries_, "Matrix");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DomainError("Matrix: ragged initializer");
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
    require_finite(entries_, "Matrix");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    require_finite(d, "Matrix::diagonal");
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

std::vector<double> Matrix::column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> keep) const {
    Matrix out(rows_, keep.size());
    for (std::size_t c = 0; c < keep.size(); ++c) {
        if (keep[c] >= cols_) throw DomainError("select_columns: column index out of range");
        for (std::size_t i = 0; i < rows_; ++i) out(i, c) = (*this)(i, keep[c]);
    }
    return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DomainError("matrix product: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> v) {
    if (a.cols() != v.size()) throw DomainError("matrix-vector product: dimensions differ");
    std::vector<double> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), v);
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// --- normal distribution ---------------------------------------------------

double std_normal_cdf(double x) {
    if (!std::isfinite(x)) throw DomainError("std_normal_cdf: non-finite argument");
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_sf(double x) {
    if (!std::isfinite(x)) throw DomainError("std_normal_sf: non-finite argument");
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

namespace {

// Acklam's rational approximation for p in (0, 0.5], then one Halley step.
double lower_normal_quantile(double p) {
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0,1)");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return lower_normal_quantile(p);
    return -lower_normal_quantile(1.0 - p);
}

// --- gamma family ----------------------------------------------------------

double ln_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("ln_gamma: argument must be positive");
    if (x == 1.0 || x == 2.0) return 0.0;
    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - ln_gamma(1.0 - x);
    }
    static constexpr std::array<double, 9> coef{
        0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double g = 7.0;
    const double z = x - 1.0;
    double sum = coef[0];
    for (std::size_t i = 1; i < coef.size(); ++i) sum += coef[i] / (z + static_cast<double>(i));
    const double t = z + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

namespace {

double gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < 10000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("incomplete gamma: a must be positive");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma: x must be nonnegative");
}

}  // namespace

double regularized_gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_continued_fraction(a, x);
}

double chi_squared_sf(double x, std::size_t df) {
    if (df == 0) throw DomainError("chi_squared_sf: df must be at least 1");
    if (!(x >= 0.0)) throw DomainError("chi_squared_sf: x must be nonnegative");
    return regularized_gamma_q(0.5 * static_cast<double>(df), 0.5 * x);
}

// --- beta family -----------------------------------------------------------

namespace {

double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("regularized_beta: shapes must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("regularized_beta: x must lie in [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) +
                            b * std::log1p(-x);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return std::exp(ln_front) * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - std::exp(ln_front) * beta_continued_fraction(1.0 - x, b, a) / b;
}

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0.0)) throw DomainError("student_t_two_sided_p: df must be positive");
    if (std::isnan(t)) throw DomainError("student_t_two_sided_p: t is NaN");
    if (std::isinf(t)) return 0.0;
    return regularized_beta(df / (df + t * t), 0.5 * df, 0.5);
}

// --- Kolmogorov-Smirnov ----------------------------------------------------

double ks_p_value(double d, std::size_t n) {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("ks_p_value: d must lie in [0,1]");
    if (n == 0) throw DomainError("ks_p_value: n must be at least 1");
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = d * (sn + 0.12 + 0.11 / sn);
    if (lambda <= 0.0) return 1.0;
    double q;
    if (lambda < 1.18) {
        // Jacobi theta form of the same series; converges fast for small lambda.
        const double w = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
        double s = 0.0;
        for (int k = 1; k <= 100; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * w);
            s += term;
            if (term < 1e-18 * s) break;
        }
        q = 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s;
    } else {
        double s = 0.0;
        double sign = 1.0;
        for (int k = 1; k <= 100; ++k) {
            const double term = std::exp(-2.0 * k * k * lambda * lambda);
            s += sign * term;
            sign = -sign;
            if (term < 1e-18) break;
        }
        q = 2.0 * s;
    }
    return std::clamp(q, 0.0, 1.0);
}

// --- dense linear algebra --------------------------------------------------

Matrix mat_inverse(const Matrix& a) {
    if (!a.square()) throw DomainError("mat_inverse: matrix is not square");
    const std::size_t n = a.rows();
    if (n == 0) throw DomainError("mat_inverse: empty matrix");
    double scale = 0.0;
    for (double v : a.entries()) scale = std::max(scale, std::fabs(v));
    const double tol = 1e-12 * scale;
    if (scale == 0.0) throw SingularMatrixError(0);

    Matrix w = a;
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(w(r, col)) > std::fabs(w(pivot, col))) pivot = r;
        if (std::fabs(w(pivot, col)) <= tol) throw SingularMatrixError(col);
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(col, j), w(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        }
        const double p = w(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            w(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = w(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                w(r, j) -= f * w(col, j);
                inv(r, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

std::vector<double> sym_eigenvalues(const Matrix& a) {
    if (!a.square()) throw DomainError("sym_eigenvalues: matrix is not square");
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::fabs(a(i, j) - a(j, i)) > 1e-10)
                throw DomainError("sym_eigenvalues: matrix is not symmetric");

    Matrix w = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = 0.5 * (a(i, j) + a(j, i));

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += w(i, j) * w(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() >= 1e-12; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (std::fabs(apq) < 1e-300) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double wkp = w(k, p);
                    const double wkq = w(k, q);
                    w(k, p) = c * wkp - s * wkq;
                    w(k, q) = s * wkp + c * wkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double wpk = w(p, k);
                    const double wqk = w(q, k);
                    w(p, k) = c * wpk - s * wqk;
                    w(q, k) = s * wpk + c * wqk;
                }
            }
        }
    }

    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = w(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

OlsResult ols_fit(const Matrix& x, std::span<const double> y) {
    const std::size_t n = x.rows();
    const std::size_t k = x.cols();
    if (y.size() != n) throw DomainError("ols_fit: response length differs from design rows");
    if (k == 0 || n <= k) throw DomainError("ols_fit: need more rows than columns");
    require_finite(y, "ols_fit");

    const Matrix xt = x.transpose();
    const Matrix xtx_inv = mat_inverse(xt * x);
    const std::vector<double> xty = xt * y;

    OlsResult out;
    out.coefficients = xtx_inv * std::span<const double>(xty);
    out.df_residual = n - k;

    const std::vector<double> fitted = x * std::span<const double>(out.coefficients);
    out.residuals.resize(n);
    double sse = 0.0;
    double ymean = 0.0;
    double yscale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.residuals[i] = y[i] - fitted[i];
        sse += out.residuals[i] * out.residuals[i];
        ymean += y[i];
        yscale = std::max(yscale, std::fabs(y[i]));
    }
    ymean /= static_cast<double>(n);
    double sst = 0.0;
    for (double v : y) sst += (v - ymean) * (v - ymean);

    // A numerically exact fit (including constant y) has no residual scale to test against.
    const bool exact_fit = sse <= 1e-24 * std::max(yscale * yscale * static_cast<double>(n), kTiny);
    const bool constant_y = sst <= 1e-24 * std::max(yscale * yscale * static_cast<double>(n), kTiny);
    out.r_squared = constant_y ? 0.0 : std::clamp(1.0 - sse / sst, 0.0, 1.0);

    const double sigma2 = sse / static_cast<double>(out.df_residual);
    out.std_errors.resize(k);
    out.t_statistics.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        out.std_errors[j] = std::sqrt(std::max(0.0, sigma2 * xtx_inv(j, j)));
        const double b = out.coefficients[j];
        if (exact_fit) {
            double col_scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) col_scale = std::max(col_scale, std::fabs(x(i, j)));
            const bool zero_effect = std::fabs(b) * col_scale <= 1e-9 * std::max(yscale, kTiny);
            out.t_statistics[j] = zero_effect ? 0.0 : std::copysign(INFINITY, b);
        } else {
            out.t_statistics[j] = b / out.std_errors[j];
        }
        if (j > 0) {
            out.slope_p_values.push_back(student_t_two_sided_p(
                out.t_statistics[j], static_cast<double>(out.df_residual)));
        }
    }
    return out;
}

// --- finite differences ----------------------------------------------------

std::vector<double> default_hessian_steps(std::span<const double> x) {
    const double base = std::cbrt(kEps);
    std::vector<double> h(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) h[i] = base * std::max(1.0, std::fabs(x[i]));
    return h;
}

Matrix hessian_central_diff(const ScalarField& f, std::span<const double> x,
                            std::span<const double> h) {
    const std::size_t d = x.size();
    if (h.size() != d) throw DomainError("hessian_central_diff: step count differs from dimension");
    for (double hi : h)
        if (!(hi > 0.0) || !std::isfinite(hi))
            throw DomainError("hessian_central_diff: steps must be positive");

    std::vector<double> probe(x.begin(), x.end());
    auto eval = [&](const std::vector<double>& at) {
        const double v = f(at);
        if (!std::isfinite(v)) throw EvaluationError("hessian_central_diff: non-finite value", at);
        return v;
    };

    const double f0 = eval(probe);
    Matrix hess(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        probe[i] = x[i] + h[i];
        const double fp = eval(probe);
        probe[i] = x[i] - h[i];
        const double fm = eval(probe);
        probe[i] = x[i];
        hess(i, i) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            double corners[4];
            int idx = 0;
            for (double si : {1.0, -1.0})
                for (double sj : {1.0, -1.0}) {
                    probe[i] = x[i] + si * h[i];
                    probe[j] = x[j] + sj * h[j];
                    corners[idx++] = eval(probe);
                }
            probe[i] = x[i];
            probe[j] = x[j];
            const double v =
                (corners[0] - corners[1] - corners[2] + corners[3]) / (4.0 * h[i] * h[j]);
            hess(i, j) = v;
            hess(j, i) = v;
        }
    }
    return hess;
}

}  // namespace mburqr
