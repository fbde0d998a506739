#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace mburqr {

// Dense row-major matrix of finite reals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    std::vector<double> column(std::size_t j) const;
    const std::vector<double>& entries() const noexcept { return entries_; }

    Matrix transpose() const;
    // Keeps the listed columns in the given order.
    Matrix select_columns(std::span<const std::size_t> keep) const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend std::vector<double> operator*(const Matrix& a, std::span<const double> v);
    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

double dot(std::span<const double> a, std::span<const double> b);

// Standard normal distribution.
double std_normal_cdf(double x);
double std_normal_sf(double x);
double std_normal_quantile(double p);

// ln Gamma(x) for x > 0 (Lanczos, g = 7).
double ln_gamma(double x);

// Regularized lower/upper incomplete gamma P(a, x) and Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b).
double regularized_beta(double x, double a, double b);

// P(chi^2_df > x).
double chi_squared_sf(double x, std::size_t df);

// Two-sided P(|T_df| > |t|).
double student_t_two_sided_p(double t, double df);

// Asymptotic Kolmogorov tail probability of the one-sample KS statistic,
// with the argument correction d * (sqrt(n) + 0.12 + 0.11 / sqrt(n)).
double ks_p_value(double d, std::size_t n);

// Exact P(D_n >= d) for the one-sample KS statistic (Marsaglia, Tsang & Wang).
double ks_p_value_exact(double d, std::size_t n);

// Gauss-Jordan with partial pivoting. Pivots below 1e-12 times the largest
// absolute entry raise SingularMatrixError.
Matrix mat_inverse(const Matrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
std::vector<double> sym_eigenvalues(const Matrix& a);

struct OlsResult {
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_statistics;
    std::vector<double> residuals;
    double r_squared = 0.0;
    // p-values of every coefficient after the first (intercept) column.
    std::vector<double> slope_p_values;
    std::size_t df_residual = 0;
};

// Least squares through the normal equations; x carries its own intercept column.
OlsResult ols_fit(const Matrix& x, std::span<const double> y);

using ScalarField = std::function<double(std::span<const double>)>;

// Central-difference Hessian, symmetrized.
Matrix hessian_central_diff(const ScalarField& f, std::span<const double> x,
                            std::span<const double> h);

// h_i = cbrt(eps) * max(1, |x_i|).
std::vector<double> default_hessian_steps(std::span<const double> x);

}  // namespace mburqr
