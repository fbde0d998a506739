#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mburqr/distribution.hpp"
#include "mburqr/links.hpp"
#include "mburqr/numerics.hpp"
#include "mburqr/optimizer.hpp"

namespace mburqr {

struct ModelSpec {
    std::string response;
    std::vector<std::string> predictors;
    LinkKind link = LinkKind::logit;
    QuantileLevel level{};

    // Distinct predictors, response not among them.
    void validate() const;
};

struct DesignData {
    std::vector<double> y;
    // n x (k+1), leading column of ones.
    Matrix x;
    std::vector<std::string> row_labels;
    std::vector<std::string> predictor_names;
    // Labels removed by listwise deletion while building the design.
    std::vector<std::string> dropped_labels;

    std::size_t n() const noexcept { return y.size(); }
    std::size_t k() const noexcept { return x.cols() == 0 ? 0 : x.cols() - 1; }

    void validate() const;
    std::vector<double> predictor_column(std::size_t j) const { return x.column(j + 1); }
    // Same rows, keeping only the listed predictors (by name, in the given order).
    DesignData with_predictors(const std::vector<std::string>& names) const;
};

struct NllValue {
    double value = 0.0;
    // First row whose contribution was not finite.
    std::optional<std::size_t> bad_row;
};

NllValue neg_log_likelihood_checked(const ModelSpec& spec, std::span<const double> beta,
                                    const DesignData& data);

// +inf when any row contribution is not finite.
double neg_log_likelihood(const ModelSpec& spec, std::span<const double> beta,
                          const DesignData& data);

struct FitResult {
    ModelSpec spec;
    std::vector<std::string> coefficient_names;
    std::vector<double> beta_hat;
    std::optional<Matrix> vcov;
    std::string vcov_error;
    double log_likelihood = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    std::size_t n = 0;
    std::size_t p = 0;
};

// link(median y) for the intercept, zeros for the slopes.
std::vector<double> default_start(const ModelSpec& spec, const DesignData& data);

FitResult fit(const ModelSpec& spec, const DesignData& data, const NmOptions& options = {});

struct WaldRow {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double z = 0.0;
    double p_two_sided = 1.0;
    bool valid = false;
    std::string error;
};

std::vector<WaldRow> wald_tests(const FitResult& fit);

// x_row includes the leading 1.
double predict_quantile(const FitResult& fit, std::span<const double> x_row, double u);

}  // namespace mburqr
