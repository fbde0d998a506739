#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mburqr/association.hpp"
#include "mburqr/model.hpp"

namespace mburqr {

inline constexpr double kCdfClip = 1e-12;

struct ResidualSet {
    std::vector<double> rq;
    std::vector<double> cs;
    std::vector<double> fitted_cdf;
    // Rows whose fitted CDF was clipped into [1e-12, 1 - 1e-12].
    std::vector<std::size_t> clipped_rows;
};

ResidualSet residuals(const FitResult& fit, const DesignData& data);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
    bool exact = false;
};

// Exact null distribution up to this sample size, the asymptotic series above it.
inline constexpr std::size_t kKsExactLimit = 2000;

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);
KsResult ks_test_normal(std::span<const double> r);
KsResult ks_test_exponential(std::span<const double> r);

KendallResult residual_predictor_tau(std::span<const double> r, std::span<const double> x);

enum class ResidualKind { rq, cs };
std::string to_string(ResidualKind kind);

struct HomoscedasticityResult {
    double p_value = 1.0;
    double r_squared = 0.0;
    ResidualKind residual_kind = ResidualKind::rq;
};

// OLS of r^2 on (1, x); p-value of the slope.
HomoscedasticityResult homoscedasticity_test(std::span<const double> r, std::span<const double> x,
                                             ResidualKind kind);

struct PredictorDiagnostics {
    std::string predictor;
    KendallResult rq_tau;
    KendallResult cs_tau;
    HomoscedasticityResult rq_homoscedasticity;
    HomoscedasticityResult cs_homoscedasticity;
    std::string error;
};

struct DiagnosticsReport {
    ResidualSet residuals;
    KsResult ks_rq;
    KsResult ks_cs;
    std::vector<PredictorDiagnostics> predictors;
};

DiagnosticsReport diagnose(const FitResult& fit, const DesignData& data);

}  // namespace mburqr
