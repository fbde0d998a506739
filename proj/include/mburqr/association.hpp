#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mburqr/numerics.hpp"

namespace mburqr {

struct DescriptiveStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double skewness = 0.0;
    double kurtosis = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    // Zero spread: skewness and kurtosis are reported as 0.
    bool degenerate = false;
};

// Quartiles interpolate order statistics at position n*q + 0.5 (clamped to [1, n]).
// Skewness and kurtosis carry the small-sample bias correction; kurtosis is not excess.
DescriptiveStats describe(std::span<const double> x);

// q in [0,1] over an ascending sample.
double hazen_quantile(std::span<const double> sorted, double q);

struct KendallResult {
    double tau = 0.0;
    double p_value = 1.0;
    double z = 0.0;
    long long s = 0;
    std::size_t n = 0;
};

// tau-b; p from the tie-corrected normal approximation of S with continuity correction.
KendallResult kendall_tau(std::span<const double> x, std::span<const double> y);

// NaN marks a missing cell.
struct NamedColumn {
    std::string name;
    std::vector<double> values;
};

struct KendallMatrix {
    std::vector<std::string> labels;
    Matrix tau;
    Matrix p;
    // Complete pairs used per entry.
    std::vector<std::size_t> pair_n;
    // Row-major flags for entries whose correlation is undefined.
    std::vector<bool> undefined;
};

KendallMatrix kendall_matrix(const std::vector<NamedColumn>& columns);

// Entries equal to +inf flag perfect collinearity.
std::vector<double> vif(const Matrix& x);

// sqrt(lambda_max / lambda_j) of the predictor correlation matrix, descending (last = 1).
std::vector<double> condition_indices(const Matrix& x);

}  // namespace mburqr
