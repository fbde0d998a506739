#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mburqr/optimizer.hpp"

namespace mburqr {

// c(u): the alpha = 1 quantile, i.e. the root of 3c^2 - 2c^3 = u in (0,1).
double c_factor(double u);

struct QuantileLevel {
    double u = 0.5;
    double c = 0.5;
    double ln_c = -0.69314718055994530942;

    static QuantileLevel make(double u);
};

struct MburParams {
    double alpha = 1.0;

    explicit MburParams(double a = 1.0);
    double alpha_sq() const noexcept { return alpha * alpha; }
    static MburParams from_alpha_sq(double alpha_sq);
};

// log pdf parameterized directly by alpha^2; no argument checks.
double log_pdf_alpha_sq(double ln_y, double alpha_sq);

double pdf(double y, const MburParams& p);
double log_pdf(double y, const MburParams& p);
double cdf(double y, const MburParams& p);
// 1 - cdf without cancellation near y = 1.
double sf(double y, const MburParams& p);
double quantile(double u, const MburParams& p);

// Inverse-transform sampling. Stream: std::mt19937_64(seed), u = (draw >> 11) * 2^-53,
// zero draws skipped.
std::vector<double> sample(std::size_t n, const MburParams& p, std::uint64_t seed);
std::vector<double> sample_from_uniforms(std::span<const double> u, const MburParams& p);

struct AlphaFit {
    MburParams params;
    double log_likelihood = 0.0;
    bool converged = false;
};

AlphaFit fit_alpha(std::span<const double> y, const NmOptions& options = {});

}  // namespace mburqr
