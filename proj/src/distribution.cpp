#include "mburqr/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "mburqr/errors.hpp"

namespace mburqr {

namespace {

const double kLn6 = std::log(6.0);

void check_alpha(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("MBUR: alpha must be positive and finite");
}

}  // namespace

double c_factor(double u) {
    if (!(u > 0.0 && u < 1.0)) throw DomainError("c_factor: u must lie in (0,1)");
    if (u == 0.5) return 0.5;
    // acos(1 - 2u) = 2 asin(sqrt(u)) and 1 - cos = 2 sin^2 keep small u accurate.
    const double theta = 2.0 * std::asin(std::sqrt(u)) / 3.0;
    const double half = std::sin(0.5 * theta);
    return half * half + 0.5 * std::numbers::sqrt3 * std::sin(theta);
}

QuantileLevel QuantileLevel::make(double u) {
    QuantileLevel q;
    q.u = u;
    q.c = c_factor(u);
    // c(u) = 1 - c(1 - u), so ln c keeps full relative precision near u = 1.
    q.ln_c = u > 0.5 ? std::log1p(-c_factor(1.0 - u)) : std::log(q.c);
    if (!(q.ln_c < 0.0) || !std::isfinite(q.ln_c))
        throw DomainError("QuantileLevel: u too close to the boundary");
    return q;
}

MburParams::MburParams(double a) : alpha(a) { check_alpha(a); }

MburParams MburParams::from_alpha_sq(double alpha_sq) {
    if (!(alpha_sq > 0.0)) throw DomainError("MBUR: alpha^2 must be positive");
    return MburParams(std::sqrt(alpha_sq));
}

double log_pdf_alpha_sq(double ln_y, double alpha_sq) {
    const double inv = 1.0 / alpha_sq;
    return kLn6 - std::log(alpha_sq) + std::log(-std::expm1(inv * ln_y)) + (2.0 * inv - 1.0) * ln_y;
}

double log_pdf(double y, const MburParams& p) {
    if (!(y > 0.0 && y < 1.0)) throw DomainError("MBUR pdf: y must lie in (0,1)");
    return log_pdf_alpha_sq(std::log(y), p.alpha_sq());
}

double pdf(double y, const MburParams& p) { return std::exp(log_pdf(y, p)); }

double cdf(double y, const MburParams& p) {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("MBUR cdf: y must lie in [0,1]");
    if (y == 0.0) return 0.0;
    if (y == 1.0) return 1.0;
    const double t = std::exp(std::log(y) / p.alpha_sq());
    return std::clamp(t * t * (3.0 - 2.0 * t), 0.0, 1.0);
}

double sf(double y, const MburParams& p) {
    if (!(y >= 0.0 && y <= 1.0)) throw DomainError("MBUR sf: y must lie in [0,1]");
    if (y == 0.0) return 1.0;
    if (y == 1.0) return 0.0;
    const double e = std::log(y) / p.alpha_sq();
    const double one_minus_t = -std::expm1(e);
    const double t = std::exp(e);
    return std::clamp(one_minus_t * one_minus_t * (1.0 + 2.0 * t), 0.0, 1.0);
}

double quantile(double u, const MburParams& p) {
    const QuantileLevel q = QuantileLevel::make(u);
    return std::exp(p.alpha_sq() * q.ln_c);
}

std::vector<double> sample_from_uniforms(std::span<const double> u, const MburParams& p) {
    std::vector<double> out;
    out.reserve(u.size());
    for (double v : u) out.push_back(quantile(v, p));
    return out;
}

std::vector<double> sample(std::size_t n, const MburParams& p, std::uint64_t seed) {
    if (n == 0) throw DomainError("sample: n must be at least 1");
    std::mt19937_64 gen(seed);
    std::vector<double> u;
    u.reserve(n);
    while (u.size() < n) {
        const double v = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        if (v > 0.0) u.push_back(v);
    }
    return sample_from_uniforms(u, p);
}

AlphaFit fit_alpha(std::span<const double> y, const NmOptions& options) {
    if (y.size() < 2) throw DomainError("fit_alpha: need at least 2 observations");
    std::string bad;
    std::vector<double> ln_y;
    ln_y.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(y[i] > 0.0 && y[i] < 1.0)) {
            if (!bad.empty()) bad += ", ";
            bad += std::to_string(i);
        } else {
            ln_y.push_back(std::log(y[i]));
        }
    }
    if (!bad.empty()) throw DomainError("fit_alpha: values outside (0,1) at indices " + bad);

    auto nll = [&](std::span<const double> v) {
        const double a2 = std::exp(2.0 * v[0]);
        double s = 0.0;
        for (double l : ln_y) s -= log_pdf_alpha_sq(l, a2);
        return s;
    };

    // Start from the alpha matching the sample median.
    std::vector<double> sorted(y.begin(), y.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double med = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const double start[1] = {0.5 * std::log(std::log(med) / std::log(0.5))};

    const NmOutcome r = nelder_mead_minimize(nll, start, options);
    AlphaFit out;
    out.params = MburParams(std::exp(r.minimizer[0]));
    out.log_likelihood = -r.minimum;
    out.converged = r.converged;
    return out;
}

}  // namespace mburqr
