#include <algorithm>
#include <cmath>
#include <vector>

#include "mburqr/errors.hpp"
#include "mburqr/numerics.hpp"

namespace mburqr {

namespace {

struct ScaledMatrix {
    std::vector<double> v;
    int exponent = 0;  // value = v * 10^exponent
};

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b,
                             std::size_t m) {
    std::vector<double> c(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) {
            const double aik = a[i * m + k];
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < m; ++j) c[i * m + j] += aik * b[k * m + j];
        }
    return c;
}

ScaledMatrix power(const std::vector<double>& a, std::size_t m, std::size_t n,
                   std::size_t centre) {
    if (n == 1) return {a, 0};
    ScaledMatrix half = power(a, m, n / 2, centre);
    ScaledMatrix out{multiply(half.v, half.v, m), 2 * half.exponent};
    if (n % 2 == 1) out.v = multiply(a, out.v, m);
    if (out.v[centre * m + centre] > 1e140) {
        for (double& x : out.v) x *= 1e-140;
        out.exponent += 140;
    }
    return out;
}

}  // namespace

double ks_p_value_exact(double d, std::size_t n) {
    if (!(d >= 0.0 && d <= 1.0)) throw DomainError("ks_p_value_exact: d must lie in [0,1]");
    if (n == 0) throw DomainError("ks_p_value_exact: n must be at least 1");
    if (d == 0.0) return 1.0;
    if (d == 1.0) return 0.0;

    const double nn = static_cast<double>(n);
    const double s2 = d * d * nn;
    if (s2 > 7.24 || (s2 > 3.76 && n > 99)) {
        const double p = 2.0 * std::exp(-(2.000071 + 0.331 / std::sqrt(nn) + 1.409 / nn) * s2);
        return std::clamp(p, 0.0, 1.0);
    }

    const double nd = nn * d;
    const auto k = static_cast<std::size_t>(std::floor(nd)) + 1;
    const std::size_t m = 2 * k - 1;
    const double h = static_cast<double>(k) - nd;

    std::vector<double> hm(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) hm[i * m + j] = (i + 1 >= j) ? 1.0 : 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        hm[i * m] -= std::pow(h, static_cast<double>(i + 1));
        hm[(m - 1) * m + i] -= std::pow(h, static_cast<double>(m - i));
    }
    if (2.0 * h - 1.0 > 0.0) hm[(m - 1) * m] += std::pow(2.0 * h - 1.0, static_cast<double>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (i + 1 > j)
                for (std::size_t g = 1; g <= i + 1 - j; ++g) hm[i * m + j] /= static_cast<double>(g);

    const ScaledMatrix q = power(hm, m, n, k - 1);
    double s = q.v[(k - 1) * m + (k - 1)];
    int exponent = q.exponent;
    for (std::size_t i = 1; i <= n; ++i) {
        s = s * static_cast<double>(i) / nn;
        if (s < 1e-140) {
            s *= 1e140;
            exponent -= 140;
        }
    }
    const double cdf = s * std::pow(10.0, exponent);
    return std::clamp(1.0 - cdf, 0.0, 1.0);
}

}  // namespace mburqr
