#include "mburqr/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "mburqr/errors.hpp"

namespace mburqr {

double hazen_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw DomainError("hazen_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("hazen_quantile: q must lie in [0,1]");
    const double n = static_cast<double>(sorted.size());
    const double pos = std::clamp(n * q + 0.5, 1.0, n);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    if (lo >= sorted.size()) return sorted.back();
    return sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1]);
}

DescriptiveStats describe(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("describe: need at least 2 values");
    for (double v : x)
        if (!std::isfinite(v)) throw DomainError("describe: non-finite value");

    DescriptiveStats s;
    s.n = x.size();
    const double n = static_cast<double>(s.n);
    double sum = 0.0;
    for (double v : x) sum += v;
    s.mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.sd = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;

    const double scale = std::max(1.0, std::fabs(s.mean));
    if (m2 <= 1e-28 * scale * scale) {
        s.degenerate = true;
        s.sd = 0.0;
    } else {
        const double g1 = m3 / std::pow(m2, 1.5);
        const double k1 = m4 / (m2 * m2);
        s.skewness = s.n >= 3 ? g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0) : g1;
        s.kurtosis = s.n >= 4
                         ? 3.0 + (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * k1 - 3.0 * (n - 1.0))
                         : k1;
    }

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q25 = hazen_quantile(sorted, 0.25);
    s.median = hazen_quantile(sorted, 0.5);
    s.q75 = hazen_quantile(sorted, 0.75);
    return s;
}

namespace {

int sign(double v) { return (v > 0.0) - (v < 0.0); }

struct TieSums {
    double pairs = 0.0;  // sum t(t-1)/2
    double v = 0.0;      // sum t(t-1)(2t+5)
    double v1 = 0.0;     // sum t(t-1)
    double v2 = 0.0;     // sum t(t-1)(t-2)
};

TieSums tie_sums(std::span<const double> x) {
    std::map<double, double> counts;
    for (double v : x) counts[v] += 1.0;
    TieSums t;
    for (const auto& [value, c] : counts) {
        t.pairs += c * (c - 1.0) / 2.0;
        t.v += c * (c - 1.0) * (2.0 * c + 5.0);
        t.v1 += c * (c - 1.0);
        t.v2 += c * (c - 1.0) * (c - 2.0);
    }
    return t;
}

}  // namespace

KendallResult kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("kendall_tau: sequences differ in length");
    if (x.size() < 3) throw DomainError("kendall_tau: need at least 3 pairs");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DomainError("kendall_tau: non-finite value");

    const std::size_t n = x.size();
    KendallResult r;
    r.n = n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) r.s += sign(x[i] - x[j]) * sign(y[i] - y[j]);

    const double nd = static_cast<double>(n);
    const double n0 = nd * (nd - 1.0) / 2.0;
    const TieSums tx = tie_sums(x);
    const TieSums ty = tie_sums(y);
    if (tx.pairs >= n0 || ty.pairs >= n0)
        throw UndefinedCorrelationError("kendall_tau: correlation undefined for a constant sequence");

    const double s = static_cast<double>(r.s);
    r.tau = s / std::sqrt((n0 - tx.pairs) * (n0 - ty.pairs));
    const double var = (nd * (nd - 1.0) * (2.0 * nd + 5.0) - tx.v - ty.v) / 18.0 +
                       tx.v1 * ty.v1 / (2.0 * nd * (nd - 1.0)) +
                       tx.v2 * ty.v2 / (9.0 * nd * (nd - 1.0) * (nd - 2.0));
    const double z = std::max(0.0, (std::fabs(s) - 1.0) / std::sqrt(var));
    r.z = r.s < 0 ? -z : z;
    r.p_value = std::min(1.0, 2.0 * std_normal_sf(z));
    return r;
}

KendallMatrix kendall_matrix(const std::vector<NamedColumn>& columns) {
    const std::size_t k = columns.size();
    if (k < 2) throw DomainError("kendall_matrix: need at least 2 columns");
    for (const auto& c : columns)
        if (c.values.size() != columns[0].values.size())
            throw DomainError("kendall_matrix: columns differ in length");

    KendallMatrix m;
    m.tau = Matrix::identity(k);
    m.p = Matrix(k, k);
    m.pair_n.assign(k * k, 0);
    m.undefined.assign(k * k, false);
    for (const auto& c : columns) m.labels.push_back(c.name);

    for (std::size_t a = 0; a < k; ++a) {
        std::size_t complete = 0;
        for (double v : columns[a].values) complete += !std::isnan(v);
        m.pair_n[a * k + a] = complete;
        for (std::size_t b = a + 1; b < k; ++b) {
            std::vector<double> xa, xb;
            for (std::size_t i = 0; i < columns[a].values.size(); ++i) {
                const double va = columns[a].values[i];
                const double vb = columns[b].values[i];
                if (std::isnan(va) || std::isnan(vb)) continue;
                xa.push_back(va);
                xb.push_back(vb);
            }
            m.pair_n[a * k + b] = m.pair_n[b * k + a] = xa.size();
            try {
                const KendallResult r = kendall_tau(xa, xb);
                m.tau(a, b) = m.tau(b, a) = r.tau;
                m.p(a, b) = m.p(b, a) = r.p_value;
            } catch (const DomainError&) {
                m.tau(a, b) = m.tau(b, a) = 0.0;
                m.p(a, b) = m.p(b, a) = 1.0;
                m.undefined[a * k + b] = m.undefined[b * k + a] = true;
            }
        }
    }
    return m;
}

std::vector<double> vif(const Matrix& x) {
    const std::size_t k = x.cols();
    const std::size_t n = x.rows();
    if (k < 2) throw DomainError("vif: need at least 2 predictors");
    if (n <= k) throw DomainError("vif: need more rows than predictors");

    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        Matrix design(n, k, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t c = 1;
            for (std::size_t other = 0; other < k; ++other)
                if (other != j) design(i, c++) = x(i, other);
        }
        const std::vector<double> target = x.column(j);
        try {
            const double r2 = ols_fit(design, target).r_squared;
            out[j] = r2 >= 1.0 - 1e-12 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - r2);
        } catch (const SingularMatrixError&) {
            out[j] = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

std::vector<double> condition_indices(const Matrix& x) {
    const std::size_t k = x.cols();
    const std::size_t n = x.rows();
    if (k < 2) throw DomainError("condition_indices: need at least 2 predictors");
    if (n < 2) throw DomainError("condition_indices: need at least 2 rows");

    Matrix z(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sd > 0.0)) throw DomainError("condition_indices: column " + std::to_string(j) + " has zero variance");
        for (std::size_t i = 0; i < n; ++i) z(i, j) = (x(i, j) - mean) / sd;
    }
    Matrix corr = z.transpose() * z;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) corr(a, b) /= static_cast<double>(n - 1);

    const std::vector<double> ev = sym_eigenvalues(corr);
    std::vector<double> out;
    for (auto it = ev.rbegin(); it != ev.rend(); ++it) {
        const double lam = *it;
        out.push_back(lam > 1e-15 * ev.front() ? std::sqrt(ev.front() / lam)
                                                : std::numeric_limits<double>::infinity());
    }
    return out;
}

}  // namespace mburqr
