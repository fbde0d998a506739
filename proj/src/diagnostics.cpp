#include "mburqr/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mburqr/errors.hpp"

namespace mburqr {

ResidualSet residuals(const FitResult& fit, const DesignData& data) {
    if (fit.beta_hat.size() != data.x.cols()) throw DomainError("residuals: fit does not match design");
    ResidualSet out;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double a2 = alpha_sq_from_phi(fit.spec.link, dot(data.x.row(i), fit.beta_hat), fit.spec.level);
        double f = cdf(data.y[i], MburParams::from_alpha_sq(a2));
        if (f < kCdfClip || f > 1.0 - kCdfClip) {
            out.clipped_rows.push_back(i);
            f = std::clamp(f, kCdfClip, 1.0 - kCdfClip);
        }
        out.fitted_cdf.push_back(f);
        out.rq.push_back(std_normal_quantile(f));
        out.cs.push_back(-std::log1p(-f));
    }
    return out;
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf_fn) {
    if (sample.size() < 5) throw DomainError("ks_test: need at least 5 observations");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf_fn(sorted[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    KsResult r;
    r.statistic = std::clamp(d, 0.0, 1.0);
    r.exact = sorted.size() <= kKsExactLimit;
    r.p_value = r.exact ? ks_p_value_exact(r.statistic, sorted.size()) : ks_p_value(r.statistic, sorted.size());
    return r;
}

KsResult ks_test_normal(std::span<const double> r) {
    return ks_test(r, [](double v) { return std_normal_cdf(v); });
}

KsResult ks_test_exponential(std::span<const double> r) {
    for (double v : r)
        if (!(v >= 0.0)) throw DomainError("ks_test_exponential: negative entry");
    return ks_test(r, [](double v) { return -std::expm1(-v); });
}

KendallResult residual_predictor_tau(std::span<const double> r, std::span<const double> x) {
    if (r.size() < 5) throw DomainError("residual_predictor_tau: need at least 5 observations");
    return kendall_tau(r, x);
}

std::string to_string(ResidualKind kind) { return kind == ResidualKind::rq ? "rq" : "cs"; }

HomoscedasticityResult homoscedasticity_test(std::span<const double> r, std::span<const double> x,
                                             ResidualKind kind) {
    if (r.size() != x.size()) throw DomainError("homoscedasticity_test: lengths differ");
    if (r.size() < 5) throw DomainError("homoscedasticity_test: need at least 5 observations");
    Matrix design(r.size(), 2, 1.0);
    std::vector<double> sq(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        design(i, 1) = x[i];
        sq[i] = r[i] * r[i];
    }
    const OlsResult ols = ols_fit(design, sq);
    HomoscedasticityResult out;
    out.p_value = ols.slope_p_values.front();
    out.r_squared = ols.r_squared;
    out.residual_kind = kind;
    return out;
}

DiagnosticsReport diagnose(const FitResult& fit, const DesignData& data) {
    DiagnosticsReport rep;
    rep.residuals = residuals(fit, data);
    rep.ks_rq = ks_test_normal(rep.residuals.rq);
    rep.ks_cs = ks_test_exponential(rep.residuals.cs);
    for (std::size_t j = 0; j < data.k(); ++j) {
        PredictorDiagnostics pd;
        pd.predictor = data.predictor_names[j];
        const std::vector<double> xj = data.predictor_column(j);
        try {
            pd.rq_tau = residual_predictor_tau(rep.residuals.rq, xj);
            pd.cs_tau = residual_predictor_tau(rep.residuals.cs, xj);
            pd.rq_homoscedasticity = homoscedasticity_test(rep.residuals.rq, xj, ResidualKind::rq);
            pd.cs_homoscedasticity = homoscedasticity_test(rep.residuals.cs, xj, ResidualKind::cs);
        } catch (const std::exception& e) {
            pd.error = e.what();
        }
        rep.predictors.push_back(std::move(pd));
    }
    return rep;
}

}  // namespace mburqr
