#include "mburqr/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "mburqr/errors.hpp"

namespace mburqr {

void ModelSpec::validate() const {
    std::set<std::string> seen;
    for (const auto& p : predictors) {
        if (p == response) throw DomainError("model: response '" + p + "' also listed as predictor");
        if (!seen.insert(p).second) throw DomainError("model: predictor '" + p + "' listed twice");
    }
}

void DesignData::validate() const {
    if (x.rows() != y.size()) throw DomainError("design: response length differs from design rows");
    if (x.cols() == 0) throw DomainError("design: missing intercept column");
    if (predictor_names.size() != k()) throw DomainError("design: predictor names do not match columns");
    if (!row_labels.empty() && row_labels.size() != y.size())
        throw DomainError("design: row label count differs from rows");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (x(i, 0) != 1.0) throw DomainError("design: first column must be all ones");
        if (!(y[i] > 0.0 && y[i] < 1.0))
            throw DomainError("design: response must lie strictly inside (0,1)");
    }
}

DesignData DesignData::with_predictors(const std::vector<std::string>& names) const {
    std::vector<std::size_t> keep{0};
    for (const auto& name : names) {
        auto it = std::find(predictor_names.begin(), predictor_names.end(), name);
        if (it == predictor_names.end()) throw NameError("design: no predictor named '" + name + "'");
        keep.push_back(static_cast<std::size_t>(it - predictor_names.begin()) + 1);
    }
    DesignData out;
    out.y = y;
    out.x = x.select_columns(keep);
    out.row_labels = row_labels;
    out.predictor_names = names;
    out.dropped_labels = dropped_labels;
    return out;
}

NllValue neg_log_likelihood_checked(const ModelSpec& spec, std::span<const double> beta,
                                    const DesignData& data) {
    if (beta.size() != data.x.cols()) throw DomainError("neg_log_likelihood: beta length differs from design");
    NllValue out;
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double phi = dot(data.x.row(i), beta);
        double contribution = -std::numeric_limits<double>::infinity();
        if (std::isfinite(phi)) {
            const double a2 = alpha_sq_from_phi_unchecked(spec.link, phi, spec.level);
            if (a2 > 0.0 && std::isfinite(a2)) contribution = log_pdf_alpha_sq(std::log(data.y[i]), a2);
        }
        if (!std::isfinite(contribution)) {
            out.value = std::numeric_limits<double>::infinity();
            out.bad_row = i;
            return out;
        }
        total += contribution;
    }
    out.value = -total;
    return out;
}

double neg_log_likelihood(const ModelSpec& spec, std::span<const double> beta,
                          const DesignData& data) {
    return neg_log_likelihood_checked(spec, beta, data).value;
}

std::vector<double> default_start(const ModelSpec& spec, const DesignData& data) {
    std::vector<double> sorted = data.y;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double med = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    std::vector<double> start(data.x.cols(), 0.0);
    start[0] = link(spec.link, med);
    return start;
}

FitResult fit(const ModelSpec& spec, const DesignData& data, const NmOptions& options) {
    spec.validate();
    data.validate();
    if (spec.predictors.size() != data.k())
        throw DomainError("fit: model predictors do not match the design columns");
    if (data.n() < data.k() + 2) {
        throw InsufficientDataError("fit: " + std::to_string(data.n()) + " rows for " +
                                    std::to_string(data.k()) + " predictors (need k + 2)");
    }

    auto objective = [&](std::span<const double> b) { return neg_log_likelihood(spec, b, data); };
    const std::vector<double> start = default_start(spec, data);
    const NmOutcome nm = nelder_mead_minimize(objective, start, options);

    FitResult out;
    out.spec = spec;
    out.coefficient_names.push_back("B0");
    for (const auto& name : data.predictor_names) out.coefficient_names.push_back(name);
    out.beta_hat = nm.minimizer;
    out.log_likelihood = -nm.minimum;
    out.converged = nm.converged;
    out.iterations = nm.iterations;
    out.evaluations = nm.evaluations;
    out.n = data.n();
    out.p = out.beta_hat.size();

    try {
        const Matrix h = hessian_central_diff(objective, out.beta_hat, default_hessian_steps(out.beta_hat));
        Matrix v = mat_inverse(h);
        for (std::size_t i = 0; i < v.rows(); ++i)
            for (std::size_t j = i + 1; j < v.cols(); ++j) v(i, j) = v(j, i) = 0.5 * (v(i, j) + v(j, i));
        out.vcov = std::move(v);
    } catch (const NumericalError& e) {
        out.vcov_error = e.what();
    }
    return out;
}

std::vector<WaldRow> wald_tests(const FitResult& fit) {
    std::vector<WaldRow> rows;
    for (std::size_t j = 0; j < fit.beta_hat.size(); ++j) {
        WaldRow r;
        r.name = j < fit.coefficient_names.size() ? fit.coefficient_names[j] : "B" + std::to_string(j);
        r.estimate = fit.beta_hat[j];
        if (!fit.vcov) {
            r.error = "covariance unavailable: " + fit.vcov_error;
        } else if (!((*fit.vcov)(j, j) > 0.0)) {
            r.error = "nonpositive variance";
        } else {
            r.std_error = std::sqrt((*fit.vcov)(j, j));
            r.z = r.estimate / r.std_error;
            r.p_two_sided = std::min(1.0, 2.0 * std_normal_sf(std::fabs(r.z)));
            r.valid = true;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

double predict_quantile(const FitResult& fit, std::span<const double> x_row, double u) {
    if (x_row.size() != fit.beta_hat.size())
        throw DomainError("predict_quantile: row length differs from coefficient count");
    const QuantileLevel target = QuantileLevel::make(u);
    const double a2 = alpha_sq_from_phi(fit.spec.link, dot(x_row, fit.beta_hat), fit.spec.level);
    return std::exp(a2 * target.ln_c);
}

}  // namespace mburqr
