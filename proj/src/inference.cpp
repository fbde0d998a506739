#include "mburqr/inference.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include "mburqr/errors.hpp"

namespace mburqr {

IcSet information_criteria(double ll, std::size_t p, std::size_t n) {
    if (n <= p + 1) throw DomainError("information_criteria: CAIC undefined for n <= p + 1");
    if (!std::isfinite(ll)) throw DomainError("information_criteria: log-likelihood not finite");
    const double pd = static_cast<double>(p);
    const double nd = static_cast<double>(n);
    IcSet ic;
    ic.aic = -2.0 * ll + 2.0 * pd;
    ic.caic = ic.aic + 2.0 * pd * (pd + 1.0) / (nd - pd - 1.0);
    ic.bic = -2.0 * ll + pd * std::log(nd);
    ic.hqic = -2.0 * ll + 2.0 * pd * std::log(std::log(nd));
    return ic;
}

LrtResult lrt(double ll_full, double ll_nested, std::size_t df) {
    if (df == 0) throw DomainError("lrt: df must be at least 1");
    LrtResult r;
    const double raw = 2.0 * (ll_full - ll_nested);
    r.floored = raw < 0.0;
    r.statistic = std::max(0.0, raw);
    r.p_value = chi_squared_sf(r.statistic, df);
    return r;
}

double pseudo_r2(double ll_null, double ll_full, std::size_t n) {
    if (n == 0) throw DomainError("pseudo_r2: n must be at least 1");
    return 1.0 - std::exp(2.0 / static_cast<double>(n) * (ll_null - ll_full));
}

std::vector<std::vector<std::string>> default_removal_subsets(const ModelSpec& spec) {
    std::vector<std::vector<std::string>> out;
    for (const auto& p : spec.predictors) out.push_back({p});
    if (spec.predictors.size() > 1) out.push_back(spec.predictors);
    return out;
}

std::string ladder_label(const ModelSpec& spec, const std::vector<std::string>& removed) {
    if (removed.empty()) return "Full";
    if (removed.size() == spec.predictors.size()) return "Null";
    std::vector<std::size_t> idx;
    for (const auto& r : removed) {
        auto it = std::find(spec.predictors.begin(), spec.predictors.end(), r);
        idx.push_back(static_cast<std::size_t>(it - spec.predictors.begin()) + 1);
    }
    std::sort(idx.begin(), idx.end());
    std::string label = "R";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) label += ",";
        label += "x" + std::to_string(idx[i]);
    }
    return label;
}

LadderReport drop_one_ladder(const ModelSpec& spec, const DesignData& data,
                             const std::vector<std::vector<std::string>>& removal_subsets,
                             const NmOptions& options) {
    if (spec.predictors.empty()) throw DomainError("ladder: nothing to remove (model has no predictors)");

    struct Job {
        std::vector<std::string> removed;
        std::vector<std::string> retained;
    };
    std::vector<Job> jobs;
    for (const auto& subset : removal_subsets) {
        std::set<std::string> drop;
        for (const auto& name : subset) {
            if (std::find(spec.predictors.begin(), spec.predictors.end(), name) == spec.predictors.end())
                throw NameError("ladder: '" + name + "' is not a predictor of the model");
            if (!drop.insert(name).second) throw DomainError("ladder: '" + name + "' removed twice");
        }
        Job job;
        for (const auto& p : spec.predictors) (drop.count(p) ? job.removed : job.retained).push_back(p);
        jobs.push_back(std::move(job));
    }

    auto fit_subset = [&](const std::vector<std::string>& keep) {
        ModelSpec s = spec;
        s.predictors = keep;
        return fit(s, data.with_predictors(keep), options);
    };

    auto full_future = std::async(std::launch::async, fit_subset, spec.predictors);
    auto null_future = std::async(std::launch::async, fit_subset, std::vector<std::string>{});
    std::vector<std::future<FitResult>> single_futures;
    for (const auto& p : spec.predictors)
        single_futures.push_back(std::async(std::launch::async, fit_subset, std::vector<std::string>{p}));
    std::vector<std::future<FitResult>> row_futures;
    for (const auto& job : jobs) row_futures.push_back(std::async(std::launch::async, fit_subset, job.retained));

    LadderReport report;
    report.full = full_future.get();
    report.null_model = null_future.get();
    for (auto& f : single_futures) report.single_fits.push_back(f.get());

    const std::size_t n = data.n();
    report.full_ic = information_criteria(report.full.log_likelihood, report.full.p, n);
    report.full_vs_null = lrt(report.full.log_likelihood, report.null_model.log_likelihood, spec.predictors.size());
    report.full_r2 = pseudo_r2(report.null_model.log_likelihood, report.full.log_likelihood, n);

    for (std::size_t r = 0; r < jobs.size(); ++r) {
        LadderRow row;
        row.removed = jobs[r].removed;
        row.retained = jobs[r].retained;
        row.label = ladder_label(spec, row.removed);
        try {
            FitResult f = row_futures[r].get();
            if (f.n != report.full.n) throw DomainError("ladder: reduced fit used a different row set");
            if (row.removed.empty()) {
                row.lrt_vs_full = LrtResult{};
            } else {
                row.lrt_vs_full = lrt(report.full.log_likelihood, f.log_likelihood, row.removed.size());
            }
            for (std::size_t j = 0; j < row.retained.size(); ++j) {
                const auto pos = static_cast<std::size_t>(
                    std::find(spec.predictors.begin(), spec.predictors.end(), row.retained[j]) -
                    spec.predictors.begin());
                const double here = f.beta_hat[j + 1];
                const double alone = report.single_fits[pos].beta_hat[1];
                if ((here > 0.0) != (alone > 0.0)) row.sign_preserved = false;
            }
            row.ic = information_criteria(f.log_likelihood, f.p, n);
            row.r2_vs_null = pseudo_r2(report.null_model.log_likelihood, f.log_likelihood, n);
            row.fit = std::move(f);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace mburqr
