#include "mburqr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>

#include "mburqr/errors.hpp"

#ifndef MBURQR_VERSION
#define MBURQR_VERSION "0.0.0"
#endif

namespace mburqr {

std::string fmt4(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    if (v != 0.0 && std::fabs(v) < 1e-4) {
        std::snprintf(buf, sizeof buf, "%.4e", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.4f", v);
    }
    return buf;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
    return s.size() >= width ? " " + s : std::string(width - s.size(), ' ') + s;
}

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

Json ic_json(const IcSet& ic) {
    return Json{{"aic", ic.aic}, {"caic", ic.caic}, {"bic", ic.bic}, {"hqic", ic.hqic}};
}

Json lrt_json(const LrtResult& r, std::size_t df) {
    return Json{{"statistic", r.statistic}, {"df", df}, {"p_value", r.p_value}, {"floored", r.floored}};
}

Json kendall_json(const KendallResult& k) { return Json{{"tau", k.tau}, {"p_value", k.p_value}}; }

Json ks_json(const KsResult& k) {
    return Json{{"statistic", k.statistic}, {"p_value", k.p_value}, {"method", k.exact ? "exact" : "asymptotic"}};
}

Json spec_json(const ModelSpec& spec, const std::string& transform) {
    return Json{{"response", spec.response},
                {"predictors", spec.predictors},
                {"link", to_string(spec.link)},
                {"tau", spec.level.u},
                {"predictor_transform", transform}};
}

Json coefficients_json(const FitResult& f) {
    Json out = Json::array();
    for (const auto& w : wald_tests(f)) {
        Json row{{"name", w.name}, {"estimate", w.estimate}};
        if (w.valid) {
            row["std_error"] = w.std_error;
            row["z"] = w.z;
            row["p_two_sided"] = w.p_two_sided;
            row["significant_0_05"] = w.p_two_sided < 0.05;
        } else {
            row["std_error"] = nullptr;
            row["z"] = nullptr;
            row["p_two_sided"] = nullptr;
            row["error"] = w.error;
        }
        out.push_back(std::move(row));
    }
    return out;
}

Json fit_core_json(const FitResult& f) {
    Json j{{"converged", f.converged},
           {"iterations", f.iterations},
           {"evaluations", f.evaluations},
           {"n", f.n},
           {"p", f.p},
           {"log_likelihood", f.log_likelihood},
           {"coefficients", coefficients_json(f)}};
    if (f.vcov) {
        j["vcov"] = matrix_json(*f.vcov);
    } else {
        j["vcov"] = nullptr;
        j["vcov_error"] = f.vcov_error;
    }
    return j;
}

std::string transform_label(const TransformSpec& t) {
    return t.predictors == Transform::div100_log ? "div100_log" : "identity";
}

std::string p_text(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, p < 1e-4 ? "%.4e" : "%.4f", p);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Json provenance_json(const Provenance& prov) {
    Json j{{"tool", "mburqr"}, {"version", MBURQR_VERSION}, {"data", prov.data_source}, {"options", prov.options}};
    if (prov.stamp) j["generated_at"] = utc_now();
    return j;
}

// --- single fits ---------------------------------------------------------------

FitAnalysis analyze_fit(const DataTable& table, const ModelSpec& spec, const TransformSpec& transforms,
                        const NmOptions& options) {
    FitAnalysis a;
    a.transform_label = transform_label(transforms);
    a.data = build_design(table, spec, transforms);
    a.fit = fit(spec, a.data, options);
    if (spec.predictors.empty()) {
        a.null_fit = a.fit;
    } else {
        ModelSpec null_spec = spec;
        null_spec.predictors.clear();
        a.null_fit = fit(null_spec, a.data.with_predictors({}), options);
    }
    a.wald = wald_tests(a.fit);
    a.ic = information_criteria(a.fit.log_likelihood, a.fit.p, a.fit.n);
    if (!spec.predictors.empty())
        a.lrt_vs_null = lrt(a.fit.log_likelihood, a.null_fit.log_likelihood, spec.predictors.size());
    a.pseudo_r2 = pseudo_r2(a.null_fit.log_likelihood, a.fit.log_likelihood, a.fit.n);
    a.diagnostics = diagnose(a.fit, a.data);
    return a;
}

Json fit_json(const FitAnalysis& a, const Provenance& prov) {
    Json diag_predictors = Json::array();
    for (const auto& pd : a.diagnostics.predictors) {
        Json j{{"name", pd.predictor}};
        if (pd.error.empty()) {
            j["rq_tau"] = kendall_json(pd.rq_tau);
            j["cs_tau"] = kendall_json(pd.cs_tau);
            j["homoscedasticity_rq"] = {{"p_value", pd.rq_homoscedasticity.p_value},
                                        {"r_squared", pd.rq_homoscedasticity.r_squared}};
            j["homoscedasticity_cs"] = {{"p_value", pd.cs_homoscedasticity.p_value},
                                        {"r_squared", pd.cs_homoscedasticity.r_squared}};
        } else {
            j["error"] = pd.error;
        }
        diag_predictors.push_back(std::move(j));
    }
    Json clipped = Json::array();
    for (std::size_t i : a.diagnostics.residuals.clipped_rows) clipped.push_back(a.data.row_labels[i]);

    Json j;
    j["spec"] = spec_json(a.fit.spec, a.transform_label);
    j["n"] = a.fit.n;
    j["dropped_rows"] = a.data.dropped_labels;
    j["fit"] = fit_core_json(a.fit);
    j["information_criteria"] = ic_json(a.ic);
    j["null_model"] = {{"log_likelihood", a.null_fit.log_likelihood}, {"b0", a.null_fit.beta_hat.front()}};
    j["lrt_vs_null"] = lrt_json(a.lrt_vs_null, a.fit.spec.predictors.size());
    j["pseudo_r2"] = a.pseudo_r2;
    j["diagnostics"] = {{"ks_rq", ks_json(a.diagnostics.ks_rq)},
                        {"ks_cs", ks_json(a.diagnostics.ks_cs)},
                        {"clipped_rows", clipped},
                        {"predictors", diag_predictors}};
    j["provenance"] = provenance_json(prov);
    return j;
}

std::string fit_text(const FitAnalysis& a) {
    const FitResult& f = a.fit;
    std::ostringstream out;
    out << "Model: " << f.spec.response << " ~ "
        << (f.spec.predictors.empty() ? std::string("1") : join(f.spec.predictors, " + ")) << "  (link "
        << to_string(f.spec.link) << ", tau " << f.spec.level.u << ", n " << f.n << ")\n";
    if (!a.data.dropped_labels.empty()) out << "Dropped rows: " << join(a.data.dropped_labels, ", ") << "\n";
    out << pad("", 20) << lpad("Estimate", 12) << lpad("SE", 12) << lpad("z", 12) << lpad("p", 12) << "\n";
    for (const auto& w : a.wald) {
        out << pad(w.name, 20) << lpad(fmt4(w.estimate), 12);
        if (w.valid) {
            out << lpad(fmt4(w.std_error), 12) << lpad(fmt4(w.z), 12) << lpad(p_text(w.p_two_sided), 12)
                << (w.p_two_sided < 0.05 ? " *" : "");
        } else {
            out << "  (" << w.error << ")";
        }
        out << "\n";
    }
    if (f.vcov) {
        out << "Variance-covariance matrix\n";
        for (std::size_t i = 0; i < f.vcov->rows(); ++i) {
            for (std::size_t k = 0; k < f.vcov->cols(); ++k) out << lpad(fmt4((*f.vcov)(i, k)), 12);
            out << "\n";
        }
    }
    out << pad("LL", 20) << fmt4(f.log_likelihood) << "\n"
        << pad("AIC", 20) << fmt4(a.ic.aic) << "\n"
        << pad("CAIC", 20) << fmt4(a.ic.caic) << "\n"
        << pad("BIC", 20) << fmt4(a.ic.bic) << "\n"
        << pad("HQIC", 20) << fmt4(a.ic.hqic) << "\n";
    if (!f.spec.predictors.empty())
        out << pad("LRT", 20) << fmt4(a.lrt_vs_null.statistic) << " (p=" << p_text(a.lrt_vs_null.p_value) << ")\n";
    out << pad("R-squared", 20) << fmt4(a.pseudo_r2) << "\n"
        << pad("KS p (RQ)", 20) << fmt4(a.diagnostics.ks_rq.p_value) << "\n"
        << pad("KS p (CS)", 20) << fmt4(a.diagnostics.ks_cs.p_value) << "\n";
    for (const auto& pd : a.diagnostics.predictors) {
        if (!pd.error.empty()) {
            out << pd.predictor << ": " << pd.error << "\n";
            continue;
        }
        out << pd.predictor << ": RQ vs predictor tau " << fmt4(pd.rq_tau.tau) << " (p=" << fmt4(pd.rq_tau.p_value)
            << "), CS vs predictor tau " << fmt4(pd.cs_tau.tau) << " (p=" << fmt4(pd.cs_tau.p_value) << ")\n"
            << pad("", 2) << "homoscedasticity RQ p=" << fmt4(pd.rq_homoscedasticity.p_value)
            << " R2=" << fmt4(pd.rq_homoscedasticity.r_squared) << ", CS p=" << fmt4(pd.cs_homoscedasticity.p_value)
            << " R2=" << fmt4(pd.cs_homoscedasticity.r_squared) << "\n";
    }
    out << "Converged: " << (f.converged ? "yes" : "no") << " (" << f.iterations << " iterations)\n";
    if (!f.vcov) out << "Covariance unavailable: " << f.vcov_error << "\n";
    return out.str();
}

std::string curve_csv(const FitAnalysis& a, std::size_t predictor) {
    if (predictor >= a.data.k()) throw DomainError("curve_csv: predictor index out of range");
    const std::size_t k = a.data.k();
    std::vector<double> means(k + 1, 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        const auto col = a.data.predictor_column(j);
        double s = 0.0;
        for (double v : col) s += v;
        means[j + 1] = s / static_cast<double>(col.size());
    }
    const auto col = a.data.predictor_column(predictor);
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const bool extra = a.fit.spec.level.u != 0.5;

    std::ostringstream out;
    out << "x_transformed,q25,q50,q75" << (extra ? ",q_fit" : "") << "\n";
    std::vector<double> row = means;
    for (std::size_t i = 0; i < kCurvePoints; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(kCurvePoints - 1);
        const double xv = i + 1 == kCurvePoints ? *hi : *lo + t * (*hi - *lo);
        row[predictor + 1] = xv;
        out << format_double(xv) << ',' << format_double(predict_quantile(a.fit, row, 0.25)) << ','
            << format_double(predict_quantile(a.fit, row, 0.5)) << ','
            << format_double(predict_quantile(a.fit, row, 0.75));
        if (extra) out << ',' << format_double(predict_quantile(a.fit, row, a.fit.spec.level.u));
        out << "\n";
    }
    return out.str();
}

std::string residuals_csv(const FitAnalysis& a) {
    std::ostringstream out;
    out << "label,rq,cs,fitted_cdf";
    for (std::size_t j = 0; j < a.data.k(); ++j) out << ",x_" << (j + 1);
    out << "\n";
    const ResidualSet& r = a.diagnostics.residuals;
    for (std::size_t i = 0; i < a.data.n(); ++i) {
        const std::string& label = a.data.row_labels[i];
        if (label.find_first_of(",\"") != std::string::npos) {
            std::string q = "\"";
            for (char ch : label) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            out << q << '"';
        } else {
            out << label;
        }
        out << ',' << format_double(r.rq[i]) << ',' << format_double(r.cs[i]) << ','
            << format_double(r.fitted_cdf[i]);
        for (std::size_t j = 0; j < a.data.k(); ++j) out << ',' << format_double(a.data.x(i, j + 1));
        out << "\n";
    }
    return out.str();
}

std::string qq_csv(const FitAnalysis& a) {
    std::vector<double> rq = a.diagnostics.residuals.rq;
    std::vector<double> cs = a.diagnostics.residuals.cs;
    std::sort(rq.begin(), rq.end());
    std::sort(cs.begin(), cs.end());
    const double n = static_cast<double>(rq.size());
    std::ostringstream out;
    out << "theoretical,empirical_rq,empirical_cs\n";
    for (std::size_t i = 0; i < rq.size(); ++i) {
        const double th = std_normal_quantile((static_cast<double>(i) + 0.5) / n);
        out << format_double(th) << ',' << format_double(rq[i]) << ',' << format_double(cs[i]) << "\n";
    }
    return out.str();
}

// --- ladder ----------------------------------------------------------------------

Json ladder_json(const LadderReport& ladder, const DesignData& data, const Provenance& prov) {
    Json singles = Json::array();
    for (const auto& s : ladder.single_fits) {
        singles.push_back({{"predictor", s.spec.predictors.front()},
                           {"log_likelihood", s.log_likelihood},
                           {"coefficients", coefficients_json(s)}});
    }
    Json rows = Json::array();
    for (const auto& r : ladder.rows) {
        Json j{{"label", r.label}, {"removed", r.removed}, {"retained", r.retained}};
        if (r.fit) {
            j["log_likelihood"] = r.fit->log_likelihood;
            j["converged"] = r.fit->converged;
            j["coefficients"] = coefficients_json(*r.fit);
            j["lrt_vs_full"] = lrt_json(r.lrt_vs_full, r.removed.size());
            j["sign_preserved"] = r.sign_preserved;
            j["information_criteria"] = ic_json(r.ic);
            j["pseudo_r2_vs_null"] = r.r2_vs_null;
        } else {
            j["error"] = r.error;
        }
        rows.push_back(std::move(j));
    }
    Json j;
    j["spec"] = spec_json(ladder.full.spec, prov.options.value("predictor_transform", "div100_log"));
    j["n"] = data.n();
    j["dropped_rows"] = data.dropped_labels;
    j["full"] = fit_core_json(ladder.full);
    j["full"]["information_criteria"] = ic_json(ladder.full_ic);
    j["full"]["lrt_vs_null"] = lrt_json(ladder.full_vs_null, ladder.full.spec.predictors.size());
    j["full"]["pseudo_r2"] = ladder.full_r2;
    j["null_model"] = {{"log_likelihood", ladder.null_model.log_likelihood},
                       {"b0", ladder.null_model.beta_hat.front()}};
    j["single_predictor_fits"] = singles;
    j["rows"] = rows;
    j["provenance"] = provenance_json(prov);
    return j;
}

std::string ladder_text(const LadderReport& ladder) {
    std::ostringstream out;
    out << "Ladder: " << ladder.full.spec.response << " ~ " << join(ladder.full.spec.predictors, " + ")
        << "  (link " << to_string(ladder.full.spec.link) << ", n " << ladder.full.n << ")\n";
    for (std::size_t j = 0; j < ladder.full.spec.predictors.size(); ++j)
        out << "  x" << (j + 1) << " = " << ladder.full.spec.predictors[j] << "\n";
    out << pad("Model", 14) << lpad("LL", 11) << lpad("LRT", 11) << lpad("p", 12) << lpad("AIC", 11)
        << lpad("BIC", 11) << lpad("R-squared", 11) << "  signs\n";
    out << pad("Full", 14) << lpad(fmt4(ladder.full.log_likelihood), 11) << lpad(fmt4(ladder.full_vs_null.statistic), 11)
        << lpad(p_text(ladder.full_vs_null.p_value), 12) << lpad(fmt4(ladder.full_ic.aic), 11)
        << lpad(fmt4(ladder.full_ic.bic), 11) << lpad(fmt4(ladder.full_r2), 11) << "\n";
    for (const auto& r : ladder.rows) {
        out << pad(r.label, 14);
        if (!r.fit) {
            out << "  error: " << r.error << "\n";
            continue;
        }
        out << lpad(fmt4(r.fit->log_likelihood), 11) << lpad(fmt4(r.lrt_vs_full.statistic), 11)
            << lpad(p_text(r.lrt_vs_full.p_value), 12) << lpad(fmt4(r.ic.aic), 11) << lpad(fmt4(r.ic.bic), 11)
            << lpad(fmt4(r.r2_vs_null), 11) << "  " << (r.sign_preserved ? "kept" : "changed") << "\n";
    }
    out << "(LRT and p for Full are against the null model; other rows against Full.)\n";
    return out.str();
}

// --- correlation and collinearity --------------------------------------------------------

CorrAnalysis analyze_corr(const DataTable& table, const std::vector<std::string>& columns,
                          const std::string& response, bool listwise, const TransformSpec& transforms) {
    CorrAnalysis c;
    c.listwise = listwise;
    if (!response.empty() && std::find(columns.begin(), columns.end(), response) == columns.end())
        c.columns.push_back(response);
    c.columns.insert(c.columns.end(), columns.begin(), columns.end());
    if (c.columns.size() < 2) throw DomainError("corr: need at least 2 columns");
    for (const auto& col : c.columns)
        if (col != response) c.vif_columns.push_back(col);

    c.kendall = kendall_matrix(select_columns(table, c.columns, listwise, nullptr, &c.rows_used));

    if (c.vif_columns.size() >= 2) {
        const auto cols = select_columns(table, listwise ? c.columns : c.vif_columns, true, &transforms);
        std::vector<const NamedColumn*> preds;
        for (const auto& col : cols)
            if (col.name != response) preds.push_back(&col);
        const std::size_t rows = preds.front()->values.size();
        Matrix x(rows, preds.size());
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < preds.size(); ++j) x(r, j) = preds[j]->values[r];
        c.vif = vif(x);
        c.condition_indices = condition_indices(x);
    }
    return c;
}

Json corr_json(const CorrAnalysis& c, const Provenance& prov) {
    Json flags = Json::array();
    const std::size_t k = c.columns.size();
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (c.kendall.undefined[a * k + b]) flags.push_back({c.columns[a], c.columns[b]});
    Json vifs = Json::object();
    for (std::size_t j = 0; j < c.vif.size(); ++j) vifs[c.vif_columns[j]] = c.vif[j];
    Json j;
    j["columns"] = c.columns;
    j["row_selection"] = c.listwise ? "listwise" : "pairwise";
    j["rows_used"] = c.rows_used;
    j["kendall"] = {{"tau", matrix_json(c.kendall.tau)}, {"p_value", matrix_json(c.kendall.p)}, {"undefined_pairs", flags}};
    j["vif_columns"] = c.vif_columns;
    j["vif"] = vifs;
    j["condition_indices"] = c.condition_indices;
    j["provenance"] = provenance_json(prov);
    return j;
}

std::string corr_text(const CorrAnalysis& c) {
    std::ostringstream out;
    const std::size_t k = c.columns.size();
    out << "Kendall tau (p-value), " << (c.listwise ? "listwise" : "pairwise") << " rows\n";
    out << pad("", 20);
    for (const auto& name : c.columns) out << lpad(name.substr(0, 17), 18);
    out << "\n";
    for (std::size_t a = 0; a < k; ++a) {
        out << pad(c.columns[a], 20);
        for (std::size_t b = 0; b < k; ++b) {
            if (a == b) {
                out << lpad("1", 18);
            } else if (c.kendall.undefined[a * k + b]) {
                out << lpad("undefined", 18);
            } else {
                out << lpad(fmt4(c.kendall.tau(a, b)) + " (" + fmt4(c.kendall.p(a, b)) + ")", 18);
            }
        }
        out << "\n";
    }
    if (!c.vif.empty()) {
        out << "VIF\n";
        for (std::size_t j = 0; j < c.vif.size(); ++j)
            out << "  " << pad(c.vif_columns[j], 20) << (std::isinf(c.vif[j]) ? "inf (perfect collinearity)" : fmt4(c.vif[j])) << "\n";
        out << "Condition indices:";
        for (double ci : c.condition_indices) out << " " << fmt4(ci);
        out << "\n";
    }
    return out.str();
}

// --- descriptive statistics -------------------------------------------------------------

std::vector<DescribeRow> describe_columns(const DataTable& table, std::vector<std::string> columns) {
    if (columns.empty()) columns = table.column_names;
    std::vector<DescribeRow> rows;
    for (const auto& name : columns) {
        std::vector<double> values;
        for (const auto& cell : table.column(name))
            if (cell) values.push_back(*cell);
        rows.push_back({name, describe(values)});
    }
    return rows;
}

Json describe_json(const std::vector<DescribeRow>& rows, const Provenance& prov) {
    Json cols = Json::array();
    for (const auto& r : rows) {
        const auto& s = r.stats;
        cols.push_back({{"column", r.column}, {"n", s.n}, {"mean", s.mean}, {"sd", s.sd},
                        {"skewness", s.skewness}, {"kurtosis", s.kurtosis}, {"min", s.min},
                        {"q25", s.q25}, {"median", s.median}, {"q75", s.q75}, {"max", s.max},
                        {"degenerate", s.degenerate}});
    }
    return Json{{"columns", cols}, {"provenance", provenance_json(prov)}};
}

std::string describe_text(const std::vector<DescribeRow>& rows) {
    std::ostringstream out;
    out << pad("column", 20) << lpad("n", 5);
    for (const char* h : {"mean", "sd", "skewness", "kurtosis", "min", "q25", "median", "q75", "max"}) out << lpad(h, 11);
    out << "\n";
    for (const auto& r : rows) {
        const auto& s = r.stats;
        out << pad(r.column, 20) << lpad(std::to_string(s.n), 5);
        for (double v : {s.mean, s.sd, s.skewness, s.kurtosis, s.min, s.q25, s.median, s.q75, s.max})
            out << lpad(fmt4(v), 11);
        if (s.degenerate) out << "  (constant)";
        out << "\n";
    }
    return out.str();
}

std::string describe_csv(const std::vector<DescribeRow>& rows) {
    std::ostringstream out;
    out << "column,n,mean,sd,skewness,kurtosis,min,q25,median,q75,max\n";
    for (const auto& r : rows) {
        const auto& s = r.stats;
        out << r.column << ',' << s.n;
        for (double v : {s.mean, s.sd, s.skewness, s.kurtosis, s.min, s.q25, s.median, s.q75, s.max})
            out << ',' << format_double(v);
        out << "\n";
    }
    return out.str();
}

// --- study bundle ---------------------------------------------------------------------

namespace {

struct SummaryCell {
    std::string predictor;
    LinkKind link;
    std::optional<FitAnalysis> analysis;
    std::string error;
};

std::string summary_block(const std::string& predictor, const std::vector<const SummaryCell*>& cells) {
    std::ostringstream out;
    out << "Predictor: " << predictor << "\n" << pad("", 22);
    for (const auto* c : cells) out << lpad(to_string(c->link), 14);
    out << "\n";
    using Getter = std::function<std::string(const FitAnalysis&)>;
    auto wald = [](std::size_t j, int what) -> Getter {
        return [j, what](const FitAnalysis& a) {
            const WaldRow& w = a.wald[j];
            if (what == 0) return fmt4(w.estimate);
            if (!w.valid) return std::string("n/a");
            return what == 1 ? fmt4(w.std_error) : fmt4(w.z);
        };
    };
    const std::vector<std::pair<std::string, Getter>> rows{
        {"B0", wald(0, 0)},
        {"B1", wald(1, 0)},
        {"SE B0", wald(0, 1)},
        {"SE B1", wald(1, 1)},
        {"Wald z B0", wald(0, 2)},
        {"Wald z B1", wald(1, 2)},
        {"LL", [](const FitAnalysis& a) { return fmt4(a.fit.log_likelihood); }},
        {"AIC", [](const FitAnalysis& a) { return fmt4(a.ic.aic); }},
        {"CAIC", [](const FitAnalysis& a) { return fmt4(a.ic.caic); }},
        {"BIC", [](const FitAnalysis& a) { return fmt4(a.ic.bic); }},
        {"HQIC", [](const FitAnalysis& a) { return fmt4(a.ic.hqic); }},
        {"LRT", [](const FitAnalysis& a) { return fmt4(a.lrt_vs_null.statistic); }},
        {"LRT p", [](const FitAnalysis& a) { return p_text(a.lrt_vs_null.p_value); }},
        {"R-squared", [](const FitAnalysis& a) { return fmt4(a.pseudo_r2); }},
        {"KS p (RQ)", [](const FitAnalysis& a) { return fmt4(a.diagnostics.ks_rq.p_value); }},
        {"KS p (CS)", [](const FitAnalysis& a) { return fmt4(a.diagnostics.ks_cs.p_value); }},
    };
    for (const auto& [label, get] : rows) {
        out << pad(label, 22);
        for (const auto* c : cells) out << lpad(c->analysis ? get(*c->analysis) : std::string("failed"), 14);
        out << "\n";
    }
    return out.str();
}

}  // namespace

StudyBundle build_study_bundle(const DataTable& table, const Study& study, LinkKind ladder_link,
                               const TransformSpec& transforms, bool listwise, const NmOptions& options,
                               const Provenance& prov) {
    StudyBundle bundle;
    Json failures = Json::array();
    auto record_failure = [&](const std::string& item, const std::string& what) {
        ++bundle.failed;
        failures.push_back({{"item", item}, {"error", what}});
    };

    std::vector<SummaryCell> cells;
    for (const auto& p : study.predictors)
        for (LinkKind l : kAllLinks) cells.push_back({p, l, std::nullopt, {}});

    std::vector<std::future<FitAnalysis>> futures;
    for (const auto& c : cells) {
        ModelSpec spec{study.response, {c.predictor}, c.link, {}};
        futures.push_back(std::async(std::launch::async, [&table, spec, &transforms, &options] {
            return analyze_fit(table, spec, transforms, options);
        }));
    }
    ModelSpec full_spec{study.response, study.predictors, ladder_link, {}};
    auto full_future = std::async(std::launch::async, [&] { return analyze_fit(table, full_spec, transforms, options); });

    for (std::size_t i = 0; i < cells.size(); ++i) {
        ++bundle.attempted;
        const std::string stem = cells[i].predictor + "_" + to_string(cells[i].link);
        try {
            cells[i].analysis = futures[i].get();
            const FitAnalysis& a = *cells[i].analysis;
            bundle.files.push_back({"fit_" + stem + ".json", fit_json(a, prov).dump(2) + "\n"});
            bundle.files.push_back({"curve_" + stem + ".csv", curve_csv(a, 0)});
            bundle.files.push_back({"residuals_" + stem + ".csv", residuals_csv(a)});
            bundle.files.push_back({"qq_" + stem + ".csv", qq_csv(a)});
        } catch (const std::exception& e) {
            cells[i].error = e.what();
            record_failure("fit " + stem, e.what());
        }
    }

    std::ostringstream summary;
    summary << "Study: " << study.name << " (response " << study.response << ")\n\n";
    std::ostringstream csv;
    csv << "predictor,link,b0,b1,se_b0,se_b1,log_likelihood,aic,caic,bic,hqic,lrt,lrt_p,pseudo_r2,ks_p_rq,ks_p_cs\n";
    for (const auto& p : study.predictors) {
        std::vector<const SummaryCell*> row;
        for (const auto& c : cells)
            if (c.predictor == p) row.push_back(&c);
        summary << summary_block(p, row) << "\n";
        for (const auto* c : row) {
            if (!c->analysis) continue;
            const FitAnalysis& a = *c->analysis;
            csv << p << ',' << to_string(c->link) << ',' << format_double(a.wald[0].estimate) << ','
                << format_double(a.wald[1].estimate) << ',' << (a.wald[0].valid ? format_double(a.wald[0].std_error) : "")
                << ',' << (a.wald[1].valid ? format_double(a.wald[1].std_error) : "") << ','
                << format_double(a.fit.log_likelihood) << ',' << format_double(a.ic.aic) << ','
                << format_double(a.ic.caic) << ',' << format_double(a.ic.bic) << ',' << format_double(a.ic.hqic)
                << ',' << format_double(a.lrt_vs_null.statistic) << ',' << format_double(a.lrt_vs_null.p_value)
                << ',' << format_double(a.pseudo_r2) << ',' << format_double(a.diagnostics.ks_rq.p_value) << ','
                << format_double(a.diagnostics.ks_cs.p_value) << "\n";
        }
    }

    const std::string full_stem = "full_" + to_string(ladder_link);
    ++bundle.attempted;
    try {
        const FitAnalysis full = full_future.get();
        bundle.files.push_back({"fit_" + full_stem + ".json", fit_json(full, prov).dump(2) + "\n"});
        bundle.files.push_back({"residuals_" + full_stem + ".csv", residuals_csv(full)});
        bundle.files.push_back({"qq_" + full_stem + ".csv", qq_csv(full)});
        for (std::size_t j = 0; j < full.data.k(); ++j)
            bundle.files.push_back({"curve_" + full_stem + "_" + study.predictors[j] + ".csv", curve_csv(full, j)});
        summary << "Full model\n" << fit_text(full) << "\n";
    } catch (const std::exception& e) {
        record_failure("fit " + full_stem, e.what());
    }

    ++bundle.attempted;
    try {
        const DesignData data = build_design(table, full_spec, transforms);
        const LadderReport ladder = drop_one_ladder(full_spec, data, default_removal_subsets(full_spec), options);
        Provenance lp = prov;
        lp.options["predictor_transform"] = transform_label(transforms);
        bundle.files.push_back({"ladder_" + to_string(ladder_link) + ".json", ladder_json(ladder, data, lp).dump(2) + "\n"});
        summary << ladder_text(ladder) << "\n";
    } catch (const std::exception& e) {
        record_failure("ladder", e.what());
    }

    ++bundle.attempted;
    try {
        const CorrAnalysis corr = analyze_corr(table, study.predictors, study.response, listwise, transforms);
        bundle.files.push_back({"corr.json", corr_json(corr, prov).dump(2) + "\n"});
        summary << corr_text(corr) << "\n";
    } catch (const std::exception& e) {
        record_failure("corr", e.what());
    }

    ++bundle.attempted;
    try {
        std::vector<std::string> cols{study.response};
        cols.insert(cols.end(), study.predictors.begin(), study.predictors.end());
        const auto rows = describe_columns(table, cols);
        bundle.files.push_back({"describe.json", describe_json(rows, prov).dump(2) + "\n"});
        summary << "Descriptive statistics (raw scale)\n" << describe_text(rows);
    } catch (const std::exception& e) {
        record_failure("describe", e.what());
    }

    bundle.files.push_back({"summary.csv", csv.str()});
    bundle.summary = summary.str();
    bundle.files.push_back({"summary.txt", bundle.summary});

    Json names = Json::array();
    for (const auto& f : bundle.files) names.push_back(f.name);
    names.push_back("manifest.json");
    Json manifest{{"study", study.name},
                  {"response", study.response},
                  {"predictors", study.predictors},
                  {"ladder_link", to_string(ladder_link)},
                  {"files", names},
                  {"attempted", bundle.attempted},
                  {"failed", bundle.failed},
                  {"failures", failures},
                  {"provenance", provenance_json(prov)}};
    bundle.files.push_back({"manifest.json", manifest.dump(2) + "\n"});
    return bundle;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void write_bundle(const StudyBundle& bundle, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : bundle.files) write_text_file(dir / f.name, f.content);
}

}  // namespace mburqr
