#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mburqr/distribution.hpp"
#include "mburqr/errors.hpp"
#include "mburqr/report.hpp"
#include "mburqr/studies.hpp"

namespace mburqr::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        const auto b = cur.find_first_not_of(" \t");
        const auto e = cur.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(cur.substr(b, e - b + 1));
    }
    return out;
}

struct Common {
    std::string data;
    bool stamp = false;
    bool no_transform = false;

    const DataTable& table() {
        if (data.empty()) return oecd_fixture();
        if (!loaded) loaded = load_csv_file(data);
        return *loaded;
    }
    std::string source() const { return data.empty() ? "embedded:oecd_bli.csv" : data; }
    TransformSpec transforms() const { return no_transform ? TransformSpec::none() : TransformSpec{}; }
    Provenance provenance(Json options) const {
        options["predictor_transform"] = no_transform ? "identity" : "div100_log";
        return Provenance{source(), std::move(options), stamp};
    }

private:
    std::optional<DataTable> loaded;
};

void add_common(CLI::App* cmd, Common& c, bool transform_flag) {
    cmd->add_option("--data", c.data, "CSV data file (default: embedded OECD fixture)");
    cmd->add_flag("--stamp", c.stamp, "Embed a UTC timestamp in JSON outputs");
    if (transform_flag) cmd->add_flag("--no-transform", c.no_transform, "Use predictors as given (no ln(x/100))");
}

LinkKind checked_link(const std::string& name) {
    try {
        return parse_link(name);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

QuantileLevel checked_tau(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw UsageError("--tau must lie strictly between 0 and 1");
    return QuantileLevel::make(tau);
}

void emit(std::ostream& out, const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_text_file(path, content);
    }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parametric MBUR quantile regression for unit-interval responses", "mburqr"};
    app.set_version_flag("--version", std::string(MBURQR_VERSION));
    app.require_subcommand(1);

    Common common;
    std::string response, predictors, columns, link_name = "logit", out_path, out_dir, study;
    std::vector<std::string> removals;
    double tau = 0.5;
    bool json = false, pairwise = false;
    double alpha = 1.0;
    std::size_t sample_n = 100;
    std::uint64_t seed = 1;

    auto* describe = app.add_subcommand("describe", "Descriptive statistics per column");
    add_common(describe, common, false);
    describe->add_option("--columns", columns, "Comma-separated columns (default: all)");
    describe->add_option("--out", out_path, "Also write the table as CSV");
    describe->add_flag("--json", json, "Print JSON instead of a table");

    auto* fitc = app.add_subcommand("fit", "Fit one model and report inference and diagnostics");
    add_common(fitc, common, true);
    fitc->add_option("--response", response, "Response column")->required();
    fitc->add_option("--predictors", predictors, "Comma-separated predictor columns (empty: null model)");
    fitc->add_option("--link", link_name, "logit, cloglog or loglog");
    fitc->add_option("--tau", tau, "Modeled quantile level");
    fitc->add_option("--out-dir,--out", out_dir, "Directory for report.json and plot-data CSVs");
    fitc->add_flag("--json", json, "Print the JSON report instead of a table");

    auto* ladder = app.add_subcommand("ladder", "Nested-model comparison by predictor removal");
    add_common(ladder, common, true);
    ladder->add_option("--response", response, "Response column")->required();
    ladder->add_option("--predictors", predictors, "Comma-separated predictor columns")->required();
    ladder->add_option("--link", link_name, "logit, cloglog or loglog");
    ladder->add_option("--tau", tau, "Modeled quantile level");
    ladder->add_option("--remove", removals, "Comma-separated predictors to remove together (repeatable)");
    ladder->add_option("--out", out_path, "Write the JSON ladder report here");
    ladder->add_flag("--json", json, "Print JSON instead of a table");

    auto* corr = app.add_subcommand("corr", "Kendall matrix, VIF and condition indices");
    add_common(corr, common, true);
    corr->add_option("--columns", columns, "Comma-separated columns");
    corr->add_option("--response", response, "Column kept out of VIF and condition indices");
    corr->add_option("--study", study, "Use a study's response and predictors");
    corr->add_flag("--pairwise", pairwise, "Pairwise-complete rows instead of listwise");
    corr->add_option("--out", out_path, "Write the JSON report here");
    corr->add_flag("--json", json, "Print JSON instead of a table");

    auto* report = app.add_subcommand("report", "Full analysis bundle for one study");
    add_common(report, common, true);
    report->add_option("study", study, "education, water, support or safety")->required();
    report->add_option("--out-dir,--out", out_dir, "Output directory")->required();
    report->add_option("--link", link_name, "Link for the full model and ladder");
    report->add_flag("--pairwise", pairwise, "Pairwise-complete rows for the Kendall matrix");

    auto* samplec = app.add_subcommand("sample", "Draw MBUR variates");
    samplec->add_option("--alpha", alpha, "Shape parameter")->required();
    samplec->add_option("--n", sample_n, "Number of draws");
    samplec->add_option("--seed", seed, "Seed of the 64-bit Mersenne Twister stream");
    samplec->add_option("--out", out_path, "CSV output (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (describe->parsed()) {
            const auto rows = describe_columns(common.table(), split_list(columns));
            if (!out_path.empty()) write_text_file(out_path, describe_csv(rows));
            out << (json ? describe_json(rows, common.provenance({{"command", "describe"}})).dump(2) + "\n"
                         : describe_text(rows));
        } else if (fitc->parsed()) {
            ModelSpec spec{response, split_list(predictors), checked_link(link_name), checked_tau(tau)};
            const FitAnalysis a = analyze_fit(common.table(), spec, common.transforms());
            const Json report_json = fit_json(
                a, common.provenance({{"command", "fit"}, {"link", link_name}, {"tau", tau}}));
            if (!out_dir.empty()) {
                const std::filesystem::path dir(out_dir);
                write_text_file(dir / "report.json", report_json.dump(2) + "\n");
                write_text_file(dir / "residuals.csv", residuals_csv(a));
                write_text_file(dir / "qq.csv", qq_csv(a));
                if (a.data.k() == 1) {
                    write_text_file(dir / "curve.csv", curve_csv(a, 0));
                } else {
                    for (std::size_t j = 0; j < a.data.k(); ++j)
                        write_text_file(dir / ("curve_" + spec.predictors[j] + ".csv"), curve_csv(a, j));
                }
            }
            out << (json ? report_json.dump(2) + "\n" : fit_text(a));
        } else if (ladder->parsed()) {
            ModelSpec spec{response, split_list(predictors), checked_link(link_name), checked_tau(tau)};
            if (spec.predictors.empty()) throw UsageError("ladder: nothing to remove (no predictors given)");
            std::vector<std::vector<std::string>> subsets;
            for (const auto& r : removals) subsets.push_back(split_list(r));
            if (subsets.empty()) subsets = default_removal_subsets(spec);
            const DesignData data = build_design(common.table(), spec, common.transforms());
            const LadderReport lr = drop_one_ladder(spec, data, subsets);
            const Json j = ladder_json(lr, data, common.provenance({{"command", "ladder"}, {"link", link_name}, {"tau", tau}}));
            if (!out_path.empty()) write_text_file(out_path, j.dump(2) + "\n");
            out << (json ? j.dump(2) + "\n" : ladder_text(lr));
        } else if (corr->parsed()) {
            std::vector<std::string> cols = split_list(columns);
            if (!study.empty()) {
                const Study* s = nullptr;
                try {
                    s = &find_study(study);
                } catch (const NameError& e) {
                    throw UsageError(e.what());
                }
                response = s->response;
                cols = s->predictors;
            }
            if (cols.size() + (response.empty() ? 0 : 1) < 2) throw UsageError("corr: give at least 2 columns");
            const CorrAnalysis c = analyze_corr(common.table(), cols, response, !pairwise, common.transforms());
            const Json j = corr_json(c, common.provenance({{"command", "corr"}, {"pairwise", pairwise}}));
            if (!out_path.empty()) write_text_file(out_path, j.dump(2) + "\n");
            out << (json ? j.dump(2) + "\n" : corr_text(c));
        } else if (report->parsed()) {
            const Study* s = nullptr;
            try {
                s = &find_study(study);
            } catch (const NameError& e) {
                throw UsageError(e.what());
            }
            const StudyBundle b = build_study_bundle(
                common.table(), *s, checked_link(link_name), common.transforms(), !pairwise, {},
                common.provenance({{"command", "report"}, {"study", study}, {"link", link_name}, {"pairwise", pairwise}}));
            write_bundle(b, out_dir);
            out << b.summary;
            out << "Wrote " << b.files.size() << " files to " << out_dir << " (" << b.failed << " of " << b.attempted
                << " items failed)\n";
            if (b.attempted > 0 && b.failed == b.attempted) return kExitNumerical;
        } else if (samplec->parsed()) {
            if (sample_n == 0) throw UsageError("--n must be at least 1");
            if (!(alpha > 0.0)) throw UsageError("--alpha must be positive");
            const auto ys = sample(sample_n, MburParams(alpha), seed);
            std::string csv = "y\n";
            for (double y : ys) csv += format_double(y) + "\n";
            emit(out, out_path, csv);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::domain_error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "data error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace mburqr::cli
