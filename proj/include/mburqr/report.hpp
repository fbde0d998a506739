#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "mburqr/association.hpp"
#include "mburqr/dataio.hpp"
#include "mburqr/diagnostics.hpp"
#include "mburqr/inference.hpp"
#include "mburqr/model.hpp"
#include "mburqr/studies.hpp"

namespace mburqr {

using Json = nlohmann::ordered_json;

struct Provenance {
    std::string data_source;
    Json options = Json::object();
    // Adds a UTC timestamp; off by default so reports stay byte-identical.
    bool stamp = false;
};

Json provenance_json(const Provenance& prov);

// Everything reported for one fitted model.
struct FitAnalysis {
    DesignData data;
    FitResult fit;
    FitResult null_fit;
    std::vector<WaldRow> wald;
    IcSet ic;
    LrtResult lrt_vs_null;
    double pseudo_r2 = 0.0;
    DiagnosticsReport diagnostics;
    std::string transform_label;
};

FitAnalysis analyze_fit(const DataTable& table, const ModelSpec& spec, const TransformSpec& transforms,
                        const NmOptions& options = {});

Json fit_json(const FitAnalysis& a, const Provenance& prov);
std::string fit_text(const FitAnalysis& a);

inline constexpr std::size_t kCurvePoints = 200;

// Quantile curves over the range of one predictor, the others held at their means.
std::string curve_csv(const FitAnalysis& a, std::size_t predictor);
std::string residuals_csv(const FitAnalysis& a);
std::string qq_csv(const FitAnalysis& a);

Json ladder_json(const LadderReport& ladder, const DesignData& data, const Provenance& prov);
std::string ladder_text(const LadderReport& ladder);

struct CorrAnalysis {
    std::vector<std::string> columns;
    std::vector<std::string> vif_columns;
    std::vector<std::string> rows_used;
    bool listwise = true;
    KendallMatrix kendall;
    std::vector<double> vif;
    std::vector<double> condition_indices;
};

// Columns other than the response feed VIF and condition indices (after predictor transforms).
CorrAnalysis analyze_corr(const DataTable& table, const std::vector<std::string>& columns,
                          const std::string& response, bool listwise, const TransformSpec& transforms);

Json corr_json(const CorrAnalysis& c, const Provenance& prov);
std::string corr_text(const CorrAnalysis& c);

struct DescribeRow {
    std::string column;
    DescriptiveStats stats;
};

std::vector<DescribeRow> describe_columns(const DataTable& table, std::vector<std::string> columns);
Json describe_json(const std::vector<DescribeRow>& rows, const Provenance& prov);
std::string describe_text(const std::vector<DescribeRow>& rows);
std::string describe_csv(const std::vector<DescribeRow>& rows);

struct BundleFile {
    std::string name;
    std::string content;
};

struct StudyBundle {
    std::vector<BundleFile> files;
    std::size_t attempted = 0;
    std::size_t failed = 0;
    std::string summary;
};

StudyBundle build_study_bundle(const DataTable& table, const Study& study, LinkKind ladder_link,
                               const TransformSpec& transforms, bool listwise, const NmOptions& options,
                               const Provenance& prov);

void write_text_file(const std::filesystem::path& path, const std::string& content);
void write_bundle(const StudyBundle& bundle, const std::filesystem::path& dir);

// Fixed 4-decimal rendering used in human-readable tables.
std::string fmt4(double v);

}  // namespace mburqr
