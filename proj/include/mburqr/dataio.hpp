#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mburqr/association.hpp"
#include "mburqr/model.hpp"

namespace mburqr {

struct DataTable {
    std::string label_header = "label";
    std::vector<std::string> column_names;
    std::vector<std::string> row_labels;
    // cells[row][column]; nullopt = missing.
    std::vector<std::vector<std::optional<double>>> cells;

    std::size_t rows() const noexcept { return row_labels.size(); }
    std::size_t cols() const noexcept { return column_names.size(); }
    // Throws NameError.
    std::size_t column_index(std::string_view name) const;
    std::vector<std::optional<double>> column(std::string_view name) const;

    friend bool operator==(const DataTable&, const DataTable&) = default;
};

DataTable load_csv(std::istream& in);
DataTable load_csv_string(std::string_view text);
DataTable load_csv_file(const std::filesystem::path& path);

void write_csv(std::ostream& out, const DataTable& table);
std::string to_csv_string(const DataTable& table);

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::vector<double> transform_div100_log(std::span<const double> x);

enum class Transform { identity, div100_log };

struct TransformSpec {
    Transform response = Transform::identity;
    Transform predictors = Transform::div100_log;
    std::map<std::string, Transform> overrides;

    Transform for_response(const std::string& name) const;
    Transform for_predictor(const std::string& name) const;

    static TransformSpec none();
};

std::vector<double> apply_transform(Transform t, std::span<const double> x);

// Listwise deletion over the response and predictors, then transforms and the intercept column.
DesignData build_design(const DataTable& table, const ModelSpec& spec,
                        const TransformSpec& transforms = {});

// Named columns with missing cells as NaN. With listwise set, only rows complete in every
// requested column are kept. Predictor transforms apply when transforms is given.
std::vector<NamedColumn> select_columns(const DataTable& table, const std::vector<std::string>& names,
                                        bool listwise, const TransformSpec* transforms = nullptr,
                                        std::vector<std::string>* kept_labels = nullptr);

// Appendix-style OECD indicator table, compiled in.
std::string_view oecd_fixture_csv();
const DataTable& oecd_fixture();
std::uint64_t fnv1a64(std::string_view bytes);
extern const std::uint64_t kOecdFixtureChecksum;

}  // namespace mburqr
