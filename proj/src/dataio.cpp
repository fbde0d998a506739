#include "mburqr/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "mburqr/errors.hpp"

namespace mburqr {

std::size_t DataTable::column_index(std::string_view name) const {
    for (std::size_t j = 0; j < column_names.size(); ++j)
        if (column_names[j] == name) return j;
    std::string known;
    for (const auto& c : column_names) known += (known.empty() ? "" : ", ") + c;
    throw NameError("unknown column '" + std::string(name) + "' (available: " + known + ")");
}

std::vector<std::optional<double>> DataTable::column(std::string_view name) const {
    const std::size_t j = column_index(name);
    std::vector<std::optional<double>> out;
    out.reserve(rows());
    for (const auto& r : cells) out.push_back(r[j]);
    return out;
}

namespace {

std::vector<std::string> split_record(const std::string& line, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", row, fields.size() + 1);
    fields.push_back(std::move(cur));
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_cell(std::string_view text, std::size_t row, std::size_t col) {
    text = trim(text);
    if (text.empty()) return std::nullopt;
    if (text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ParseError("cannot parse '" + std::string(text) + "' as a number", row, col);
    return v;
}

bool needs_quotes(std::string_view s) {
    return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void write_field(std::ostream& out, std::string_view s) {
    if (!needs_quotes(s)) {
        out << s;
        return;
    }
    out << '"';
    for (char ch : s) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

}  // namespace

DataTable load_csv(std::istream& in) {
    DataTable t;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    std::set<std::string> labels;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_record(line, row);
        if (!header_seen) {
            if (fields.size() < 2) throw ParseError("header needs a label column and at least one data column", row, 1);
            t.label_header = std::string(trim(fields[0]));
            std::set<std::string> names;
            for (std::size_t j = 1; j < fields.size(); ++j) {
                std::string name(trim(fields[j]));
                if (name.empty()) throw ParseError("empty column name", row, j + 1);
                if (!names.insert(name).second) throw ParseError("duplicate column name '" + name + "'", row, j + 1);
                t.column_names.push_back(std::move(name));
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != t.column_names.size() + 1) {
            throw ParseError("expected " + std::to_string(t.column_names.size() + 1) + " fields, found " +
                                 std::to_string(fields.size()),
                             row, std::min(fields.size(), t.column_names.size() + 1) + 1);
        }
        std::string label(trim(fields[0]));
        if (label.empty()) throw ParseError("empty row label", row, 1);
        if (!labels.insert(label).second) throw ParseError("duplicate row label '" + label + "'", row, 1);
        std::vector<std::optional<double>> cells;
        for (std::size_t j = 1; j < fields.size(); ++j) cells.push_back(parse_cell(fields[j], row, j + 1));
        t.row_labels.push_back(std::move(label));
        t.cells.push_back(std::move(cells));
    }
    if (!header_seen) throw DataError("CSV input is empty");
    return t;
}

DataTable load_csv_string(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_csv(in);
}

DataTable load_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open data file '" + path.string() + "'");
    return load_csv(in);
}

std::string format_double(double v) {
    if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const DataTable& table) {
    write_field(out, table.label_header);
    for (const auto& c : table.column_names) {
        out << ',';
        write_field(out, c);
    }
    out << '\n';
    for (std::size_t i = 0; i < table.rows(); ++i) {
        write_field(out, table.row_labels[i]);
        for (const auto& cell : table.cells[i]) {
            out << ',';
            if (cell) out << format_double(*cell);
        }
        out << '\n';
    }
}

std::string to_csv_string(const DataTable& table) {
    std::ostringstream out;
    write_csv(out, table);
    return out.str();
}

std::vector<double> transform_div100_log(std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0))
            throw DomainError("transform_div100_log: nonpositive value at index " + std::to_string(i));
        out[i] = std::log(x[i] / 100.0);
    }
    return out;
}

std::vector<double> apply_transform(Transform t, std::span<const double> x) {
    if (t == Transform::div100_log) return transform_div100_log(x);
    return {x.begin(), x.end()};
}

Transform TransformSpec::for_response(const std::string& name) const {
    auto it = overrides.find(name);
    return it == overrides.end() ? response : it->second;
}

Transform TransformSpec::for_predictor(const std::string& name) const {
    auto it = overrides.find(name);
    return it == overrides.end() ? predictors : it->second;
}

TransformSpec TransformSpec::none() {
    TransformSpec t;
    t.predictors = Transform::identity;
    return t;
}

DesignData build_design(const DataTable& table, const ModelSpec& spec, const TransformSpec& transforms) {
    spec.validate();
    const std::size_t yi = table.column_index(spec.response);
    std::vector<std::size_t> xi;
    for (const auto& p : spec.predictors) xi.push_back(table.column_index(p));

    std::vector<std::size_t> keep;
    DesignData d;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        bool complete = table.cells[r][yi].has_value();
        for (std::size_t j : xi) complete = complete && table.cells[r][j].has_value();
        if (complete) {
            keep.push_back(r);
        } else {
            d.dropped_labels.push_back(table.row_labels[r]);
        }
    }
    const std::size_t n = keep.size();
    const std::size_t k = xi.size();
    if (n < k + 2) {
        throw InsufficientDataError("only " + std::to_string(n) + " complete rows for " + std::to_string(k) +
                                    " predictors (need at least " + std::to_string(k + 2) + ")");
    }

    std::vector<double> y;
    for (std::size_t r : keep) y.push_back(*table.cells[r][yi]);
    d.y = apply_transform(transforms.for_response(spec.response), y);
    std::string outside;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(d.y[i] > 0.0 && d.y[i] < 1.0)) outside += (outside.empty() ? "" : ", ") + table.row_labels[keep[i]];
    }
    if (!outside.empty())
        throw DomainError("response '" + spec.response + "' outside (0,1) for: " + outside);

    d.x = Matrix(n, k + 1, 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> col;
        for (std::size_t r : keep) col.push_back(*table.cells[r][xi[j]]);
        std::vector<double> tc;
        try {
            tc = apply_transform(transforms.for_predictor(spec.predictors[j]), col);
        } catch (const DomainError& e) {
            throw DomainError("predictor '" + spec.predictors[j] + "': " + e.what());
        }
        for (std::size_t i = 0; i < n; ++i) d.x(i, j + 1) = tc[i];
    }
    for (std::size_t r : keep) d.row_labels.push_back(table.row_labels[r]);
    d.predictor_names = spec.predictors;
    return d;
}

std::vector<NamedColumn> select_columns(const DataTable& table, const std::vector<std::string>& names,
                                        bool listwise, const TransformSpec* transforms,
                                        std::vector<std::string>* kept_labels) {
    std::vector<std::size_t> idx;
    for (const auto& n : names) idx.push_back(table.column_index(n));
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        bool complete = true;
        for (std::size_t j : idx) complete = complete && table.cells[r][j].has_value();
        if (!listwise || complete) rows.push_back(r);
    }
    if (kept_labels) {
        kept_labels->clear();
        for (std::size_t r : rows) kept_labels->push_back(table.row_labels[r]);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<NamedColumn> out;
    for (std::size_t c = 0; c < idx.size(); ++c) {
        NamedColumn col{names[c], {}};
        for (std::size_t r : rows) {
            const auto& cell = table.cells[r][idx[c]];
            double v = cell ? *cell : nan;
            if (cell && transforms && transforms->for_predictor(names[c]) == Transform::div100_log) {
                if (!(v > 0.0)) throw DomainError("column '" + names[c] + "' has a nonpositive value");
                v = std::log(v / 100.0);
            }
            col.values.push_back(v);
        }
        out.push_back(std::move(col));
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace mburqr
