#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "mburqr/dataio.hpp"

namespace fs = std::filesystem;
using mburqr::cli::run_cli;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "mburqr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mburqr_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::vector<double>> read_numeric_csv(const fs::path& p, std::vector<std::string>* header = nullptr) {
    std::istringstream in(slurp(p));
    std::string line;
    std::getline(in, line);
    if (header) {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header->push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::istringstream l(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(l, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("fit reproduces the education report and is deterministic") {
    const auto a = scratch("fit_a");
    const auto b = scratch("fit_b");
    const auto r1 = run({"fit", "--response", "education", "--predictors", "employment", "--link", "logit",
                         "--tau", "0.5", "--out-dir", a.string(), "--json"});
    const auto r2 = run({"fit", "--response", "education", "--predictors", "employment", "--link", "logit",
                         "--tau", "0.5", "--out-dir", b.string(), "--json"});
    REQUIRE(r1.code == 0);
    CHECK(r1.out == r2.out);
    for (const char* f : {"report.json", "residuals.csv", "qq.csv", "curve.csv"}) {
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    const auto j = nlohmann::json::parse(slurp(a / "report.json"));
    CHECK(j.dump().find("generated_at") == std::string::npos);
    CHECK(r1.out == slurp(a / "report.json"));
}

TEST_CASE("curve CSV is monotone and the quartile curves never cross") {
    const auto dir = scratch("curve");
    const auto r = run({"fit", "--response", "education", "--predictors", "employment", "--out", dir.string()});
    REQUIRE(r.code == 0);
    std::vector<std::string> header;
    const auto rows = read_numeric_csv(dir / "curve.csv", &header);
    CHECK(header == std::vector<std::string>{"x_transformed", "q25", "q50", "q75"});
    CHECK(rows.size() == 200);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i][1] < rows[i][2]);
        CHECK(rows[i][2] < rows[i][3]);
        if (i > 0) {
            CHECK(rows[i][0] > rows[i - 1][0]);
            CHECK(rows[i][2] > rows[i - 1][2]);
        }
    }
    std::vector<std::string> rh;
    read_numeric_csv(dir / "qq.csv", &rh);
    CHECK(rh == std::vector<std::string>{"theoretical", "empirical_rq", "empirical_cs"});
    const auto res = slurp(dir / "residuals.csv");
    CHECK(res.rfind("label,rq,cs,fitted_cdf,x_1\n", 0) == 0);
}

TEST_CASE("fit with several predictors writes one curve per predictor") {
    const auto dir = scratch("multi");
    const auto r = run({"fit", "--response", "safety", "--predictors", "employment,air", "--link", "cloglog",
                        "--out-dir", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(dir / "curve_employment.csv"));
    CHECK(fs::exists(dir / "curve_air.csv"));
}

TEST_CASE("fit water on satisfaction under cloglog") {
    const auto r = run({"fit", "--response", "water", "--predictors", "life_satisfaction", "--link", "cloglog", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["fit"]["log_likelihood"].get<double>() - 49.8381) <= 5e-3);
}

TEST_CASE("describe command") {
    const auto r = run({"describe", "--columns", "water", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const auto& row = j["columns"][0];
    CHECK(row["column"] == "water");
    CHECK(std::abs(row["mean"].get<double>() - 0.8332) <= 5e-5);
    CHECK(std::abs(row["sd"].get<double>() - 0.0972) <= 5e-5);

    const auto all = run({"describe", "--json"});
    CHECK(nlohmann::json::parse(all.out)["columns"].size() == 9);
    CHECK(run({"describe", "--columns", "gdp"}).code == mburqr::cli::kExitData);
}

TEST_CASE("ladder command") {
    const auto r = run({"ladder", "--response", "support", "--predictors", "air,life_expectancy,homicide", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    bool found = false;
    for (const auto& row : j["rows"]) {
        if (row["label"] != "Rx2") continue;
        found = true;
        CHECK(std::abs(row["log_likelihood"].get<double>() - 72.9349) <= 0.01);
        CHECK(std::abs(row["lrt_vs_full"]["statistic"].get<double>() - 1.4767) <= 0.02);
        CHECK(std::abs(row["lrt_vs_full"]["p_value"].get<double>() - 0.2243) <= 0.01);
    }
    CHECK(found);
    CHECK(run({"ladder", "--response", "support", "--predictors", ""}).code == mburqr::cli::kExitUsage);
}

TEST_CASE("corr command") {
    const auto r = run({"corr", "--study", "water", "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    const double expected[] = {3.9624, 3.2842, 2.9637, 1.9594, 1.0};
    const auto& ci = j["condition_indices"];
    REQUIRE(ci.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(ci[i].get<double>() - expected[i]) <= 5e-4);

    const auto two = run({"corr", "--columns", "water,employment", "--json"});
    REQUIRE(two.code == 0);
    const auto t = nlohmann::json::parse(two.out);
    CHECK(t["kendall"]["tau"].size() == 2);
    CHECK(t["vif"].size() == 2);
    CHECK(run({"corr", "--columns", "water"}).code == mburqr::cli::kExitUsage);
}

TEST_CASE("report command") {
    const auto dir = scratch("report");
    const auto r = run({"report", "safety", "--out-dir", dir.string()});
    REQUIRE(r.code == 0);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["attempted"].get<int>() >= 6);
    CHECK(manifest["failed"] == 0);
    for (const char* f : {"summary.csv", "summary.txt", "corr.json", "describe.json", "ladder_logit.json",
                          "fit_employment_logit.json", "fit_air_loglog.json", "fit_full_logit.json",
                          "curve_full_logit_air.csv", "residuals_employment_cloglog.csv", "qq_air_logit.csv"})
        CHECK(fs::exists(dir / f));

    const auto bad = run({"report", "nosuch", "--out-dir", dir.string()});
    CHECK(bad.code == mburqr::cli::kExitUsage);
    for (const char* name : {"education", "water", "support", "safety"}) CHECK(bad.err.find(name) != std::string::npos);
}

TEST_CASE("usage and data errors map to exit codes") {
    CHECK(run({}).code == mburqr::cli::kExitUsage);
    CHECK(run({"fit", "--response", "education", "--link", "probit"}).code == mburqr::cli::kExitUsage);
    CHECK(run({"fit", "--response", "education", "--tau", "1.5"}).code == mburqr::cli::kExitUsage);
    CHECK(run({"fit", "--response", "nosuch"}).code == mburqr::cli::kExitData);
    CHECK(run({"fit", "--response", "education", "--data", "/nonexistent.csv"}).code == mburqr::cli::kExitData);
    CHECK(run({"--help"}).code == mburqr::cli::kExitOk);

    const auto dir = scratch("bad_data");
    std::ofstream(dir / "bad.csv") << "id,y,x\na,0.5,abc\n";
    const auto r = run({"fit", "--response", "y", "--predictors", "x", "--data", (dir / "bad.csv").string()});
    CHECK(r.code == mburqr::cli::kExitData);
    CHECK(r.err.find("row 2") != std::string::npos);
}

TEST_CASE("data files round trip through the CLI") {
    const auto dir = scratch("roundtrip");
    std::ofstream(dir / "copy.csv") << mburqr::to_csv_string(mburqr::oecd_fixture());
    const auto a = run({"fit", "--response", "education", "--predictors", "employment", "--json"});
    const auto b = run({"fit", "--response", "education", "--predictors", "employment", "--json", "--data",
                        (dir / "copy.csv").string()});
    REQUIRE(b.code == 0);
    auto ja = nlohmann::json::parse(a.out);
    auto jb = nlohmann::json::parse(b.out);
    CHECK(ja["fit"] == jb["fit"]);
}

TEST_CASE("sample command is deterministic") {
    const auto a = run({"sample", "--alpha", "1.2", "--n", "5", "--seed", "42"});
    const auto b = run({"sample", "--alpha", "1.2", "--n", "5", "--seed", "42"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("y\n", 0) == 0);
    CHECK(run({"sample", "--alpha", "-1"}).code == mburqr::cli::kExitUsage);
}
