#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mburqr/association.hpp"
#include "mburqr/dataio.hpp"
#include "mburqr/errors.hpp"
#include "oracles.hpp"

using namespace mburqr;

namespace {

std::vector<double> present(const std::string& name) {
    std::vector<double> out;
    for (const auto& c : oecd_fixture().column(name))
        if (c) out.push_back(*c);
    return out;
}

const TransformSpec kTransforms{};

// Pair counting straight from the tau-b definition.
double tau_b_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    double conc = 0, disc = 0, tie_x = 0, tie_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue;
            if (dx == 0) {
                tie_x += 1;
            } else if (dy == 0) {
                tie_y += 1;
            } else if ((dx > 0) == (dy > 0)) {
                conc += 1;
            } else {
                disc += 1;
            }
        }
    return (conc - disc) / std::sqrt((conc + disc + tie_x) * (conc + disc + tie_y));
}

Matrix columns_matrix(const std::vector<std::vector<double>>& cols) {
    Matrix m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i) m(i, j) = cols[j][i];
    return m;
}

std::vector<std::vector<double>> education_predictors() {
    const auto cols = select_columns(oecd_fixture(), {"education", "employment", "air", "life_satisfaction", "homicide"},
                                     true, &kTransforms);
    std::vector<std::vector<double>> out;
    for (std::size_t j = 1; j < cols.size(); ++j) out.push_back(cols[j].values);
    return out;
}

}  // namespace

TEST_CASE("describe examples") {
    const auto e = describe(present("employment"));
    CHECK(e.n == 41);
    CHECK(std::abs(e.mean - 67.6829) <= 5e-5);
    CHECK(std::abs(e.sd - 8.8188) <= 5e-5);
    CHECK(e.min == 39);
    CHECK(e.max == 80);
    CHECK(e.median == 70);
    CHECK(e.q25 == doctest::Approx(64.25));
    CHECK(e.q75 == doctest::Approx(74));

    const auto c = describe(std::vector<double>(5, 2.5));
    CHECK(c.sd == 0.0);
    CHECK(c.degenerate);
    CHECK(c.skewness == 0.0);
    CHECK(c.kurtosis == 0.0);

    const auto s = describe(std::vector<double>{1, 2, 3});
    CHECK(s.mean == 2.0);
    CHECK(s.sd == 1.0);
    CHECK(s.skewness == doctest::Approx(0.0));
    CHECK_THROWS_AS(describe(std::vector<double>{1.0}), DomainError);
}

TEST_CASE("describe quartiles use the midpoint plotting position") {
    const auto air = describe(present("air"));
    CHECK(air.q25 == doctest::Approx(8.175));
    CHECK(air.q75 == doctest::Approx(17.125));
    const std::vector<double> sorted{1, 2, 3, 4};
    CHECK(hazen_quantile(sorted, 0.25) == doctest::Approx(1.5));
    CHECK(hazen_quantile(sorted, 0.0) == 1.0);
    CHECK(hazen_quantile(sorted, 1.0) == 4.0);
}

TEST_CASE("describe is affine equivariant") {
    std::mt19937_64 gen(5);
    std::gamma_distribution<double> g(2.0, 1.0);
    std::vector<double> x(37);
    for (auto& v : x) v = g(gen);
    const double a = 3.7, b = -12.0;
    std::vector<double> y;
    for (double v : x) y.push_back(a * v + b);
    const auto dx = describe(x);
    const auto dy = describe(y);
    CHECK(dy.mean == doctest::Approx(a * dx.mean + b).epsilon(1e-12));
    CHECK(dy.median == doctest::Approx(a * dx.median + b).epsilon(1e-12));
    CHECK(dy.q25 == doctest::Approx(a * dx.q25 + b).epsilon(1e-12));
    CHECK(dy.q75 == doctest::Approx(a * dx.q75 + b).epsilon(1e-12));
    CHECK(dy.sd == doctest::Approx(a * dx.sd).epsilon(1e-12));
    CHECK(std::abs(dy.skewness - dx.skewness) <= 1e-10);
    CHECK(std::abs(dy.kurtosis - dx.kurtosis) <= 1e-10);
    CHECK(dx.min <= dx.q25);
    CHECK(dx.q25 <= dx.median);
    CHECK(dx.median <= dx.q75);
    CHECK(dx.q75 <= dx.max);
}

TEST_CASE("kendall_tau examples") {
    const auto cols = select_columns(oecd_fixture(), {"education", "employment"}, true);
    REQUIRE(cols[0].values.size() == 40);
    const auto k = kendall_tau(cols[0].values, cols[1].values);
    CHECK(std::abs(k.tau - 0.3184) <= 5e-4);
    CHECK(std::abs(k.p_value - 0.005) <= 5e-4);

    const std::vector<double> x{3.1, 0.2, 5.5, 1.7, 9.0, 4.4};
    CHECK(kendall_tau(x, x).tau == 1.0);
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> rev(sorted.rbegin(), sorted.rend());
    CHECK(kendall_tau(sorted, rev).tau == -1.0);
    CHECK_THROWS_AS(kendall_tau(x, std::vector<double>(6, 1.0)), UndefinedCorrelationError);
}

TEST_CASE("kendall_tau matches pair counting and the untied variance") {
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<int> coarse(0, 6);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> x(30), y(30);
        for (std::size_t i = 0; i < 30; ++i) {
            x[i] = coarse(gen);
            y[i] = x[i] + coarse(gen);
        }
        CHECK(kendall_tau(x, y).tau == doctest::Approx(tau_b_oracle(x, y)).epsilon(1e-14));

        for (std::size_t i = 0; i < 30; ++i) {
            x[i] = nd(gen);
            y[i] = x[i] + 2.0 * nd(gen);
        }
        const auto k = kendall_tau(x, y);
        const double n = 30;
        const double z = (std::abs(static_cast<double>(k.s)) - 1.0) / std::sqrt(n * (n - 1) * (2 * n + 5) / 18.0);
        CHECK(k.p_value == doctest::Approx(2.0 * (1.0 - oracle::phi_series(std::max(z, 0.0)))).epsilon(1e-10));
    }
}

TEST_CASE("kendall_tau is invariant under increasing transforms") {
    const auto cols = select_columns(oecd_fixture(), {"support", "homicide"}, true);
    const auto base = kendall_tau(cols[0].values, cols[1].values);
    std::vector<double> tx, ty;
    for (double v : cols[0].values) tx.push_back(std::exp(5.0 * v));
    for (double v : cols[1].values) ty.push_back(std::log(v + 1.0) * 3.0 - 7.0);
    const auto moved = kendall_tau(tx, ty);
    CHECK(moved.tau == base.tau);
    CHECK(moved.p_value == base.p_value);
    CHECK(moved.s == base.s);
}

TEST_CASE("kendall_matrix examples") {
    const auto water = kendall_matrix(select_columns(oecd_fixture(), {"water", "employment"}, false));
    CHECK(std::abs(water.tau(0, 1) - 0.5942) <= 5e-4);
    CHECK(water.p(0, 1) < 1e-4);

    const auto safe = kendall_matrix(select_columns(oecd_fixture(), {"safety", "air"}, false));
    CHECK(std::abs(safe.tau(0, 1) + 0.3333) <= 5e-4);
    CHECK(std::abs(safe.p(0, 1) - 0.0025) <= 5e-4);

    const std::vector<double> v{1, 5, 2, 8, 3};
    const auto same = kendall_matrix({{"a", v}, {"b", v}});
    CHECK(same.tau(0, 1) == 1.0);

    const auto flat = kendall_matrix({{"a", v}, {"c", std::vector<double>(5, 4.0)}});
    CHECK(flat.undefined[1]);
    CHECK(flat.undefined[2]);
    CHECK_THROWS_AS(kendall_matrix({{"a", v}}), DomainError);
}

TEST_CASE("kendall_matrix is symmetric with unit diagonal and pairwise-complete counts") {
    const auto cols = select_columns(oecd_fixture(),
                                     {"education", "employment", "air", "life_satisfaction", "homicide"}, false);
    const auto m = kendall_matrix(cols);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(m.tau(i, i) == 1.0);
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(m.tau(i, j) == m.tau(j, i));
            CHECK(m.p(i, j) == m.p(j, i));
            CHECK(std::abs(m.tau(i, j)) <= 1.0);
        }
    }
    CHECK(m.pair_n[0 * 5 + 1] == 40);
    CHECK(m.pair_n[1 * 5 + 2] == 41);
}

TEST_CASE("vif examples") {
    const auto v = vif(columns_matrix(education_predictors()));
    const double expected[] = {2.7441, 1.9916, 2.8607, 1.5120};
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(v[j] - expected[j]) <= 5e-4);

    // Orthogonal, centred columns.
    const Matrix orth{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}, {1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    for (double x : vif(orth)) CHECK(std::abs(x - 1.0) <= 1e-10);

    Matrix dup(6, 2);
    for (std::size_t i = 0; i < 6; ++i) dup(i, 0) = dup(i, 1) = std::sin(1.0 + i);
    for (double x : vif(dup)) CHECK(std::isinf(x));
}

TEST_CASE("vif equals the diagonal of the inverse correlation matrix") {
    const auto cols = education_predictors();
    const std::size_t k = cols.size();
    const double n = static_cast<double>(cols[0].size());
    Matrix corr(k, k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            const auto da = describe(cols[a]);
            const auto db = describe(cols[b]);
            double s = 0.0;
            for (std::size_t i = 0; i < cols[a].size(); ++i) s += (cols[a][i] - da.mean) * (cols[b][i] - db.mean);
            corr(a, b) = s / ((n - 1) * da.sd * db.sd);
        }
    const Matrix inv = mat_inverse(corr);
    const auto v = vif(columns_matrix(cols));
    for (std::size_t j = 0; j < k; ++j) {
        CHECK(v[j] == doctest::Approx(inv(j, j)).epsilon(1e-9));
        CHECK(v[j] >= 1.0);
    }
}

TEST_CASE("condition_indices examples") {
    const auto ci = condition_indices(columns_matrix(education_predictors()));
    const double expected[] = {3.3505, 2.9709, 1.9377, 1.0};
    for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(ci[j] - expected[j]) <= 5e-4);
    CHECK(ci.back() == 1.0);

    const Matrix orth{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (double x : condition_indices(orth)) CHECK(x == doctest::Approx(1.0));

    const auto safety = select_columns(oecd_fixture(), {"employment", "air"}, true, &kTransforms);
    const auto cs = condition_indices(columns_matrix({safety[0].values, safety[1].values}));
    CHECK(std::abs(cs[0] - 2.0437) <= 5e-4);
    CHECK(cs[1] == 1.0);

    Matrix flat(5, 2, 1.0);
    for (std::size_t i = 0; i < 5; ++i) flat(i, 1) = static_cast<double>(i);
    CHECK_THROWS_AS(condition_indices(flat), DomainError);
}
