#include <cmath>
#include <vector>

#include "doctest.h"
#include "mburqr/diagnostics.hpp"
#include "mburqr/errors.hpp"
#include "mburqr/model.hpp"
#include "mburqr/numerics.hpp"
#include "oracles.hpp"

using namespace mburqr;

namespace {

// Intercept-only logit fit whose median is 0.5, i.e. alpha^2 = 1 for every row.
FitResult unit_alpha_fit() {
    FitResult f;
    f.spec = oracle::spec("y", {});
    f.coefficient_names = {"B0"};
    f.beta_hat = {0.0};
    f.p = 1;
    return f;
}

DesignData intercept_design(std::vector<double> y) {
    DesignData d;
    d.x = Matrix(y.size(), 1, 1.0);
    d.y = std::move(y);
    return d;
}

}  // namespace

TEST_CASE("residuals examples") {
    const double y_cs1 = quantile(1.0 - std::exp(-1.0), MburParams(1.0));
    const auto r = residuals(unit_alpha_fit(), intercept_design({0.5, y_cs1, 1e-300}));
    CHECK(r.fitted_cdf[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.rq[0] == doctest::Approx(0.0));
    CHECK(r.fitted_cdf[1] == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(r.cs[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.fitted_cdf[2] == kCdfClip);
    CHECK(r.cs[2] > 0.0);
    CHECK(r.cs[2] < 1e-11);
    CHECK(r.clipped_rows == std::vector<std::size_t>{2});
}

TEST_CASE("residual definitions hold on a real fit") {
    const auto d = oracle::design("education", {"employment"});
    const auto f = fit(oracle::spec("education", {"employment"}), d);
    const auto r = residuals(f, d);
    REQUIRE(r.rq.size() == d.n());
    for (std::size_t i = 0; i < d.n(); ++i) {
        CHECK(r.rq[i] == std_normal_quantile(r.fitted_cdf[i]));
        CHECK(r.cs[i] == doctest::Approx(-std::log(1.0 - r.fitted_cdf[i])).epsilon(1e-12));
        CHECK(r.cs[i] >= 0.0);
    }
}

TEST_CASE("ks_test_normal examples") {
    const std::size_t n = 40;
    std::vector<double> grid(n), expo(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (i + 0.5) / n;
        grid[i] = std_normal_quantile(p);
        expo[i] = -std::log(1.0 - p);
    }
    const auto kn = ks_test_normal(grid);
    CHECK(kn.statistic == doctest::Approx(0.5 / n).epsilon(1e-10));
    CHECK(kn.p_value > 0.999);
    const auto ke = ks_test_exponential(expo);
    CHECK(ke.statistic == doctest::Approx(0.5 / n).epsilon(1e-10));

    const std::vector<double> fives(20, 5.0);
    CHECK(ks_test_normal(fives).p_value < 1e-6);
    CHECK_THROWS_AS(ks_test_exponential(std::vector<double>{1, 2, -0.1, 3, 4}), DomainError);
    CHECK_THROWS_AS(ks_test_normal(std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("education ~ employment residual diagnostics") {
    const auto d = oracle::design("education", {"employment"});
    const auto f = fit(oracle::spec("education", {"employment"}), d);
    const auto rep = diagnose(f, d);
    CHECK(std::abs(rep.ks_rq.p_value - 0.4557) <= 0.1);
    CHECK(std::abs(rep.ks_cs.p_value - 0.4557) <= 0.1);
    CHECK(std::abs(rep.ks_rq.statistic - rep.ks_cs.statistic) <= 1e-12);
    REQUIRE(rep.predictors.size() == 1);
    const auto& p = rep.predictors[0];
    CHECK(p.predictor == "employment");
    CHECK(p.rq_tau.tau == p.cs_tau.tau);
    CHECK(p.rq_tau.p_value == p.cs_tau.p_value);
    CHECK(std::abs(p.cs_homoscedasticity.p_value - 0.702) <= 0.02);
    CHECK(std::abs(p.cs_homoscedasticity.r_squared - 0.00389) <= 0.005);
    CHECK(std::abs(p.rq_homoscedasticity.p_value - 0.681) <= 0.02);
    CHECK(std::abs(p.rq_homoscedasticity.r_squared - 0.00449) <= 0.005);
}

TEST_CASE("KS statistics of RQ and CS residuals coincide on every fit") {
    for (const char* resp : {"education", "water", "support", "safety"})
        for (const char* pred : {"employment", "air", "homicide"})
            for (LinkKind k : kAllLinks) {
                const auto d = oracle::design(resp, {pred});
                const auto rep = diagnose(fit(oracle::spec(resp, {pred}, k), d), d);
                CHECK(std::abs(rep.ks_rq.statistic - rep.ks_cs.statistic) <= 1e-12);
                CHECK(rep.predictors[0].rq_tau.tau == rep.predictors[0].cs_tau.tau);
            }
}

TEST_CASE("residual_predictor_tau examples") {
    const std::vector<double> x{0.1, 0.4, 0.2, 0.9, 0.5, 0.7};
    CHECK(residual_predictor_tau(x, x).tau == doctest::Approx(1.0));
    CHECK_THROWS_AS(residual_predictor_tau(std::vector<double>(6, 1.0), x), UndefinedCorrelationError);
    CHECK_THROWS_AS(residual_predictor_tau(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3}), DomainError);
}

TEST_CASE("homoscedasticity_test examples") {
    const std::vector<double> x{0.1, 0.4, 0.2, 0.9, 0.5, 0.7};
    const auto c = homoscedasticity_test(std::vector<double>(6, 0.3), x, ResidualKind::cs);
    CHECK(c.p_value == 1.0);
    CHECK(c.r_squared == 0.0);
    CHECK(c.residual_kind == ResidualKind::cs);
    CHECK(to_string(ResidualKind::rq) == "rq");

    // Squared residuals exactly linear in x: perfect auxiliary fit.
    std::vector<double> r;
    for (double v : x) r.push_back(std::sqrt(1.0 + 2.0 * v));
    const auto lin = homoscedasticity_test(r, x, ResidualKind::rq);
    CHECK(lin.r_squared == doctest::Approx(1.0));
    CHECK(lin.p_value < 1e-6);
}

// Residuals are scored against the model that generated the data.
TEST_CASE("parametric bootstrap gives roughly uniform KS p-values") {
    const auto d = oracle::design("education", {"employment"});
    const auto s = oracle::spec("education", {"employment"});
    const auto f = fit(s, d);
    const int reps = 200;
    int below = 0;
    int mean_abs_bound_hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        DesignData sim = d;
        const auto u = sample(d.n(), MburParams(1.0), 1000 + rep);
        for (std::size_t i = 0; i < d.n(); ++i) {
            const double a2 = alpha_sq_from_phi(s.link, dot(d.x.row(i), f.beta_hat), s.level);
            // Reuse the alpha = 1 draw: y = u1^(a2) where u1 = c(U) is the unit-shape quantile.
            sim.y[i] = std::pow(u[i], a2);
        }
        const auto rep_diag = diagnose(f, sim);
        if (rep_diag.ks_rq.p_value < 0.05) ++below;
        double mean = 0.0;
        for (double v : rep_diag.residuals.rq) mean += v;
        mean /= static_cast<double>(d.n());
        if (std::abs(mean) > 4.0 / std::sqrt(static_cast<double>(d.n()))) mean_abs_bound_hits += 1;
        for (double v : rep_diag.residuals.cs) CHECK(v >= 0.0);
    }
    const double frac = static_cast<double>(below) / reps;
    CHECK(frac >= 0.01);
    CHECK(frac <= 0.12);
    CHECK(mean_abs_bound_hits == 0);
}
