#include <cmath>

#include "doctest.h"
#include "mburqr/distribution.hpp"
#include "mburqr/errors.hpp"
#include "mburqr/links.hpp"

using namespace mburqr;

TEST_CASE("inv_link examples") {
    CHECK(inv_link(LinkKind::logit, 0.0) == 0.5);
    CHECK(inv_link(LinkKind::cloglog, 0.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
    CHECK(inv_link(LinkKind::cloglog, 0.0) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(inv_link(LinkKind::loglog, 0.0) == doctest::Approx(0.367879).epsilon(1e-6));
    for (LinkKind k : kAllLinks)
        for (double phi : {-800.0, -40.0, 40.0, 800.0}) {
            const double m = inv_link(k, phi);
            CHECK(m > 0.0);
            CHECK(m < 1.0);
        }
}

TEST_CASE("link examples") {
    CHECK(link(LinkKind::logit, 0.5) == 0.0);
    // The 6-digit inputs carry up to 5e-7 rounding, which the link slope (about e) amplifies.
    CHECK(std::abs(link(LinkKind::cloglog, 0.632121)) <= 1.5e-6);
    CHECK(std::abs(link(LinkKind::loglog, 0.367879)) <= 1.5e-6);
    CHECK(std::abs(link(LinkKind::cloglog, 1.0 - std::exp(-1.0))) <= 1e-15);
    CHECK(std::abs(link(LinkKind::loglog, std::exp(-1.0))) <= 1e-15);
    for (LinkKind k : kAllLinks) {
        CHECK_THROWS_AS(link(k, 0.0), DomainError);
        CHECK_THROWS_AS(link(k, 1.0), DomainError);
    }
}

TEST_CASE("link and inv_link are inverse") {
    for (LinkKind k : kAllLinks) {
        // Near m = 1 the median itself cannot resolve phi, so only the well-conditioned side is checked.
        for (double phi = -30.0; phi <= 30.0; phi += 0.25) {
            const double m = inv_link(k, phi);
            if (m < 1e-300 || m > 1.0 - 1e-3) continue;
            CHECK(std::abs(link(k, m) - phi) <= 1e-10);
        }
        for (double t = 0.0; t <= 1.0; t += 0.001) {
            const double m = 1e-6 + t * (1.0 - 2e-6);
            CHECK(std::abs(inv_link(k, link(k, m)) - m) <= 1e-12);
        }
    }
}

TEST_CASE("alpha_sq_from_phi examples") {
    const QuantileLevel half;
    CHECK(alpha_sq_from_phi(LinkKind::logit, 0.0, half) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alpha_sq_from_phi(LinkKind::loglog, 0.0, half) == doctest::Approx(1.442695).epsilon(1e-6));
    CHECK(alpha_sq_from_phi(LinkKind::cloglog, 0.0, half) == doctest::Approx(0.661729).epsilon(1e-6));
    CHECK_THROWS_AS(alpha_sq_from_phi(LinkKind::loglog, 710.0, half), OverflowError);
    CHECK_THROWS_AS(alpha_sq_from_phi(LinkKind::cloglog, 710.0, half), OverflowError);
    CHECK_THROWS_AS(alpha_sq_from_phi(LinkKind::logit, 800.0, half), OverflowError);
    CHECK_FALSE(std::isfinite(alpha_sq_from_phi_unchecked(LinkKind::loglog, 800.0, half)));
    CHECK(alpha_sq_from_phi_unchecked(LinkKind::cloglog, 800.0, half) == 0.0);
}

TEST_CASE("alpha_sq_from_phi is positive") {
    for (double u : {0.05, 0.25, 0.5, 0.9}) {
        const auto level = QuantileLevel::make(u);
        // Upper limits are where the median rounds to 1 in double precision.
        for (LinkKind k : kAllLinks) {
            const double hi = k == LinkKind::logit ? 700.0 : (k == LinkKind::cloglog ? 6.5 : 700.0);
            for (double phi = -30.0; phi <= hi; phi += 0.5) CHECK(alpha_sq_from_phi(k, phi, level) > 0.0);
        }
    }
}

TEST_CASE("the linear predictor is the modeled quantile") {
    for (double u : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const auto level = QuantileLevel::make(u);
        for (LinkKind k : kAllLinks)
            for (double phi = -3.0; phi <= 3.0; phi += 0.25) {
                const double a2 = alpha_sq_from_phi(k, phi, level);
                CHECK(std::abs(quantile(u, MburParams::from_alpha_sq(a2)) - inv_link(k, phi)) <= 1e-10);
            }
    }
}

TEST_CASE("stable log-median forms agree with naive formulas") {
    for (double phi = -20.0; phi <= 20.0; phi += 0.1) {
        const double naive_logit = std::log(std::exp(phi) / (1.0 + std::exp(phi)));
        const double naive_loglog = std::log(std::exp(-std::exp(phi)));
        CHECK(std::abs(log_inv_link(LinkKind::logit, phi) - naive_logit) <= 1e-9);
        // Past phi = 6.5 the naive median exp(-e^phi) is subnormal and no longer a usable reference.
        if (phi <= 6.5)
            CHECK(std::abs(log_inv_link(LinkKind::loglog, phi) - naive_loglog) <= 1e-9 * std::max(1.0, std::abs(naive_loglog)));
        if (phi < 3.0) {
            const long double naive_cloglog = std::log(1.0L - std::exp(-std::exp(static_cast<long double>(phi))));
            CHECK(std::abs(log_inv_link(LinkKind::cloglog, phi) - static_cast<double>(naive_cloglog)) <= 1e-9);
        }
    }
    CHECK(std::isfinite(log_inv_link(LinkKind::logit, 800.0)));
    CHECK(std::isfinite(log_inv_link(LinkKind::cloglog, 40.0)));
    CHECK(log_inv_link(LinkKind::cloglog, 6.0) < 0.0);
}

TEST_CASE("link names round trip") {
    for (LinkKind k : kAllLinks) CHECK(parse_link(to_string(k)) == k);
    CHECK_THROWS_AS(parse_link("probit"), DomainError);
}
