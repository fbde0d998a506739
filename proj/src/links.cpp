#include "mburqr/links.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mburqr/errors.hpp"

namespace mburqr {

namespace {

constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kAboveZero = std::numeric_limits<double>::denorm_min();

void check_phi(double phi) {
    if (!std::isfinite(phi)) throw DomainError("link: linear predictor must be finite");
}

}  // namespace

std::string to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::logit: return "logit";
        case LinkKind::cloglog: return "cloglog";
        case LinkKind::loglog: return "loglog";
    }
    return "unknown";
}

LinkKind parse_link(std::string_view name) {
    for (LinkKind k : kAllLinks)
        if (name == to_string(k)) return k;
    throw DomainError("unknown link '" + std::string(name) + "' (expected logit, cloglog or loglog)");
}

double inv_link(LinkKind kind, double phi) {
    check_phi(phi);
    double m = 0.0;
    switch (kind) {
        case LinkKind::logit:
            m = phi >= 0.0 ? 1.0 / (1.0 + std::exp(-phi)) : std::exp(phi) / (1.0 + std::exp(phi));
            break;
        case LinkKind::cloglog: m = -std::expm1(-std::exp(phi)); break;
        case LinkKind::loglog: m = std::exp(-std::exp(phi)); break;
    }
    return std::clamp(m, kAboveZero, kBelowOne);
}

double link(LinkKind kind, double m) {
    if (!(m > 0.0 && m < 1.0)) throw DomainError("link: argument must lie in (0,1)");
    switch (kind) {
        case LinkKind::logit: return std::log(m) - std::log1p(-m);
        case LinkKind::cloglog: return std::log(-std::log1p(-m));
        case LinkKind::loglog: return std::log(-std::log(m));
    }
    return 0.0;
}

double log_inv_link(LinkKind kind, double phi) {
    switch (kind) {
        case LinkKind::logit:
            // -softplus(-phi)
            return -(std::max(-phi, 0.0) + std::log1p(std::exp(-std::fabs(phi))));
        case LinkKind::cloglog: {
            const double e = std::exp(phi);
            return phi < 0.0 ? std::log(-std::expm1(-e)) : std::log1p(-std::exp(-e));
        }
        case LinkKind::loglog: return -std::exp(phi);
    }
    return 0.0;
}

double alpha_sq_from_phi_unchecked(LinkKind kind, double phi, const QuantileLevel& level) noexcept {
    return log_inv_link(kind, phi) / level.ln_c;
}

double alpha_sq_from_phi(LinkKind kind, double phi, const QuantileLevel& level) {
    check_phi(phi);
    if (kind != LinkKind::logit && !std::isfinite(std::exp(phi)))
        throw OverflowError("alpha_sq_from_phi: exp(phi) overflows at phi = " + std::to_string(phi));
    const double a2 = alpha_sq_from_phi_unchecked(kind, phi, level);
    if (!(a2 > 0.0) || !std::isfinite(a2))
        throw OverflowError("alpha_sq_from_phi: shape leaves (0, inf) at phi = " + std::to_string(phi));
    return a2;
}

}  // namespace mburqr
