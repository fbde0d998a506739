#pragma once

#include <array>
#include <string>
#include <string_view>

#include "mburqr/distribution.hpp"

namespace mburqr {

enum class LinkKind { logit, cloglog, loglog };

inline constexpr std::array<LinkKind, 3> kAllLinks{LinkKind::logit, LinkKind::cloglog,
                                                   LinkKind::loglog};

std::string to_string(LinkKind kind);
// Accepts "logit", "cloglog", "loglog"; throws DomainError otherwise.
LinkKind parse_link(std::string_view name);

double inv_link(LinkKind kind, double phi);
double link(LinkKind kind, double m);
// ln(inv_link(kind, phi)), evaluated without forming the median.
double log_inv_link(LinkKind kind, double phi);

// alpha^2 = ln(median) / ln(c). Throws OverflowError when exp(phi) overflows
// or the ratio leaves (0, inf).
double alpha_sq_from_phi(LinkKind kind, double phi, const QuantileLevel& level);

// Same formula, returning a non-finite or nonpositive value instead of throwing.
double alpha_sq_from_phi_unchecked(LinkKind kind, double phi, const QuantileLevel& level) noexcept;

}  // namespace mburqr
