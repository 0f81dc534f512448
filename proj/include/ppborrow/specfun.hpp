#pragma once

// Scalar special functions used by every posterior formula. Densities and
// mass functions are returned on the log scale only; callers exponentiate.

#include <cstdint>

#include "ppborrow/types.hpp"

namespace ppborrow::specfun {

/// ln Gamma(x) for x > 0.
///
/// Stirling series for x >= 10, a Taylor expansion around 2 (with
/// zeta(k) - 1 coefficients) on [1.5, 2.5], and the recurrence
/// Gamma(x + 1) = x Gamma(x) in between. Relative error stays below 1e-13 on
/// [1e-3, 1e7], including next to the roots at 1 and 2.
[[nodiscard]] double log_gamma(double x);

/// ln B(x, y).
[[nodiscard]] double log_beta(double x, double y);

/// ln C(n, x).
[[nodiscard]] double log_choose(std::int64_t n, std::int64_t x);

/// Log density of Be(p, q) at alpha in (0, 1).
[[nodiscard]] LogValue beta_log_pdf(double alpha, const BetaParams& prior);

/// Same, with 1 - alpha supplied separately so that points within one ulp of
/// 1 keep their exact distance to the endpoint. Quadrature nodes use this.
[[nodiscard]] LogValue beta_log_pdf(double alpha, double one_minus_alpha, const BetaParams& prior);

/// Gauss hypergeometric 2F1(a, b, c; z) restricted to c > b > 0, a > 0, z <= 0.
/// Evaluated through the Pfaff transformation so the series argument
/// z / (z - 1) lies in [0, 1) and all terms are positive.
[[nodiscard]] double gauss_2f1_negz(double a, double b, double c, double z);
[[nodiscard]] double log_gauss_2f1_negz(double a, double b, double c, double z);

/// Kummer's confluent hypergeometric M(a, b, z) for b > a > 0, z <= 0, via
/// M(a, b, z) = e^z M(b - a, b, -z).
[[nodiscard]] double kummer_m(double a, double b, double z);
/// ln M(a, b, z); stays finite where e^z underflows.
[[nodiscard]] double log_kummer_m(double a, double b, double z);

/// ln of the Normal(mean, variance) density at x.
[[nodiscard]] LogValue normal_log_pdf(double x, double mean, double variance);

/// ln BetaBin(x | n, a, b).
[[nodiscard]] LogValue beta_binomial_log_pmf(std::int64_t x, std::int64_t n, double a, double b);

}  // namespace ppborrow::specfun
