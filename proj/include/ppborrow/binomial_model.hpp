#pragma once

// Normalized power prior for a binomial proportion with an initial Be(0, 0)
// prior on theta. The historical likelihood raised to alpha gives a
// Be(alpha x0, alpha (n0 - x0)) prior, so integrating theta out leaves a
// beta-binomial kernel in alpha.

#include <cstdint>

#include "ppborrow/quadrature.hpp"
#include "ppborrow/types.hpp"

namespace ppborrow::binomial {

/// ln[ Be(theta | alpha x0, alpha (n0 - x0)) Be(alpha | p, q) ].
/// Throws ImproperPriorError when x0 is 0 or n0.
[[nodiscard]] LogValue npp_binomial_log_density(double theta, double alpha, const BinomialSummary& hist,
                                                const BetaParams& prior);

/// ln[ BetaBin(x | n, alpha x0, alpha (n0 - x0)) Be(alpha | p, q) ].
[[nodiscard]] LogValue alpha_log_posterior_unnorm(double alpha, double one_minus_alpha, const BinomialSummary& cur,
                                                  const BinomialSummary& hist, const BetaParams& prior);

/// Exact marginal posterior of alpha on a grid.
[[nodiscard]] AlphaPosteriorGrid alpha_posterior_binomial(const BinomialSummary& cur, const BinomialSummary& hist,
                                                          const BetaParams& prior, const GridSpec& spec = {});

/// Stirling approximation of ln BetaBin(x | n, alpha x0, alpha (n0 - x0)):
///   ln C(n, x) + x ln t + (n - x) ln(1 - t) + (1/2) ln(alpha n0 / (n + alpha n0)),  t = x / n.
/// Accurate when x / n == x0 / n0 and alpha x0, alpha (n0 - x0) are not small;
/// elsewhere it is only a rough guide. Throws DomainError for x in {0, n}.
[[nodiscard]] LogValue stirling_log_pmf(std::int64_t x, std::int64_t n, double alpha, const BinomialSummary& hist);

/// The equal-rates approximation: the normal-model equal-estimate posterior
/// with c = n / n0.
[[nodiscard]] LogValue alpha_posterior_equal_rates_binomial(double alpha, std::int64_t cur_n, std::int64_t hist_n,
                                                            const BetaParams& prior);

/// Hypothetical current data mirroring `hist` at relative sample size c:
/// x = round(c x0), n = round(c n0).
[[nodiscard]] BinomialSummary mirrored_data(const BinomialSummary& hist, double c);

}  // namespace ppborrow::binomial
