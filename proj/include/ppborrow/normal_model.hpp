#pragma once

// Normalized power prior for a normal likelihood with known standard errors:
// the marginal posterior of the power parameter alpha, its two closed-form
// limits, and the marginal posterior of theta.

#include <span>
#include <vector>

#include "ppborrow/quadrature.hpp"
#include "ppborrow/types.hpp"

namespace ppborrow::normal {

/// ln[ Normal(theta | theta0_hat, sigma0^2 / alpha) Be(alpha | p, q) ].
[[nodiscard]] LogValue npp_log_density(double theta, double alpha, const NormalSummary& hist, const BetaParams& prior);

/// ln[ Normal(theta_hat | theta0_hat, sigma^2 + sigma0^2 / alpha) Be(alpha | p, q) ],
/// the unnormalized marginal posterior of alpha.
[[nodiscard]] LogValue alpha_log_posterior_unnorm(double alpha, const NormalSummary& cur, const NormalSummary& hist,
                                                  const BetaParams& prior);
/// Same, with 1 - alpha passed explicitly.
[[nodiscard]] LogValue alpha_log_posterior_unnorm(double alpha, double one_minus_alpha, const NormalSummary& cur,
                                                  const NormalSummary& hist, const BetaParams& prior);

/// Marginal posterior of alpha on a grid, normalized by quadrature.
[[nodiscard]] AlphaPosteriorGrid alpha_posterior(const NormalSummary& cur, const NormalSummary& hist,
                                                 const BetaParams& prior, const GridSpec& spec = {});

/// Closed-form log-density of alpha when theta_hat == theta0_hat:
///   (alpha/c + 1)^(-1/2) Be(alpha | p + 1/2, q) / 2F1(1/2, p + 1/2, p + q + 1/2; -1/c).
/// Depends on the standard errors only through c = sigma0^2 / sigma^2.
[[nodiscard]] LogValue alpha_posterior_equal_estimates(double alpha, RelativeVariance c, const BetaParams& prior);

/// Limit of the equal-estimate posterior as c -> infinity: Be(p + 1/2, q).
[[nodiscard]] BetaParams alpha_limit_beta(const BetaParams& prior);

/// Closed-form log-density of alpha in the limit sigma -> 0, with
/// d = |theta_hat - theta0_hat| / sigma0:
///   exp(-alpha d^2 / 2) Be(alpha | p + 1/2, q) / M(p + 1/2, p + q + 1/2, -d^2 / 2).
[[nodiscard]] LogValue alpha_posterior_precise_current(double alpha, double d, const BetaParams& prior);

[[nodiscard]] RelativeVariance relative_variance(const NormalSummary& cur, const NormalSummary& hist);
/// |theta_hat - theta0_hat| / sigma0.
[[nodiscard]] double standardized_difference(const NormalSummary& cur, const NormalSummary& hist);

[[nodiscard]] AlphaPosteriorGrid equal_estimates_grid(RelativeVariance c, const BetaParams& prior,
                                                      const GridSpec& spec = {});
[[nodiscard]] AlphaPosteriorGrid precise_current_grid(double d, const BetaParams& prior, const GridSpec& spec = {});
[[nodiscard]] AlphaPosteriorGrid beta_grid(const BetaParams& params, const GridSpec& spec = {});

/// Posterior of theta for fixed alpha in [0, 1]: precision-weighted pooling
/// of the current estimate with the alpha-discounted historical one.
[[nodiscard]] NormalSummary theta_conditional_posterior(double alpha, const NormalSummary& cur,
                                                        const NormalSummary& hist);

/// Posterior of theta with both data sets pooled (alpha = 1).
[[nodiscard]] NormalSummary complete_pooling_posterior(const NormalSummary& cur, const NormalSummary& hist);

struct ThetaCurve {
  std::vector<double> theta;
  std::vector<double> density;
};

/// Uniform theta grid wide enough to hold every conditional posterior. Their
/// means run from theta_hat (alpha = 0) to the pooled mean (alpha = 1) and
/// their standard deviations are at most sigma, so the grid spans
/// min(theta_hat, pooled) - 8 sigma to max(theta_hat, pooled) + 8 sigma.
[[nodiscard]] std::vector<double> default_theta_grid(const NormalSummary& cur, const NormalSummary& hist,
                                                     std::size_t points = 512);

/// Marginal posterior density of theta: the alpha-conditional normal
/// posteriors averaged over the marginal posterior of alpha.
[[nodiscard]] ThetaCurve theta_marginal_posterior(std::span<const double> theta_grid, const NormalSummary& cur,
                                                  const NormalSummary& hist, const BetaParams& prior,
                                                  double tol = kDefaultTolerance);

/// Best-case theta posterior: the historical estimate is set equal to the
/// current one and alpha follows its limiting Be(p + 1/2, q) law; both
/// observed standard errors are kept.
[[nodiscard]] ThetaCurve theta_best_case_posterior(std::span<const double> theta_grid, const NormalSummary& cur,
                                                   const NormalSummary& hist, const BetaParams& prior,
                                                   double tol = kDefaultTolerance);

/// Normal density of a summary on a theta grid.
[[nodiscard]] ThetaCurve normal_curve(std::span<const double> theta_grid, const NormalSummary& summary);

}  // namespace ppborrow::normal
