#include "ppborrow/normal_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppborrow/specfun.hpp"

namespace ppborrow::normal {
namespace {

void require_open_unit(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in the open interval (0, 1)");
}

const double kUnderflowLog = std::log(std::numeric_limits<double>::denorm_min());

// Averages the alpha-conditional theta posteriors against exp(log_alpha_density).
template <typename LogAlphaDensity>
ThetaCurve theta_mixture(std::span<const double> theta_grid, const NormalSummary& cur, const NormalSummary& hist,
                         LogAlphaDensity&& log_alpha_density, double tol) {
  ThetaCurve curve;
  curve.theta.assign(theta_grid.begin(), theta_grid.end());
  curve.density.reserve(theta_grid.size());
  for (double theta : theta_grid) {
    auto integrand = [&](double a, double one_minus_a) {
      const auto post = theta_conditional_posterior(a, cur, hist);
      return specfun::normal_log_pdf(theta, post.theta_hat(), post.variance()) + log_alpha_density(a, one_minus_a);
    };
    try {
      curve.density.push_back(std::exp(log_integrate_01(integrand, tol, "theta marginal density")));
    } catch (const NumericalError& e) {
      // Far-tail nodes whose density underflows regardless of convergence.
      if (!(e.last_estimate() < kUnderflowLog)) throw;
      curve.density.push_back(0.0);
    }
  }
  return curve;
}

}  // namespace

LogValue npp_log_density(double theta, double alpha, const NormalSummary& hist, const BetaParams& prior) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  double prior_term = 0.0;
  if (alpha < 1.0) {
    prior_term = specfun::beta_log_pdf(alpha, prior);
  } else if (prior.q() == 1.0) {
    prior_term = std::log(prior.p());  // Be(1 | p, 1) = p
  } else if (prior.q() > 1.0) {
    prior_term = -std::numeric_limits<double>::infinity();
  } else {
    throw DomainError("Be(p, q) density is unbounded at alpha = 1 when q < 1");
  }
  return specfun::normal_log_pdf(theta, hist.theta_hat(), hist.variance() / alpha) + prior_term;
}

LogValue alpha_log_posterior_unnorm(double alpha, double one_minus_alpha, const NormalSummary& cur,
                                    const NormalSummary& hist, const BetaParams& prior) {
  const double prior_term = specfun::beta_log_pdf(alpha, one_minus_alpha, prior);
  const double variance = cur.variance() + hist.variance() / alpha;
  return specfun::normal_log_pdf(cur.theta_hat(), hist.theta_hat(), variance) + prior_term;
}

LogValue alpha_log_posterior_unnorm(double alpha, const NormalSummary& cur, const NormalSummary& hist,
                                    const BetaParams& prior) {
  require_open_unit(alpha);
  return alpha_log_posterior_unnorm(alpha, 1.0 - alpha, cur, hist, prior);
}

AlphaPosteriorGrid alpha_posterior(const NormalSummary& cur, const NormalSummary& hist, const BetaParams& prior,
                                   const GridSpec& spec) {
  GridMeta meta{"normal",
                {{"theta_hat", cur.theta_hat()},
                 {"sigma", cur.sigma()},
                 {"theta0_hat", hist.theta_hat()},
                 {"sigma0", hist.sigma()},
                 {"prior_p", prior.p()},
                 {"prior_q", prior.q()}},
                0.0};
  return normalize_on_grid(
      [&](double a, double one_minus_a) { return alpha_log_posterior_unnorm(a, one_minus_a, cur, hist, prior); },
      spec, std::move(meta));
}

BetaParams alpha_limit_beta(const BetaParams& prior) { return {prior.p() + 0.5, prior.q()}; }

LogValue alpha_posterior_equal_estimates(double alpha, RelativeVariance c, const BetaParams& prior) {
  require_open_unit(alpha);
  const double p = prior.p();
  const double q = prior.q();
  const double log_2f1 = specfun::log_gauss_2f1_negz(0.5, p + 0.5, p + q + 0.5, -1.0 / c.value());
  return -0.5 * std::log1p(alpha / c.value()) + specfun::beta_log_pdf(alpha, alpha_limit_beta(prior)) - log_2f1;
}

LogValue alpha_posterior_precise_current(double alpha, double d, const BetaParams& prior) {
  require_open_unit(alpha);
  if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("standardized difference d must be >= 0");
  const double p = prior.p();
  const double q = prior.q();
  const double half_d2 = 0.5 * d * d;
  return -alpha * half_d2 + specfun::beta_log_pdf(alpha, alpha_limit_beta(prior)) -
         specfun::log_kummer_m(p + 0.5, p + q + 0.5, -half_d2);
}

RelativeVariance relative_variance(const NormalSummary& cur, const NormalSummary& hist) {
  return RelativeVariance(hist.variance() / cur.variance());
}

double standardized_difference(const NormalSummary& cur, const NormalSummary& hist) {
  return std::abs(cur.theta_hat() - hist.theta_hat()) / hist.sigma();
}

AlphaPosteriorGrid equal_estimates_grid(RelativeVariance c, const BetaParams& prior, const GridSpec& spec) {
  GridMeta meta{"equal-estimates", {{"c", c.value()}, {"prior_p", prior.p()}, {"prior_q", prior.q()}}, 0.0};
  return tabulate_on_grid([&](double a) { return alpha_posterior_equal_estimates(a, c, prior); }, spec,
                          std::move(meta));
}

AlphaPosteriorGrid precise_current_grid(double d, const BetaParams& prior, const GridSpec& spec) {
  GridMeta meta{"precise-current", {{"d", d}, {"prior_p", prior.p()}, {"prior_q", prior.q()}}, 0.0};
  return tabulate_on_grid([&](double a) { return alpha_posterior_precise_current(a, d, prior); }, spec,
                          std::move(meta));
}

AlphaPosteriorGrid beta_grid(const BetaParams& params, const GridSpec& spec) {
  GridMeta meta{"beta", {{"p", params.p()}, {"q", params.q()}}, 0.0};
  return tabulate_on_grid([&](double a) { return specfun::beta_log_pdf(a, params); }, spec, std::move(meta));
}

NormalSummary theta_conditional_posterior(double alpha, const NormalSummary& cur, const NormalSummary& hist) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (alpha == 0.0) return cur;
  const double cur_precision = 1.0 / cur.variance();
  const double hist_precision = alpha / hist.variance();
  const double variance = 1.0 / (cur_precision + hist_precision);
  const double mean = variance * (cur.theta_hat() * cur_precision + hist.theta_hat() * hist_precision);
  return {mean, std::sqrt(variance)};
}

NormalSummary complete_pooling_posterior(const NormalSummary& cur, const NormalSummary& hist) {
  return theta_conditional_posterior(1.0, cur, hist);
}

std::vector<double> default_theta_grid(const NormalSummary& cur, const NormalSummary& hist, std::size_t points) {
  if (points < 2) throw DomainError("theta grid needs at least two points");
  const double pooled = complete_pooling_posterior(cur, hist).theta_hat();
  const double lo = std::min(cur.theta_hat(), pooled) - 8.0 * cur.sigma();
  const double hi = std::max(cur.theta_hat(), pooled) + 8.0 * cur.sigma();
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

ThetaCurve theta_marginal_posterior(std::span<const double> theta_grid, const NormalSummary& cur,
                                    const NormalSummary& hist, const BetaParams& prior, double tol) {
  const double log_z = log_integrate_01(
      [&](double a, double one_minus_a) { return alpha_log_posterior_unnorm(a, one_minus_a, cur, hist, prior); },
      tol, "alpha posterior normalizing constant");
  if (!std::isfinite(log_z)) throw NumericalError("alpha posterior normalizing constant is not finite", log_z, 0.0);
  return theta_mixture(
      theta_grid, cur, hist,
      [&](double a, double one_minus_a) {
        return alpha_log_posterior_unnorm(a, one_minus_a, cur, hist, prior) - log_z;
      },
      tol);
}

ThetaCurve theta_best_case_posterior(std::span<const double> theta_grid, const NormalSummary& cur,
                                     const NormalSummary& hist, const BetaParams& prior, double tol) {
  const NormalSummary mirrored(cur.theta_hat(), hist.sigma());
  const BetaParams limit = alpha_limit_beta(prior);
  return theta_mixture(
      theta_grid, cur, mirrored,
      [&](double a, double one_minus_a) { return specfun::beta_log_pdf(a, one_minus_a, limit); }, tol);
}

ThetaCurve normal_curve(std::span<const double> theta_grid, const NormalSummary& summary) {
  ThetaCurve curve;
  curve.theta.assign(theta_grid.begin(), theta_grid.end());
  curve.density.reserve(theta_grid.size());
  for (double t : theta_grid) {
    curve.density.push_back(std::exp(specfun::normal_log_pdf(t, summary.theta_hat(), summary.variance())));
  }
  return curve;
}

}  // namespace ppborrow::normal
