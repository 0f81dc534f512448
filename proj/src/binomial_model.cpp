#include "ppborrow/binomial_model.hpp"

#include <cmath>

#include "ppborrow/normal_model.hpp"
#include "ppborrow/specfun.hpp"

namespace ppborrow::binomial {
namespace {

void require_proper(const BinomialSummary& hist) {
  if (hist.x() == 0 || hist.x() == hist.n()) {
    throw ImproperPriorError("historical data with x0 = 0 or x0 = n0 give an improper power prior under Be(0, 0)");
  }
}

}  // namespace

LogValue npp_binomial_log_density(double theta, double alpha, const BinomialSummary& hist, const BetaParams& prior) {
  require_proper(hist);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in the open interval (0, 1)");
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("theta must lie in the open interval (0, 1)");
  const auto x0 = static_cast<double>(hist.x());
  const auto n0 = static_cast<double>(hist.n());
  const BetaParams theta_prior(alpha * x0, alpha * (n0 - x0));
  return specfun::beta_log_pdf(theta, theta_prior) + specfun::beta_log_pdf(alpha, prior);
}

LogValue alpha_log_posterior_unnorm(double alpha, double one_minus_alpha, const BinomialSummary& cur,
                                    const BinomialSummary& hist, const BetaParams& prior) {
  require_proper(hist);
  const auto x0 = static_cast<double>(hist.x());
  const auto n0 = static_cast<double>(hist.n());
  return specfun::beta_binomial_log_pmf(cur.x(), cur.n(), alpha * x0, alpha * (n0 - x0)) +
         specfun::beta_log_pdf(alpha, one_minus_alpha, prior);
}

AlphaPosteriorGrid alpha_posterior_binomial(const BinomialSummary& cur, const BinomialSummary& hist,
                                            const BetaParams& prior, const GridSpec& spec) {
  require_proper(hist);
  GridMeta meta{"binomial",
                {{"x", static_cast<double>(cur.x())},
                 {"n", static_cast<double>(cur.n())},
                 {"x0", static_cast<double>(hist.x())},
                 {"n0", static_cast<double>(hist.n())},
                 {"prior_p", prior.p()},
                 {"prior_q", prior.q()}},
                0.0};
  return normalize_on_grid(
      [&](double a, double one_minus_a) { return alpha_log_posterior_unnorm(a, one_minus_a, cur, hist, prior); },
      spec, std::move(meta));
}

LogValue stirling_log_pmf(std::int64_t x, std::int64_t n, double alpha, const BinomialSummary& hist) {
  if (n < 1 || x <= 0 || x >= n) throw DomainError("Stirling approximation needs 0 < x < n");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  const auto xd = static_cast<double>(x);
  const auto nd = static_cast<double>(n);
  const double rate = xd / nd;
  const double alpha_n0 = alpha * static_cast<double>(hist.n());
  return specfun::log_choose(n, x) + xd * std::log(rate) + (nd - xd) * std::log1p(-rate) +
         0.5 * std::log(alpha_n0 / (nd + alpha_n0));
}

LogValue alpha_posterior_equal_rates_binomial(double alpha, std::int64_t cur_n, std::int64_t hist_n,
                                              const BetaParams& prior) {
  if (cur_n < 1 || hist_n < 1) throw DomainError("sample sizes must be positive");
  const RelativeVariance c(static_cast<double>(cur_n) / static_cast<double>(hist_n));
  return normal::alpha_posterior_equal_estimates(alpha, c, prior);
}

BinomialSummary mirrored_data(const BinomialSummary& hist, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("relative sample size c must be positive");
  const auto x = static_cast<std::int64_t>(std::llround(c * static_cast<double>(hist.x())));
  const auto n = static_cast<std::int64_t>(std::llround(c * static_cast<double>(hist.n())));
  return {x, n};
}

}  // namespace ppborrow::binomial
