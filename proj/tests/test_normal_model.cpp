#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "ppborrow/normal_model.hpp"
#include "ppborrow/specfun.hpp"

using namespace ppborrow;
using namespace ppborrow::normal;

namespace {

const NormalSummary kCurrent(0.15, 0.06);
const NormalSummary kHistorical(0.16, 0.06);

double sup_distance(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double max_relative_log_density_gap(const AlphaPosteriorGrid& grid, auto&& log_density) {
  double worst = 0.0;
  const auto alphas = grid.alphas();
  const auto logs = grid.log_density();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    // Relative error of the density is |exp(diff) - 1|.
    worst = std::max(worst, std::abs(std::expm1(logs[i] - log_density(alphas[i]))));
  }
  return worst;
}

std::vector<double> cdf(const AlphaPosteriorGrid& grid) {
  const auto xs = grid.alphas();
  const auto d = grid.density();
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) out[i] = out[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (d[i] + d[i - 1]);
  for (double& v : out) v /= out.back();
  return out;
}

std::size_t argmax(const AlphaPosteriorGrid& grid) {
  const auto logs = grid.log_density();
  return static_cast<std::size_t>(std::max_element(logs.begin(), logs.end()) - logs.begin());
}

double local_step(std::span<const double> xs, std::size_t i) {
  const double left = i > 0 ? xs[i] - xs[i - 1] : 0.0;
  const double right = i + 1 < xs.size() ? xs[i + 1] - xs[i] : 0.0;
  return std::max(left, right);
}

}  // namespace

TEST_CASE("npp_log_density") {
  const BetaParams flat(1, 1);
  // alpha = 1: plain historical normal plus the prior density at 1.
  CHECK(npp_log_density(0.2, 1.0, kHistorical, flat) ==
        doctest::Approx(std::log(oracle::normal_pdf(0.2, 0.16, 0.06))));
  CHECK(npp_log_density(0.2, 1.0, kHistorical, BetaParams(2, 1)) ==
        doctest::Approx(std::log(oracle::normal_pdf(0.2, 0.16, 0.06)) + std::log(2.0)));
  for (double alpha : {0.05, 0.5, 0.93}) {
    for (double delta : {0.01, 0.3}) {
      CHECK(npp_log_density(0.16 + delta, alpha, kHistorical, BetaParams(2, 3)) ==
            doctest::Approx(npp_log_density(0.16 - delta, alpha, kHistorical, BetaParams(2, 3))).epsilon(1e-12));
    }
  }
  CHECK(npp_log_density(0.16, 0.5, kHistorical, flat) ==
        doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi * 0.0072)).epsilon(1e-14));
  CHECK_THROWS_AS((void)npp_log_density(0.1, 0.0, kHistorical, flat), DomainError);
  CHECK_THROWS_AS((void)npp_log_density(0.1, 1.5, kHistorical, flat), DomainError);
}

TEST_CASE("alpha_log_posterior_unnorm") {
  const BetaParams flat(1, 1);
  const NormalSummary same(0.2, 0.1);
  CHECK(alpha_log_posterior_unnorm(1.0 - 1e-13, same, same, flat) ==
        doctest::Approx(std::log(oracle::normal_pdf(0.0, 0.0, 0.1 * std::sqrt(2.0)))).epsilon(1e-10));

  double previous = alpha_log_posterior_unnorm(0.4, NormalSummary(0.16, 0.06), kHistorical, flat);
  for (double gap : {0.01, 0.05, 0.2, 1.0}) {
    const double value = alpha_log_posterior_unnorm(0.4, NormalSummary(0.16 + gap, 0.06), kHistorical, flat);
    CHECK(value < previous);
    previous = value;
  }
  // 40-digit mpmath: ln N(0.15 | 0.16, 0.0036 + 0.0036 / 0.5).
  CHECK(alpha_log_posterior_unnorm(0.5, kCurrent, kHistorical, flat) ==
        doctest::Approx(1.340536409591679150115923566).epsilon(1e-13));
  CHECK_THROWS_AS((void)alpha_log_posterior_unnorm(1.0, kCurrent, kHistorical, flat), DomainError);
}

TEST_CASE("alpha_posterior: case study barely moves from the uniform prior") {
  const auto grid = alpha_posterior(kCurrent, kHistorical, BetaParams(1, 1));
  const auto xs = grid.alphas();
  const auto d = grid.density();
  std::vector<double> gap(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) gap[i] = std::abs(d[i] - 1.0);
  const double tv = 0.5 * trapezoid(xs, gap);
  CHECK(tv < 0.2);
  CHECK(grid.meta().model == "normal");
}

TEST_CASE("alpha_posterior equals the equal-estimate closed form") {
  for (double p : {0.5, 1.0, 2.0}) {
    for (double q : {0.5, 1.0, 2.0}) {
      for (double c : {0.1, 1.0, 10.0}) {
        const BetaParams prior(p, q);
        const NormalSummary hist(0.3, 0.2);
        const NormalSummary cur(0.3, 0.2 / std::sqrt(c));
        const auto grid = alpha_posterior(cur, hist, prior);
        const RelativeVariance rv = relative_variance(cur, hist);
        INFO("p=" << p << " q=" << q << " c=" << c);
        CHECK(max_relative_log_density_gap(grid, [&](double a) {
                return alpha_posterior_equal_estimates(a, rv, prior);
              }) <= 1e-8);
      }
    }
  }
}

TEST_CASE("alpha_posterior approaches the precise-current limit") {
  const NormalSummary hist(0.0, 0.1);
  const NormalSummary cur(0.3, 1e-6);
  const BetaParams prior(1, 1);
  const auto grid = alpha_posterior(cur, hist, prior);
  const auto limit = precise_current_grid(3.0, prior);
  CHECK(sup_distance(grid.density(), limit.density()) <= 1e-4);
}

TEST_CASE("alpha_posterior depends on the standard errors only through c") {
  for (double k : {0.1, 100.0}) {
    const NormalSummary a(0.4, 0.05), b(0.4, 0.08);
    const auto base = alpha_posterior(a, b, BetaParams(2, 1));
    const auto scaled =
        alpha_posterior(NormalSummary(0.4, 0.05 * k), NormalSummary(0.4, 0.08 * k), BetaParams(2, 1));
    CHECK(sup_distance(base.density(), scaled.density()) <= 1e-10);
  }
  // The closed form sees the same c from (sigma, sigma0) and (10 sigma, 10 sigma0).
  const auto c1 = relative_variance(NormalSummary(0, 0.03), NormalSummary(0, 0.07));
  const auto c2 = relative_variance(NormalSummary(0, 0.3), NormalSummary(0, 0.7));
  for (double alpha : {0.01, 0.5, 0.99}) {
    CHECK(alpha_posterior_equal_estimates(alpha, c1, BetaParams(1, 1)) ==
          doctest::Approx(alpha_posterior_equal_estimates(alpha, c2, BetaParams(1, 1))).epsilon(1e-14));
  }
}

TEST_CASE("alpha_posterior_equal_estimates") {
  SUBCASE("c = 1e6 is within 1e-3 of Be(p + 1/2, q)") {
    for (auto [p, q] : {std::pair{1.0, 1.0}, std::pair{0.5, 2.0}, std::pair{2.0, 0.5}}) {
      const BetaParams prior(p, q);
      const auto grid = equal_estimates_grid(RelativeVariance(1e6), prior);
      const auto limit = beta_grid(alpha_limit_beta(prior));
      // Compare where the limit density is bounded; a q < 1 limit diverges at 1.
      double worst = 0.0;
      const auto xs = grid.alphas();
      const auto g = grid.density();
      const auto l = limit.density();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        worst = std::max(worst, std::abs(g[i] - l[i]) / std::max(1.0, l[i]));
      }
      INFO("p=" << p << " q=" << q);
      CHECK(worst <= 1e-3);
    }
  }
  SUBCASE("c = 1, uniform prior, alpha -> 1") {
    // Closed form with the 2F1 value from mpmath: ln[2^(-1/2) 1.5 / 0.79925996303...].
    CHECK(alpha_posterior_equal_estimates(1.0 - 1e-13, RelativeVariance(1.0), BetaParams(1, 1)) ==
          doctest::Approx(0.2829605434737791360480).epsilon(1e-10));
  }
  SUBCASE("closed form integrates to one") {
    for (double c : {0.1, 1.0, 10.0}) {
      const BetaParams prior(1.0, 2.0);
      const double total = oracle::integrate_01([&](double a, double) {
        return std::exp(alpha_posterior_equal_estimates(a, RelativeVariance(c), prior));
      });
      CHECK(std::abs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("alpha_limit_beta") {
  CHECK(alpha_limit_beta(BetaParams(1, 1)) == BetaParams(1.5, 1));
  CHECK(alpha_limit_beta(BetaParams(0.5, 2)) == BetaParams(1, 2));
  const auto limit = alpha_limit_beta(BetaParams(3, 4));
  CHECK(limit.mean() == doctest::Approx(3.5 / 7.5));
}

TEST_CASE("equal-estimate posterior converges monotonically to the limit law") {
  for (double p : {0.5, 1.0, 2.0}) {
    const BetaParams prior(p, 1.0);
    const auto limit = beta_grid(alpha_limit_beta(prior));
    double previous = std::numeric_limits<double>::infinity();
    for (double c : {1.0, 10.0, 100.0, 1e4, 1e6}) {
      const double dist = sup_distance(equal_estimates_grid(RelativeVariance(c), prior).density(), limit.density());
      INFO("p=" << p << " c=" << c);
      CHECK(dist < previous);
      previous = dist;
    }
    CHECK(previous <= 1e-3);
  }
}

TEST_CASE("alpha_posterior_precise_current") {
  const BetaParams flat(1, 1);
  for (double alpha : {1e-6, 0.3, 0.999}) {
    CHECK(alpha_posterior_precise_current(alpha, 0.0, flat) ==
          doctest::Approx(specfun::beta_log_pdf(alpha, BetaParams(1.5, 1))).epsilon(1e-14));
  }
  // d = 3: the density is proportional to sqrt(alpha) exp(-9 alpha / 2), maximized at 1/9.
  const auto grid = precise_current_grid(3.0, flat);
  const std::size_t i = argmax(grid);
  CHECK(std::abs(grid.alphas()[i] - 1.0 / 9.0) <= local_step(grid.alphas(), i));
  CHECK(alpha_posterior_precise_current(0.9, 1.0, flat) > alpha_posterior_precise_current(0.9, 2.0, flat));
  CHECK_THROWS_AS((void)alpha_posterior_precise_current(0.5, -1.0, flat), DomainError);

  for (double d : {0.5, 2.0, 6.0}) {
    const double total = oracle::integrate_01(
        [&](double a, double) { return std::exp(alpha_posterior_precise_current(a, d, BetaParams(2, 3))); });
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("precise-current mode sits at min(1, 1/d^2)") {
  for (double d : {0.5, 1.0, 2.0, 3.0}) {
    const auto grid = precise_current_grid(d, BetaParams(1, 1));
    const std::size_t i = argmax(grid);
    INFO("d=" << d);
    const double target = std::min(grid.alphas().back(), 1.0 / (d * d));
    CHECK(std::abs(grid.alphas()[i] - target) <= local_step(grid.alphas(), i));
  }
}

TEST_CASE("larger conflict shifts the limit law to smaller alpha") {
  const std::vector<double> ds{0.0, 0.5, 1.0, 2.0, 3.0};
  for (std::size_t j = 1; j < ds.size(); ++j) {
    const auto lower = cdf(precise_current_grid(ds[j - 1], BetaParams(1, 1)));
    const auto higher = cdf(precise_current_grid(ds[j], BetaParams(1, 1)));
    for (std::size_t i = 0; i < lower.size(); ++i) CHECK(higher[i] >= lower[i] - 1e-12);
  }
}

TEST_CASE("alpha_posterior normalization") {
  for (double p : {0.5, 1.0, 2.0}) {
    for (double q : {0.5, 1.0, 2.0}) {
      for (double d : {0.0, 1.0, 3.0}) {
        for (double c : {0.1, 1.0, 10.0}) {
          const NormalSummary hist(0.0, 0.2);
          const NormalSummary cur(d * 0.2, 0.2 / std::sqrt(c));
          const BetaParams prior(p, q);
          const auto grid = alpha_posterior(cur, hist, prior);
          const double log_z = grid.meta().log_normalizer;
          const double total = oracle::integrate_01([&](double a, double s) {
            return std::exp(alpha_log_posterior_unnorm(a, s, cur, hist, prior) - log_z);
          });
          INFO("p=" << p << " q=" << q << " d=" << d << " c=" << c);
          CHECK(std::abs(total - 1.0) <= 1e-6);
          if (q >= 1.0) CHECK(std::abs(grid.trapezoid_mass() - 1.0) <= 1e-4);
        }
      }
    }
  }
}

TEST_CASE("theta_conditional_posterior and complete pooling") {
  const auto zero = theta_conditional_posterior(0.0, kCurrent, kHistorical);
  CHECK(zero == kCurrent);
  const NormalSummary a(0.1, 0.05), b(0.3, 0.05);
  const auto pooled = theta_conditional_posterior(1.0, a, b);
  CHECK(pooled.theta_hat() == doctest::Approx(0.2));
  CHECK(pooled.sigma() == doctest::Approx(0.05 / std::sqrt(2.0)));
  CHECK(complete_pooling_posterior(a, b) == pooled);
  CHECK_THROWS_AS((void)theta_conditional_posterior(-0.1, a, b), DomainError);

  const auto pooled_case = complete_pooling_posterior(kCurrent, kHistorical);
  CHECK(pooled_case.theta_hat() == doctest::Approx(0.155));
  CHECK(pooled_case.sigma() == doctest::Approx(0.06 / std::sqrt(2.0)));
  CHECK(std::abs(pooled_case.sigma() - 0.0424) < 5e-5);

  const auto vague = complete_pooling_posterior(kCurrent, NormalSummary(0.16, 1e6));
  CHECK(vague.theta_hat() == doctest::Approx(0.15).epsilon(1e-9));
  CHECK(vague.sigma() == doctest::Approx(0.06).epsilon(1e-9));

  const auto swapped = complete_pooling_posterior(NormalSummary(0.3, 0.2), NormalSummary(-0.1, 0.05));
  const auto original = complete_pooling_posterior(NormalSummary(-0.1, 0.05), NormalSummary(0.3, 0.2));
  CHECK(swapped.theta_hat() == doctest::Approx(original.theta_hat()));
  CHECK(swapped.sigma() == doctest::Approx(original.sigma()));
}

TEST_CASE("theta_marginal_posterior") {
  const BetaParams flat(1, 1);
  const auto thetas = default_theta_grid(kCurrent, kHistorical);

  SUBCASE("integrates to one") {
    const auto curve = theta_marginal_posterior(thetas, kCurrent, kHistorical, flat);
    CHECK(std::abs(trapezoid(curve.theta, curve.density) - 1.0) <= 1e-4);
  }

  SUBCASE("agrees with two-stage sampling") {
    const auto curve = theta_marginal_posterior(thetas, kCurrent, kHistorical, flat);
    // Draw alpha from the grid's trapezoid CDF, then average the conditional
    // normal densities (a Rao-Blackwellized smoother of the theta draws).
    const auto grid = alpha_posterior(kCurrent, kHistorical, flat);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> mc(thetas.size(), 0.0);
    constexpr int draws = 20000;
    for (int k = 0; k < draws; ++k) {
      const double alpha = trapezoid_quantile(grid.alphas(), grid.density(), unif(rng));
      const double prec = 1.0 / 0.0036 + alpha / 0.0036;
      const double mean = (0.15 / 0.0036 + alpha * 0.16 / 0.0036) / prec;
      for (std::size_t i = 0; i < thetas.size(); ++i) mc[i] += oracle::normal_pdf(thetas[i], mean, 1.0 / std::sqrt(prec));
    }
    for (double& v : mc) v /= draws;
    CHECK(sup_distance(curve.density, mc) <= 0.05);
  }

  SUBCASE("prior mass near alpha = 1 reproduces complete pooling") {
    const auto curve = theta_marginal_posterior(thetas, kCurrent, kHistorical, BetaParams(400, 1));
    const auto pooled = normal_curve(thetas, complete_pooling_posterior(kCurrent, kHistorical));
    CHECK(sup_distance(curve.density, pooled.density) <= 0.02);
  }

  SUBCASE("symmetric when the data sets coincide") {
    const NormalSummary same(0.2, 0.05);
    const auto grid = default_theta_grid(same, same, 201);
    const auto curve = theta_marginal_posterior(grid, same, same, BetaParams(2, 2));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(std::abs(curve.density[i] - curve.density[grid.size() - 1 - i]) <= 1e-10);
    }
  }

  SUBCASE("best-case curve sits between observed and pooled peaks") {
    const auto observed = theta_marginal_posterior(thetas, kCurrent, kHistorical, flat);
    const auto best = theta_best_case_posterior(thetas, kCurrent, kHistorical, flat);
    const auto pooled = normal_curve(thetas, complete_pooling_posterior(kCurrent, kHistorical));
    const double peak_obs = *std::max_element(observed.density.begin(), observed.density.end());
    const double peak_best = *std::max_element(best.density.begin(), best.density.end());
    const double peak_pooled = *std::max_element(pooled.density.begin(), pooled.density.end());
    CHECK(std::abs(trapezoid(best.theta, best.density) - 1.0) <= 1e-4);
    CHECK(peak_pooled > peak_best);
    CHECK(std::abs(peak_best - peak_obs) < 0.05 * peak_obs);
  }
}
