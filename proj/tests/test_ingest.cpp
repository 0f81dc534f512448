#include <doctest.h>

#include <cmath>
#include <random>

#include "ppborrow/ingest.hpp"

using namespace ppborrow;
using namespace ppborrow::ingest;

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

TEST_CASE("TwoArmCounts validation") {
  CHECK_THROWS_AS(TwoArmCounts(5, 0, 1, 10), DomainError);
  CHECK_THROWS_AS(TwoArmCounts(11, 10, 1, 10), DomainError);
  CHECK_THROWS_AS(TwoArmCounts(-1, 10, 1, 10), DomainError);
  CHECK_THROWS_AS(TwoArmCounts(1, 200'000'000, 1, 10), DomainError);
  const TwoArmCounts c(1, 2, 3, 4);
  CHECK(c.swapped().events_a() == 3);
  CHECK(c.swapped().n_b() == 2);
}

TEST_CASE("log_risk_ratio_summary") {
  // scipy: ln[(193/270)/(163/265)] and the delta-method standard error.
  const auto cornely = log_risk_ratio_summary(cornely2012().counts);
  CHECK(cornely.theta_hat() == doctest::Approx(0.15024785508597074).epsilon(1e-13));
  CHECK(cornely.sigma() == doctest::Approx(0.061959889170723675).epsilon(1e-13));
  CHECK(std::round(cornely.theta_hat() * 1e4) / 1e4 == doctest::Approx(0.1502));
  CHECK(std::round(cornely.sigma() * 1e4) / 1e4 == doctest::Approx(0.0620));
  CHECK(round2(cornely.theta_hat()) == doctest::Approx(0.15));
  CHECK(round2(cornely.sigma()) == doctest::Approx(0.06));

  const auto louie = log_risk_ratio_summary(louie2011().counts);
  CHECK(louie.theta_hat() == doctest::Approx(0.15724213784969987).epsilon(1e-13));
  CHECK(louie.sigma() == doctest::Approx(0.05791407422281625).epsilon(1e-13));
  CHECK(round2(louie.theta_hat()) == doctest::Approx(0.16));
  CHECK(round2(louie.sigma()) == doctest::Approx(0.06));

  CHECK(log_risk_ratio_summary(TwoArmCounts(50, 100, 50, 100)).theta_hat() == 0.0);

  CHECK_THROWS_AS((void)log_risk_ratio_summary(TwoArmCounts(0, 10, 3, 10)), ContinuityCorrectionRequired);
  CHECK_THROWS_AS((void)log_risk_ratio_summary(TwoArmCounts(3, 10, 10, 10)), ContinuityCorrectionRequired);
}

TEST_CASE("swapping the arms negates the log risk ratio") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> size(2, 500);
  for (int i = 0; i < 200; ++i) {
    const int na = size(rng), nb = size(rng);
    const int ea = std::uniform_int_distribution<int>(1, na - 1)(rng);
    const int eb = std::uniform_int_distribution<int>(1, nb - 1)(rng);
    const TwoArmCounts c(ea, na, eb, nb);
    const auto s = log_risk_ratio_summary(c);
    const auto t = log_risk_ratio_summary(c.swapped());
    CHECK(s.theta_hat() == doctest::Approx(-t.theta_hat()).epsilon(1e-12));
    CHECK(s.sigma() == doctest::Approx(t.sigma()).epsilon(1e-14));
    const auto ci = risk_ratio_ci(s);
    CHECK(std::log(ci.rr) == doctest::Approx(s.theta_hat()).epsilon(1e-12));
    CHECK(ci.lower * ci.upper == doctest::Approx(ci.rr * ci.rr).epsilon(1e-12));
  }
}

TEST_CASE("risk_ratio_ci") {
  const auto cornely = risk_ratio_ci(log_risk_ratio_summary(cornely2012().counts));
  CHECK(round2(cornely.rr) == doctest::Approx(1.16));
  CHECK(cornely.lower == doctest::Approx(1.0292276883223208).epsilon(1e-12));
  CHECK(round2(cornely.lower) == doctest::Approx(1.03));
  CHECK(round2(cornely.upper) == doctest::Approx(1.31));

  const auto louie = risk_ratio_ci(log_risk_ratio_summary(louie2011().counts));
  CHECK(round2(louie.rr) == doctest::Approx(1.17));
  CHECK(round2(louie.lower) == doctest::Approx(1.04));
  CHECK(round2(louie.upper) == doctest::Approx(1.31));
  CHECK(louie.upper == doctest::Approx(1.3109494393008585).epsilon(1e-12));

  const auto degenerate = risk_ratio_ci(NormalSummary(0.0, 1e-300));
  CHECK(degenerate.rr == 1.0);
  CHECK(degenerate.lower == doctest::Approx(1.0));
  CHECK(degenerate.upper == doctest::Approx(1.0));

  const auto wide = risk_ratio_ci(NormalSummary(0.0, 1.0), 0.99);
  CHECK(std::log(wide.upper) == doctest::Approx(2.5758293035489004).epsilon(1e-13));
  CHECK_THROWS_AS((void)risk_ratio_ci(NormalSummary(0.0, 1.0), 1.0), DomainError);
}

TEST_CASE("standard_normal_quantile") {
  // scipy.stats.norm.ppf.
  CHECK(standard_normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(standard_normal_quantile(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-14));
  CHECK(standard_normal_quantile(0.9) == doctest::Approx(1.2815515655446004).epsilon(1e-14));
  CHECK(standard_normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-13));
  CHECK(standard_normal_quantile(1.0 - 1e-12) == doctest::Approx(7.0344869100478356).epsilon(1e-6));
  CHECK(standard_normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const double z = standard_normal_quantile(p);
    CHECK(0.5 * std::erfc(-z / std::sqrt(2.0)) == doctest::Approx(p).epsilon(1e-14));
  }
  CHECK_THROWS_AS((void)standard_normal_quantile(0.0), DomainError);
  CHECK_THROWS_AS((void)standard_normal_quantile(1.0), DomainError);
}

TEST_CASE("arm_summary") {
  const auto counts = cornely2012().counts;
  CHECK(arm_summary(counts, Arm::A) == BinomialSummary(193, 270));
  CHECK(arm_summary(counts, Arm::B) == BinomialSummary(163, 265));
  CHECK(arm_summary(louie2011().counts, Arm::A) == BinomialSummary(214, 302));
}

TEST_CASE("parse_counts_row and presets") {
  const auto s = parse_counts_row("trial x, 12, 40 ,7,41");
  CHECK(s.name == "trial x");
  CHECK(s.counts.events_a() == 12);
  CHECK(s.counts.n_a() == 40);
  CHECK(s.counts.events_b() == 7);
  CHECK(s.counts.n_b() == 41);
  CHECK_THROWS_AS((void)parse_counts_row("a,1,2,3"), DomainError);
  CHECK_THROWS_AS((void)parse_counts_row("a,1,2,x,4"), DomainError);
  CHECK_THROWS_AS((void)parse_counts_row("a,1.5,2,3,4"), DomainError);
  CHECK_THROWS_AS((void)parse_counts_row("a,5,2,3,4"), DomainError);

  CHECK(preset("CORNELY").counts.n_a() == 270);
  CHECK(preset("louie").counts.events_b() == 198);
  CHECK_THROWS_AS((void)preset("other"), DomainError);

  CHECK(current_rounded_summary() == NormalSummary(0.15, 0.06));
  CHECK(historical_rounded_summary() == NormalSummary(0.16, 0.06));
}
