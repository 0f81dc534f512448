#pragma once

// Two-arm trial counts to the summaries the models consume.

#include <cstdint>
#include <string>
#include <string_view>

#include "ppborrow/types.hpp"

namespace ppborrow::ingest {

/// Events and sizes of a two-arm trial. Arm A is the treatment of interest.
class TwoArmCounts {
 public:
  TwoArmCounts(std::int64_t events_a, std::int64_t n_a, std::int64_t events_b, std::int64_t n_b);

  [[nodiscard]] std::int64_t events_a() const noexcept { return events_a_; }
  [[nodiscard]] std::int64_t n_a() const noexcept { return n_a_; }
  [[nodiscard]] std::int64_t events_b() const noexcept { return events_b_; }
  [[nodiscard]] std::int64_t n_b() const noexcept { return n_b_; }

  /// Same trial with the arms exchanged.
  [[nodiscard]] TwoArmCounts swapped() const { return {events_b_, n_b_, events_a_, n_a_}; }

 private:
  std::int64_t events_a_;
  std::int64_t n_a_;
  std::int64_t events_b_;
  std::int64_t n_b_;
};

enum class Arm { A, B };

/// Log risk ratio of arm A versus arm B with its delta-method standard error
/// sqrt(1/x_a - 1/n_a + 1/x_b - 1/n_b). Throws ContinuityCorrectionRequired
/// for zero or full event counts.
[[nodiscard]] NormalSummary log_risk_ratio_summary(const TwoArmCounts& counts);

struct RiskRatioInterval {
  double rr;
  double lower;
  double upper;
};

/// exp(theta_hat) with the Wald interval exp(theta_hat -+ z sigma).
[[nodiscard]] RiskRatioInterval risk_ratio_ci(const NormalSummary& summary, double level = 0.95);

[[nodiscard]] BinomialSummary arm_summary(const TwoArmCounts& counts, Arm arm);

/// Standard normal quantile. Acklam's rational approximation refined by one
/// Halley step against std::erfc.
[[nodiscard]] double standard_normal_quantile(double p);

struct Study {
  std::string name;
  TwoArmCounts counts;
};

/// Parse `study,events_a,n_a,events_b,n_b`.
[[nodiscard]] Study parse_counts_row(std::string_view row);

/// Built-in trials (fidaxomicin vs vancomycin, intention to treat).
[[nodiscard]] Study cornely2012();  ///< current data
[[nodiscard]] Study louie2011();    ///< historical data
/// Look up a built-in trial by case-insensitive name; throws DomainError.
[[nodiscard]] Study preset(std::string_view name);

/// Log risk ratio summaries rounded to two decimals, the inputs of the
/// worked normal-model example.
[[nodiscard]] NormalSummary current_rounded_summary();     ///< (0.15, 0.06)
[[nodiscard]] NormalSummary historical_rounded_summary();  ///< (0.16, 0.06)

}  // namespace ppborrow::ingest
