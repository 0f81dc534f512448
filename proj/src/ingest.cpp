#include "ppborrow/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace ppborrow::ingest {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_count(std::string_view field) {
  field = trim(field);
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw DomainError("not an integer count: '" + std::string(field) + "'");
  }
  return value;
}

double acklam_quantile(double p) {
  constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                       1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                       6.680131188771972e+01,  -1.328068155288572e+01};
  constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                       -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                       3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) return -acklam_quantile(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

TwoArmCounts::TwoArmCounts(std::int64_t events_a, std::int64_t n_a, std::int64_t events_b, std::int64_t n_b)
    : events_a_(events_a), n_a_(n_a), events_b_(events_b), n_b_(n_b) {
  if (n_a < 1 || n_b < 1) throw DomainError("arm sizes must be positive");
  if (n_a > kMaxCount || n_b > kMaxCount) throw DomainError("counts above 1e8 are not supported");
  if (events_a < 0 || events_a > n_a || events_b < 0 || events_b > n_b) {
    throw DomainError("events must satisfy 0 <= events <= n in each arm");
  }
}

NormalSummary log_risk_ratio_summary(const TwoArmCounts& counts) {
  const auto boundary = [](std::int64_t x, std::int64_t n) { return x == 0 || x == n; };
  if (boundary(counts.events_a(), counts.n_a()) || boundary(counts.events_b(), counts.n_b())) {
    throw ContinuityCorrectionRequired("zero or full event counts: a continuity correction is required");
  }
  const auto xa = static_cast<double>(counts.events_a());
  const auto na = static_cast<double>(counts.n_a());
  const auto xb = static_cast<double>(counts.events_b());
  const auto nb = static_cast<double>(counts.n_b());
  const double theta_hat = std::log((xa / na) / (xb / nb));
  const double variance = 1.0 / xa - 1.0 / na + 1.0 / xb - 1.0 / nb;
  return {theta_hat, std::sqrt(variance)};
}

double standard_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal quantile needs p in (0, 1)");
  const double x = acklam_quantile(p);
  // One Halley step on Phi(x) - p.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

RiskRatioInterval risk_ratio_ci(const NormalSummary& summary, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
  const double z = standard_normal_quantile(0.5 * (1.0 + level));
  const double half_width = z * summary.sigma();
  return {std::exp(summary.theta_hat()), std::exp(summary.theta_hat() - half_width),
          std::exp(summary.theta_hat() + half_width)};
}

BinomialSummary arm_summary(const TwoArmCounts& counts, Arm arm) {
  return arm == Arm::A ? BinomialSummary(counts.events_a(), counts.n_a())
                       : BinomialSummary(counts.events_b(), counts.n_b());
}

Study parse_counts_row(std::string_view row) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = row.find(',', start);
    fields.push_back(row.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (fields.size() != 5) throw DomainError("expected 'study,events_a,n_a,events_b,n_b'");
  return {std::string(trim(fields[0])),
          TwoArmCounts(parse_count(fields[1]), parse_count(fields[2]), parse_count(fields[3]),
                       parse_count(fields[4]))};
}

Study cornely2012() { return {"Cornely2012", TwoArmCounts(193, 270, 163, 265)}; }
Study louie2011() { return {"Louie2011", TwoArmCounts(214, 302, 198, 327)}; }

Study preset(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "cornely" || lower == "cornely2012") return cornely2012();
  if (lower == "louie" || lower == "louie2011") return louie2011();
  throw DomainError("unknown study preset '" + std::string(name) + "'");
}

NormalSummary current_rounded_summary() { return {0.15, 0.06}; }
NormalSummary historical_rounded_summary() { return {0.16, 0.06}; }

}  // namespace ppborrow::ingest
