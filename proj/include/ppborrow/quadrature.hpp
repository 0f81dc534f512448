#pragma once

// Integration over (0, 1) of log-space integrands and the alpha-grid carrier.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ppborrow/errors.hpp"
#include "ppborrow/types.hpp"

namespace ppborrow {

/// ln(sum_i exp(v_i)), overflow safe. Throws DomainError on an empty list.
[[nodiscard]] double log_sum_exp(std::span<const double> values);

/// Streaming log-sum-exp accumulator; the result depends on insertion order
/// only through floating-point rounding.
class LogSumAccumulator {
 public:
  void add(double log_term) noexcept {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term <= max_) {
      scaled_sum_ += std::exp(log_term - max_);
    } else {
      scaled_sum_ = scaled_sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }

  [[nodiscard]] double value() const noexcept {
    if (scaled_sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(scaled_sum_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_sum_ = 0.0;
};

struct QuadratureResult {
  double log_value;       ///< ln of the integral
  double relative_error;  ///< |I_L / I_{L-1} - 1| at the final level
  int levels;             ///< number of step halvings used
  std::size_t evaluations;
};

namespace detail {

/// One tanh-sinh node mapped to (0, 1): x = logistic(pi sinh u).
struct TanhSinhNode {
  double x;
  double one_minus_x;
  double log_weight;  ///< ln dx/du
};

[[nodiscard]] TanhSinhNode tanh_sinh_node(double u) noexcept;

inline constexpr double kTanhSinhHalfWidth = 6.0;
inline constexpr double kTanhSinhInitialStep = 0.5;
inline constexpr int kTanhSinhMaxLevel = 12;
inline constexpr int kTanhSinhMinLevel = 3;

template <typename F>
double evaluate_log_integrand(F& log_f, const TanhSinhNode& node) {
  if constexpr (std::invocable<F&, double, double>) {
    if (!(node.x > 0.0) || !(node.one_minus_x > 0.0)) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(log_f(node.x, node.one_minus_x));
  } else {
    if (!(node.x > 0.0) || !(node.x < 1.0)) return -std::numeric_limits<double>::infinity();
    return static_cast<double>(log_f(node.x));
  }
}

}  // namespace detail

/// ln of the integral over (0, 1) of exp(log_f(t)), by double-exponential
/// (tanh-sinh) quadrature with step halving until successive levels agree to
/// `tol` relative. Integrable endpoint singularities need no special casing.
///
/// `log_f` may be callable as log_f(t) or as log_f(t, 1 - t); the second form
/// receives an exact complement for nodes that round to 1.
///
/// Throws NumericalError (with the last estimate and difference) when 12
/// halvings do not reach `tol`, or when the integrand produces NaN.
/// An integrand that is -infinity everywhere yields -infinity.
template <typename F>
[[nodiscard]] QuadratureResult log_integrate_01_detailed(F&& log_f, double tol, const std::string& what = "integral") {
  if (!(tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
  using detail::kTanhSinhHalfWidth;
  double step = detail::kTanhSinhInitialStep;
  LogSumAccumulator acc;
  std::size_t evaluations = 0;

  auto add_node = [&](double u) {
    const auto node = detail::tanh_sinh_node(u);
    const double lf = detail::evaluate_log_integrand(log_f, node);
    ++evaluations;
    if (std::isnan(lf)) throw NumericalError(what + ": integrand returned NaN at t=" + format_g(node.x), std::nan(""), std::nan(""));
    if (lf == std::numeric_limits<double>::infinity()) {
      throw NumericalError(what + ": integrand is infinite at t=" + format_g(node.x), std::nan(""), std::nan(""));
    }
    acc.add(lf + node.log_weight);
  };

  // Level 0: all multiples of the initial step.
  const int half_count = static_cast<int>(kTanhSinhHalfWidth / step);
  for (int k = -half_count; k <= half_count; ++k) add_node(k * step);
  double previous = std::log(step) + acc.value();

  double difference = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= detail::kTanhSinhMaxLevel; ++level) {
    step /= 2.0;
    const int count = static_cast<int>(kTanhSinhHalfWidth / step);
    for (int k = -count + 1; k <= count; k += 2) add_node(k * step);
    const double current = std::log(step) + acc.value();
    if (current == -std::numeric_limits<double>::infinity() && previous == current) {
      difference = 0.0;
    } else {
      difference = std::abs(std::expm1(current - previous));
    }
    previous = current;
    if (level >= detail::kTanhSinhMinLevel && difference <= tol) {
      return {current, difference, level, evaluations};
    }
  }
  throw NumericalError(what + ": tanh-sinh quadrature did not reach tolerance " + format_g(tol) +
                           " after " + std::to_string(detail::kTanhSinhMaxLevel) + " halvings",
                       previous, difference);
}

template <typename F>
[[nodiscard]] double log_integrate_01(F&& log_f, double tol, const std::string& what = "integral") {
  return log_integrate_01_detailed(std::forward<F>(log_f), tol, what).log_value;
}

/// Default normalizer tolerance.
inline constexpr double kDefaultTolerance = 1e-10;

/// How an alpha grid is laid out. Defaults: 512 points, nodes from 1e-8 to
/// 1 - 1e-8, geometric spacing near both endpoints and uniform in the middle.
struct GridSpec {
  std::size_t points = 512;
  double tol = kDefaultTolerance;
};

/// Ascending alpha values strictly inside (0, 1).
[[nodiscard]] std::vector<double> make_alpha_grid(const GridSpec& spec);

/// Provenance of a grid: which model, prior, and inputs produced it.
struct GridMeta {
  std::string model;
  std::vector<std::pair<std::string, double>> inputs;
  double log_normalizer = 0.0;
};

/// Normalized log-density of alpha sampled on a grid over (0, 1).
class AlphaPosteriorGrid {
 public:
  AlphaPosteriorGrid(std::vector<double> alphas, std::vector<double> log_density, GridMeta meta);

  [[nodiscard]] std::span<const double> alphas() const noexcept { return alphas_; }
  [[nodiscard]] std::span<const double> log_density() const noexcept { return log_density_; }
  [[nodiscard]] const GridMeta& meta() const noexcept { return meta_; }
  [[nodiscard]] std::size_t size() const noexcept { return alphas_.size(); }

  [[nodiscard]] std::vector<double> density() const;
  /// Trapezoid integral of the density over the grid nodes.
  [[nodiscard]] double trapezoid_mass() const;

 private:
  std::vector<double> alphas_;
  std::vector<double> log_density_;
  GridMeta meta_;
};

/// Point where the trapezoid CDF of (xs, density) reaches `prob`. The density
/// is treated as piecewise linear, so the CDF is inverted segment by segment
/// on its exact quadratic.
[[nodiscard]] double trapezoid_quantile(std::span<const double> xs, std::span<const double> density, double prob);

/// Trapezoid integral of ys over xs.
[[nodiscard]] double trapezoid(std::span<const double> xs, std::span<const double> ys);

namespace detail {

/// Grid trapezoid mass must match 1 this closely before the layout is adapted.
inline constexpr double kGridMassTolerance = 1e-5;

/// `points` nodes: every other node of the standard layout merged with
/// quantiles of pilot_density^(1/3) sampled on the finer `pilot` layout. The
/// cube root spreads nodes into the tails, where the trapezoid rule errs.
[[nodiscard]] std::vector<double> adapted_grid(std::span<const double> pilot,
                                                    std::span<const double> monitor, std::size_t points);

/// Sample a normalized log-density on the standard layout. When the trapezoid
/// mass misses 1, resample on a layout concentrated where the mass is.
template <typename Eval>
std::pair<std::vector<double>, std::vector<double>> sample_normalized(Eval&& eval, const GridSpec& spec) {
  const auto sample = [&](const std::vector<double>& xs) {
    std::vector<double> logs;
    logs.reserve(xs.size());
    for (double a : xs) logs.push_back(eval(a));
    return logs;
  };
  const auto mass_error = [](const std::vector<double>& xs, const std::vector<double>& logs) {
    std::vector<double> dens(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) dens[i] = std::exp(logs[i]);
    return std::abs(trapezoid(xs, dens) - 1.0);
  };

  auto alphas = make_alpha_grid(spec);
  auto logs = sample(alphas);
  const double base_error = mass_error(alphas, logs);
  if (!(base_error > kGridMassTolerance)) return {std::move(alphas), std::move(logs)};

  const auto pilot = make_alpha_grid(GridSpec{spec.points * 16, spec.tol});
  const auto pilot_logs = sample(pilot);
  std::vector<double> monitor(pilot_logs.size());
  for (std::size_t i = 0; i < pilot_logs.size(); ++i) monitor[i] = std::exp(pilot_logs[i] / 3.0);
  auto adapted = adapted_grid(pilot, monitor, spec.points);
  auto adapted_logs = sample(adapted);
  if (mass_error(adapted, adapted_logs) < base_error) return {std::move(adapted), std::move(adapted_logs)};
  return {std::move(alphas), std::move(logs)};
}

}  // namespace detail

/// Evaluate an unnormalized log-density on an alpha grid and normalize it by
/// the tanh-sinh integral of the continuous function. The standard layout is
/// used unless its trapezoid mass misses 1 by more than 1e-5, in which case
/// half the nodes are moved to quantiles of the posterior.
template <typename F>
[[nodiscard]] AlphaPosteriorGrid normalize_on_grid(F&& log_unnorm, const GridSpec& spec, GridMeta meta) {
  const double log_z = log_integrate_01(log_unnorm, spec.tol, meta.model + " normalizing constant");
  if (!std::isfinite(log_z)) {
    throw NumericalError(meta.model + " normalizing constant is not finite", log_z, std::nan(""));
  }
  auto [alphas, log_density] = detail::sample_normalized(
      [&](double a) {
        if constexpr (std::invocable<F&, double, double>) {
          return log_unnorm(a, 1.0 - a) - log_z;
        } else {
          return log_unnorm(a) - log_z;
        }
      },
      spec);
  meta.log_normalizer = log_z;
  return AlphaPosteriorGrid(std::move(alphas), std::move(log_density), std::move(meta));
}

/// Sample an already normalized log-density on an alpha grid, with the same
/// layout rule as normalize_on_grid.
template <typename F>
[[nodiscard]] AlphaPosteriorGrid tabulate_on_grid(F&& log_density_fn, const GridSpec& spec, GridMeta meta) {
  auto [alphas, log_density] = detail::sample_normalized(log_density_fn, spec);
  return AlphaPosteriorGrid(std::move(alphas), std::move(log_density), std::move(meta));
}

struct GridSummary {
  double mean;
  double mode;
  double median;
  double lower;  ///< equal-tailed interval bounds
  double upper;
  double level;
};

/// Mean, mode (grid argmax), median and equal-tailed interval, by trapezoid
/// integration of the grid.
[[nodiscard]] GridSummary grid_summaries(const AlphaPosteriorGrid& grid, double level = 0.95);

}  // namespace ppborrow
