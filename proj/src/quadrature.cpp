#include "ppborrow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ppborrow {
namespace {

double softplus(double y) noexcept { return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y))); }

constexpr double kGridEdge = 1e-8;
constexpr double kGridKnot = 1e-2;
constexpr std::size_t kMinGridPoints = 16;

}  // namespace

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) throw DomainError("log_sum_exp of an empty list");
  const double max = *std::max_element(values.begin(), values.end());
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - max);
  return max + std::log(sum);
}

namespace detail {

TanhSinhNode tanh_sinh_node(double u) noexcept {
  const double s = std::numbers::pi * std::sinh(u);
  TanhSinhNode node{};
  node.x = 1.0 / (1.0 + std::exp(-s));
  node.one_minus_x = 1.0 / (1.0 + std::exp(s));
  node.log_weight = -softplus(-s) - softplus(s) + std::log(std::numbers::pi * std::cosh(u));
  return node;
}

}  // namespace detail

std::vector<double> make_alpha_grid(const GridSpec& spec) {
  if (spec.points < kMinGridPoints) throw DomainError("grid needs at least 16 points");
  const std::size_t geometric = spec.points / 8;
  const std::size_t uniform = spec.points - 2 * geometric;

  std::vector<double> left(geometric);
  const double log_lo = std::log(kGridEdge);
  const double log_span = std::log(kGridKnot) - log_lo;
  for (std::size_t i = 0; i < geometric; ++i) {
    left[i] = std::exp(log_lo + log_span * static_cast<double>(i) / static_cast<double>(geometric));
  }

  std::vector<double> grid;
  grid.reserve(spec.points);
  grid.insert(grid.end(), left.begin(), left.end());
  const double width = 1.0 - 2.0 * kGridKnot;
  for (std::size_t i = 0; i < uniform; ++i) {
    grid.push_back(kGridKnot + width * static_cast<double>(i) / static_cast<double>(uniform - 1));
  }
  for (auto it = left.rbegin(); it != left.rend(); ++it) grid.push_back(1.0 - *it);
  return grid;
}

namespace detail {

std::vector<double> adapted_grid(std::span<const double> pilot, std::span<const double> monitor,
                                      std::size_t points) {
  const auto base = make_alpha_grid(GridSpec{points, kDefaultTolerance});
  std::vector<double> out;
  out.reserve(points);
  for (std::size_t i = 0; i < base.size(); i += 2) out.push_back(base[i]);
  out.push_back(base.back());
  const std::size_t quantiles = points - out.size();
  for (std::size_t j = 0; j < quantiles; ++j) {
    const double prob = (static_cast<double>(j) + 0.5) / static_cast<double>(quantiles);
    out.push_back(trapezoid_quantile(pilot, monitor, prob));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

AlphaPosteriorGrid::AlphaPosteriorGrid(std::vector<double> alphas, std::vector<double> log_density, GridMeta meta)
    : alphas_(std::move(alphas)), log_density_(std::move(log_density)), meta_(std::move(meta)) {
  if (alphas_.size() != log_density_.size()) throw DomainError("grid alphas and densities differ in length");
  if (alphas_.size() < 2) throw DomainError("grid needs at least two points");
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    if (!(alphas_[i] > 0.0 && alphas_[i] < 1.0)) throw DomainError("grid alphas must lie in (0, 1)");
    if (i > 0 && !(alphas_[i] > alphas_[i - 1])) throw DomainError("grid alphas must be strictly increasing");
    if (std::isnan(log_density_[i]) || log_density_[i] == std::numeric_limits<double>::infinity()) {
      throw DomainError("grid log-density must be finite or -infinity");
    }
  }
}

std::vector<double> AlphaPosteriorGrid::density() const {
  std::vector<double> out(log_density_.size());
  std::transform(log_density_.begin(), log_density_.end(), out.begin(), [](double v) { return std::exp(v); });
  return out;
}

double AlphaPosteriorGrid::trapezoid_mass() const { return trapezoid(alphas_, density()); }

double trapezoid(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("trapezoid: length mismatch");
  double total = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) total += 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  return total;
}

double trapezoid_quantile(std::span<const double> xs, std::span<const double> density, double prob) {
  if (xs.size() != density.size() || xs.size() < 2) throw DomainError("trapezoid_quantile: bad grid");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile probability must lie in [0, 1]");
  const double total = trapezoid(xs, density);
  if (!(total > 0.0)) throw DomainError("trapezoid_quantile: density has no mass");
  const double target = prob * total;
  double cumulative = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double h = xs[i] - xs[i - 1];
    const double f0 = density[i - 1];
    const double f1 = density[i];
    const double piece = 0.5 * h * (f0 + f1);
    if (cumulative + piece >= target || i + 1 == xs.size()) {
      const double r = std::clamp(target - cumulative, 0.0, piece);
      const double slope = (f1 - f0) / h;
      // Solve f0 t + slope t^2 / 2 = r for t in [0, h].
      const double disc = std::max(f0 * f0 + 2.0 * slope * r, 0.0);
      const double denom = f0 + std::sqrt(disc);
      const double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
      return xs[i - 1] + std::clamp(t, 0.0, h);
    }
    cumulative += piece;
  }
  return xs.back();
}

GridSummary grid_summaries(const AlphaPosteriorGrid& grid, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("interval level must lie in (0, 1)");
  const auto xs = grid.alphas();
  const auto dens = grid.density();
  const double mass = trapezoid(xs, dens);
  if (!(mass > 0.0)) throw DomainError("grid density has no mass");

  std::vector<double> weighted(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) weighted[i] = xs[i] * dens[i];
  const auto mode_it = std::max_element(dens.begin(), dens.end());

  GridSummary s{};
  s.mean = trapezoid(xs, weighted) / mass;
  s.mode = xs[static_cast<std::size_t>(mode_it - dens.begin())];
  s.median = trapezoid_quantile(xs, dens, 0.5);
  s.lower = trapezoid_quantile(xs, dens, 0.5 * (1.0 - level));
  s.upper = trapezoid_quantile(xs, dens, 0.5 * (1.0 + level));
  s.level = level;
  return s;
}

}  // namespace ppborrow
