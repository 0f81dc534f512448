#pragma once

#include <cmath>
#include <cstdint>

#include "ppborrow/errors.hpp"

namespace ppborrow {

/// Natural log of a nonnegative quantity; -infinity encodes zero.
using LogValue = double;

/// A scalar estimate with its (known) standard error.
class NormalSummary {
 public:
  NormalSummary(double theta_hat, double sigma) : theta_hat_(theta_hat), sigma_(sigma) {
    if (!std::isfinite(theta_hat)) throw DomainError("theta_hat must be finite");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  }

  [[nodiscard]] double theta_hat() const noexcept { return theta_hat_; }
  [[nodiscard]] double sigma() const noexcept { return sigma_; }
  [[nodiscard]] double variance() const noexcept { return sigma_ * sigma_; }

  friend bool operator==(const NormalSummary&, const NormalSummary&) = default;

 private:
  double theta_hat_;
  double sigma_;
};

/// Parameters of a Be(p, q) distribution.
class BetaParams {
 public:
  BetaParams(double p, double q) : p_(p), q_(q) {
    if (!(p > 0.0) || !std::isfinite(p) || !(q > 0.0) || !std::isfinite(q)) {
      throw DomainError("beta parameters must be positive and finite");
    }
  }

  [[nodiscard]] double p() const noexcept { return p_; }
  [[nodiscard]] double q() const noexcept { return q_; }
  [[nodiscard]] double mean() const noexcept { return p_ / (p_ + q_); }

  friend bool operator==(const BetaParams&, const BetaParams&) = default;

 private:
  double p_;
  double q_;
};

/// Relative variance c: sigma0^2/sigma^2, n/n0, or a determinant ratio.
class RelativeVariance {
 public:
  explicit RelativeVariance(double c) : c_(c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("relative variance c must be positive and finite");
  }

  [[nodiscard]] double value() const noexcept { return c_; }

 private:
  double c_;
};

/// Largest trial count accepted anywhere; keeps log-gamma in its tested range.
inline constexpr std::int64_t kMaxCount = 100'000'000;

/// Success count x out of n trials.
class BinomialSummary {
 public:
  BinomialSummary(std::int64_t x, std::int64_t n) : x_(x), n_(n) {
    if (n < 1) throw DomainError("n must be a positive count");
    if (n > kMaxCount) throw DomainError("counts above 1e8 are not supported");
    if (x < 0 || x > n) throw DomainError("x must satisfy 0 <= x <= n");
  }

  [[nodiscard]] std::int64_t x() const noexcept { return x_; }
  [[nodiscard]] std::int64_t n() const noexcept { return n_; }
  [[nodiscard]] double proportion() const noexcept { return static_cast<double>(x_) / static_cast<double>(n_); }

  friend bool operator==(const BinomialSummary&, const BinomialSummary&) = default;

 private:
  std::int64_t x_;
  std::int64_t n_;
};

}  // namespace ppborrow
