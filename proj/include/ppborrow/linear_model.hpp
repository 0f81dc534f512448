#pragma once

// Normal linear model y = X theta + eps, eps ~ N(0, sigma^2 I) with known
// sigma and a flat initial prior on theta. The normalized power prior is
// Nor_k(theta | theta0_hat, sigma^2 alpha^-1 (X0'X0)^-1) Be(alpha | p, q).

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <numbers>

#include "ppborrow/errors.hpp"
#include "ppborrow/quadrature.hpp"
#include "ppborrow/types.hpp"

namespace ppborrow::linear {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Design matrix, responses and the known error standard deviation.
template <typename Scalar = double>
class LinearData {
 public:
  LinearData(Matrix<Scalar> X, Vector<Scalar> y, Scalar sigma) : X_(std::move(X)), y_(std::move(y)), sigma_(sigma) {
    if (X_.cols() < 1) throw DomainError("design needs at least one column");
    if (X_.rows() < X_.cols()) throw DomainError("design needs at least as many rows as columns");
    if (y_.size() != X_.rows()) throw DomainError("response length must match design rows");
    if (!(sigma_ > Scalar(0)) || !std::isfinite(static_cast<double>(sigma_))) {
      throw DomainError("sigma must be positive");
    }
  }

  [[nodiscard]] const Matrix<Scalar>& X() const noexcept { return X_; }
  [[nodiscard]] const Vector<Scalar>& y() const noexcept { return y_; }
  [[nodiscard]] Scalar sigma() const noexcept { return sigma_; }

 private:
  Matrix<Scalar> X_;
  Vector<Scalar> y_;
  Scalar sigma_;
};

namespace detail {

/// Cholesky of an SPD matrix, rejecting numerically singular input.
template <typename Scalar>
Eigen::LLT<Matrix<Scalar>> checked_llt(const Matrix<Scalar>& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DomainError(std::string(what) + " must be square and nonempty");
  if (!m.isApprox(m.transpose())) throw SingularDesignError(std::string(what) + " must be symmetric");
  Eigen::LLT<Matrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) throw SingularDesignError(std::string(what) + " is not positive definite");
  const auto diag = llt.matrixLLT().diagonal().cwiseAbs2();
  if (!(diag.minCoeff() > Scalar(1e-13) * diag.maxCoeff())) {
    throw SingularDesignError(std::string(what) + " is numerically singular");
  }
  return llt;
}

template <typename Scalar>
Scalar log_det(const Eigen::LLT<Matrix<Scalar>>& llt) {
  return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

}  // namespace detail

/// Sufficient summary of one data set: the least-squares estimate and X'X.
template <typename Scalar = double>
class LinearSummary {
 public:
  LinearSummary(Vector<Scalar> theta_hat, Matrix<Scalar> xtx) : theta_hat_(std::move(theta_hat)), xtx_(std::move(xtx)) {
    if (xtx_.rows() != theta_hat_.size()) throw DomainError("X'X dimension must match theta_hat");
    (void)detail::checked_llt(xtx_, "X'X");
  }

  [[nodiscard]] const Vector<Scalar>& theta_hat() const noexcept { return theta_hat_; }
  [[nodiscard]] const Matrix<Scalar>& xtx() const noexcept { return xtx_; }
  [[nodiscard]] Eigen::Index dim() const noexcept { return theta_hat_.size(); }

 private:
  Vector<Scalar> theta_hat_;
  Matrix<Scalar> xtx_;
};

/// theta_hat solving (X'X) theta = X'y by Cholesky. Throws SingularDesignError
/// for rank-deficient X.
template <typename Scalar>
[[nodiscard]] LinearSummary<Scalar> ols_estimate(const LinearData<Scalar>& data) {
  Matrix<Scalar> xtx = data.X().transpose() * data.X();
  const auto llt = detail::checked_llt(xtx, "X'X");
  Vector<Scalar> theta = llt.solve(data.X().transpose() * data.y());
  return {std::move(theta), std::move(xtx)};
}

/// ln Nor_k(x | mean, cov) via Cholesky of cov.
template <typename DerivedX, typename DerivedM, typename DerivedC>
[[nodiscard]] typename DerivedX::Scalar mvn_log_density(const Eigen::MatrixBase<DerivedX>& x,
                                                        const Eigen::MatrixBase<DerivedM>& mean,
                                                        const Eigen::MatrixBase<DerivedC>& cov) {
  using Scalar = typename DerivedX::Scalar;
  if (x.size() != mean.size() || cov.rows() != x.size()) throw DomainError("mvn_log_density: dimension mismatch");
  Matrix<Scalar> c = cov;
  Eigen::LLT<Matrix<Scalar>> llt(c);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("covariance is not positive definite", 0.0, 0.0);
  }
  const Vector<Scalar> z = llt.matrixL().solve(Vector<Scalar>(x - mean));
  const auto k = static_cast<Scalar>(x.size());
  const Scalar log_two_pi = std::log(Scalar(2) * std::numbers::pi_v<Scalar>);
  return Scalar(-0.5) * (k * log_two_pi + detail::log_det(llt) + z.squaredNorm());
}

/// c = |X'X| / |X0'X0|, from the Cholesky diagonals.
template <typename Scalar>
[[nodiscard]] RelativeVariance relative_precision_c(const LinearSummary<Scalar>& cur,
                                                    const LinearSummary<Scalar>& hist) {
  if (cur.dim() != hist.dim()) throw DomainError("current and historical designs differ in dimension");
  const auto cur_llt = detail::checked_llt(cur.xtx(), "X'X");
  const auto hist_llt = detail::checked_llt(hist.xtx(), "X0'X0");
  return RelativeVariance(static_cast<double>(std::exp(detail::log_det(cur_llt) - detail::log_det(hist_llt))));
}

/// ln Nor_k(theta_hat | theta0_hat, sigma^2 (X'X)^-1 + sigma^2 alpha^-1 (X0'X0)^-1),
/// precomputed for repeated evaluation over alpha.
class AlphaLikelihood {
 public:
  AlphaLikelihood(const LinearSummary<double>& cur, const LinearSummary<double>& hist, double sigma);

  [[nodiscard]] double operator()(double alpha) const;

 private:
  Matrix<double> cur_inv_;
  Matrix<double> hist_inv_;
  Vector<double> diff_;
  double sigma2_;
};

/// ln of the unnormalized marginal posterior of alpha.
[[nodiscard]] LogValue alpha_log_posterior_unnorm(double alpha, const LinearSummary<double>& cur,
                                                  const LinearSummary<double>& hist, double sigma,
                                                  const BetaParams& prior);

/// Marginal posterior of alpha on a grid, normalized by quadrature.
[[nodiscard]] AlphaPosteriorGrid alpha_posterior_linear(const LinearSummary<double>& cur,
                                                        const LinearSummary<double>& hist, double sigma,
                                                        const BetaParams& prior, const GridSpec& spec = {});

}  // namespace ppborrow::linear
