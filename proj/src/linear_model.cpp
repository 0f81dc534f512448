#include "ppborrow/linear_model.hpp"

#include "ppborrow/specfun.hpp"

namespace ppborrow::linear {

AlphaLikelihood::AlphaLikelihood(const LinearSummary<double>& cur, const LinearSummary<double>& hist, double sigma)
    : diff_(cur.theta_hat() - hist.theta_hat()), sigma2_(sigma * sigma) {
  if (cur.dim() != hist.dim()) throw DomainError("current and historical designs differ in dimension");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
  const auto k = cur.dim();
  cur_inv_ = detail::checked_llt(cur.xtx(), "X'X").solve(Matrix<double>::Identity(k, k));
  hist_inv_ = detail::checked_llt(hist.xtx(), "X0'X0").solve(Matrix<double>::Identity(k, k));
}

double AlphaLikelihood::operator()(double alpha) const {
  // Sigma(alpha) = (sigma^2 / alpha) M with M = alpha (X'X)^-1 + (X0'X0)^-1,
  // which stays well scaled as alpha -> 0.
  const Matrix<double> m = alpha * cur_inv_ + hist_inv_;
  Eigen::LLT<Matrix<double>> llt(m);
  if (llt.info() != Eigen::Success) throw NumericalError("marginal covariance lost positive definiteness", alpha, 0.0);
  const auto k = static_cast<double>(diff_.size());
  const Vector<double> z = llt.matrixL().solve(diff_);
  const double log_scale = std::log(sigma2_ / alpha);
  constexpr double log_two_pi = 1.8378770664093454835606594728112;
  return -0.5 * (k * (log_two_pi + log_scale) + detail::log_det(llt) + (alpha / sigma2_) * z.squaredNorm());
}

LogValue alpha_log_posterior_unnorm(double alpha, const LinearSummary<double>& cur, const LinearSummary<double>& hist,
                                    double sigma, const BetaParams& prior) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in the open interval (0, 1)");
  return AlphaLikelihood(cur, hist, sigma)(alpha) + specfun::beta_log_pdf(alpha, prior);
}

AlphaPosteriorGrid alpha_posterior_linear(const LinearSummary<double>& cur, const LinearSummary<double>& hist,
                                          double sigma, const BetaParams& prior, const GridSpec& spec) {
  const AlphaLikelihood likelihood(cur, hist, sigma);
  GridMeta meta{"linear",
                {{"k", static_cast<double>(cur.dim())},
                 {"sigma", sigma},
                 {"prior_p", prior.p()},
                 {"prior_q", prior.q()}},
                0.0};
  return normalize_on_grid(
      [&](double a, double one_minus_a) { return likelihood(a) + specfun::beta_log_pdf(a, one_minus_a, prior); },
      spec, std::move(meta));
}

}  // namespace ppborrow::linear
