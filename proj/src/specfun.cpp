#include "ppborrow/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ppborrow::specfun {
namespace {

constexpr double kSeriesRelTol = 1e-15;
constexpr int kSeriesQuietTerms = 3;
constexpr long kSeriesMaxTerms = 100000;

// zeta(k) - 1 for k = 2, 3, ..., 41.
constexpr std::array<double, 40> kZetaMinusOne = {
    0.64493406684822643647,   0.2020569031595942854,    0.082323233711138191516,
    0.036927755143369926331,  0.017343061984449139715,  0.0083492773819228268398,
    0.0040773561979443393787, 0.0020083928260822144179, 0.00099457512781808533715,
    0.0004941886041194645587, 0.00024608655330804829864, 0.00012271334757848914675,
    6.1248135058704829259e-5, 3.0588236307020493552e-5, 1.5282259408651871733e-5,
    7.6371976378997622736e-6, 3.8172932649998398565e-6, 1.9082127165539389257e-6,
    9.5396203387279611315e-7, 4.7693298678780646312e-7, 2.3845050272773299e-7,
    1.1921992596531107307e-7, 5.9608189051259479612e-8, 2.9803503514652280186e-8,
    1.4901554828365041235e-8, 7.450711789835429492e-9,  3.7253340247884570548e-9,
    1.8626597235130490064e-9, 9.3132743241966818287e-10, 4.656629065033784073e-10,
    2.328311833676505492e-10, 1.1641550172700519776e-10, 5.8207720879027008892e-11,
    2.9103850444970996869e-11, 1.4551921891041984236e-11, 7.2759598350574810145e-12,
    3.6379795473786511902e-12, 1.8189896503070659476e-12, 9.0949478402638892825e-13,
    4.5474737830421540268e-13,
};

constexpr double kOneMinusEulerGamma = 0.4227843350984671393934879;

// ln Gamma(2 + eps), |eps| <= 0.5.
double log_gamma_near_two(double eps) {
  double sum = 0.0;
  double power = eps;  // eps^k
  for (std::size_t i = 0; i < kZetaMinusOne.size(); ++i) {
    power *= -eps;
    const auto k = static_cast<double>(i + 2);
    sum += kZetaMinusOne[i] * power / k;
  }
  // The loop builds (-1)^(k-1) eps^k, the series wants (-1)^k eps^k.
  return kOneMinusEulerGamma * eps - sum;
}

// Bernoulli B_{2k} / (2k (2k - 1)) for k = 1..8.
constexpr std::array<double, 8> kStirlingCoefficients = {
    1.0 / 12.0,   -1.0 / 360.0,  1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
};

double log_gamma_stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double correction = 0.0;
  for (auto it = kStirlingCoefficients.rbegin(); it != kStirlingCoefficients.rend(); ++it) {
    correction = correction * inv2 + *it;
  }
  correction *= inv;
  constexpr double half_log_two_pi = 0.91893853320467274178032973640562;
  return (x - 0.5) * std::log(x) - x + half_log_two_pi + correction;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || std::isnan(v)) {
    throw DomainError(std::string(what) + " must be positive");
  }
}

void check_series_budget(long terms, double sum, double last_term, const char* name) {
  if (terms >= kSeriesMaxTerms) {
    throw NumericalError(std::string(name) + " series did not converge within " +
                             std::to_string(kSeriesMaxTerms) + " terms",
                         sum, last_term);
  }
}

}  // namespace

double log_gamma(double x) {
  require_positive(x, "log_gamma argument");
  if (std::isinf(x)) return x;
  if (x >= 10.0) return log_gamma_stirling(x);
  if (x >= 2.5) {
    // Gamma(x) = (x-1)(x-2)...(x-m) Gamma(x-m) with x - m in [1.5, 2.5).
    double product = 1.0;
    double y = x;
    while (y >= 2.5) {
      y -= 1.0;
      product *= y;
    }
    return std::log(product) + log_gamma_near_two(y - 2.0);
  }
  if (x >= 1.5) return log_gamma_near_two(x - 2.0);
  if (x >= 0.5) {
    // ln Gamma(1 + e) = ln Gamma(2 + e) - ln(1 + e); log1p keeps the root at 1 exact.
    const double eps = x - 1.0;
    return log_gamma_near_two(eps) - std::log1p(eps);
  }
  // x in (0, 0.5): ln Gamma(x) = ln Gamma(x + 1) - ln x, with x + 1 in (1, 1.5).
  const double eps = x;  // (x + 1) - 1 without rounding
  return log_gamma_near_two(eps) - std::log1p(eps) - std::log(x);
}

double log_beta(double x, double y) {
  require_positive(x, "log_beta argument");
  require_positive(y, "log_beta argument");
  return log_gamma(x) + log_gamma(y) - log_gamma(x + y);
}

double log_choose(std::int64_t n, std::int64_t x) {
  if (n < 0 || x < 0 || x > n) throw DomainError("log_choose requires 0 <= x <= n");
  if (x == 0 || x == n) return 0.0;
  const auto nd = static_cast<double>(n);
  const auto xd = static_cast<double>(x);
  return log_gamma(nd + 1.0) - log_gamma(xd + 1.0) - log_gamma(nd - xd + 1.0);
}

LogValue beta_log_pdf(double alpha, const BetaParams& prior) {
  return beta_log_pdf(alpha, 1.0 - alpha, prior);
}

LogValue beta_log_pdf(double alpha, double one_minus_alpha, const BetaParams& prior) {
  if (!(alpha > 0.0) || !(one_minus_alpha > 0.0) || !(alpha <= 1.0) || !(one_minus_alpha <= 1.0)) {
    throw DomainError("alpha must lie in the open interval (0, 1)");
  }
  const double p = prior.p();
  const double q = prior.q();
  double value = -log_beta(p, q);
  if (p != 1.0) value += (p - 1.0) * std::log(alpha);
  if (q != 1.0) value += (q - 1.0) * std::log(one_minus_alpha);
  return value;
}

double log_gauss_2f1_negz(double a, double b, double c, double z) {
  require_positive(a, "2F1 parameter a");
  require_positive(b, "2F1 parameter b");
  if (!(c > b)) throw DomainError("2F1 requires c > b");
  if (!(z <= 0.0) || !std::isfinite(z)) throw DomainError("2F1 argument z must be finite and <= 0");
  if (z == 0.0) return 0.0;

  // Pfaff: 2F1(a, b; c; z) = (1 - z)^(-a) 2F1(a, c - b; c; z / (z - 1)).
  const double w = z / (z - 1.0);
  const double b2 = c - b;
  double term = 1.0;
  double sum = 1.0;
  int quiet = 0;
  long n = 0;
  while (quiet < kSeriesQuietTerms) {
    check_series_budget(n, sum, term, "2F1");
    const auto nd = static_cast<double>(n);
    term *= (a + nd) * (b2 + nd) / ((c + nd) * (nd + 1.0)) * w;
    sum += term;
    quiet = (term < kSeriesRelTol * sum) ? quiet + 1 : 0;
    ++n;
  }
  return -a * std::log1p(-z) + std::log(sum);
}

double gauss_2f1_negz(double a, double b, double c, double z) {
  return std::exp(log_gauss_2f1_negz(a, b, c, z));
}

double log_kummer_m(double a, double b, double z) {
  require_positive(a, "Kummer parameter a");
  if (!(b > a)) throw DomainError("Kummer M requires b > a");
  if (!(z <= 0.0) || !std::isfinite(z)) throw DomainError("Kummer M argument z must be finite and <= 0");
  if (z == 0.0) return 0.0;

  // Kummer: M(a, b, z) = e^z M(b - a, b, -z); the series below has positive terms.
  const double x = -z;
  const double a2 = b - a;
  constexpr double kRescaleAbove = 1e280;
  double log_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  int quiet = 0;
  long n = 0;
  while (quiet < kSeriesQuietTerms) {
    check_series_budget(n, sum, term, "Kummer M");
    const auto nd = static_cast<double>(n);
    term *= (a2 + nd) / ((b + nd) * (nd + 1.0)) * x;
    sum += term;
    if (sum > kRescaleAbove) {
      sum /= kRescaleAbove;
      term /= kRescaleAbove;
      log_scale += std::log(kRescaleAbove);
    }
    quiet = (term < kSeriesRelTol * sum) ? quiet + 1 : 0;
    ++n;
  }
  return z + log_scale + std::log(sum);
}

double kummer_m(double a, double b, double z) { return std::exp(log_kummer_m(a, b, z)); }

LogValue normal_log_pdf(double x, double mean, double variance) {
  require_positive(variance, "normal variance");
  const double diff = x - mean;
  constexpr double log_two_pi = 1.8378770664093454835606594728112;
  return -0.5 * (log_two_pi + std::log(variance) + diff * diff / variance);
}

LogValue beta_binomial_log_pmf(std::int64_t x, std::int64_t n, double a, double b) {
  if (n < 0 || x < 0 || x > n) throw DomainError("beta-binomial requires 0 <= x <= n");
  require_positive(a, "beta-binomial shape a");
  require_positive(b, "beta-binomial shape b");
  const auto xd = static_cast<double>(x);
  const auto nd = static_cast<double>(n);
  return log_choose(n, x) + log_beta(xd + a, nd - xd + b) - log_beta(a, b);
}

}  // namespace ppborrow::specfun
