#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarmsim::stats {

namespace detail {

/// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (!(a > 0 && b > 0)) throw std::domain_error("incomplete_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // the fraction converges fast on the side of the mean
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Student-t cumulative distribution with `dof` degrees of freedom.
inline double student_t_cdf(double t, double dof) {
  if (!(dof > 0)) throw std::domain_error("student_t_cdf: dof must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

/// Two-sided p-value of a t statistic.
inline double two_sided_p(double t, double dof) {
  if (std::isnan(t)) return 1.0;
  const double p = incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
  return std::min(1.0, std::max(0.0, p));
}

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double t = 0.0;
  double p = 1.0;
};

struct OlsFit {
  std::vector<Coefficient> coefficients;  // intercept first
  std::vector<double> residuals;
  double residual_variance = 0.0;
  std::size_t dof = 0;
};

class SingularDesign : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Standardized {
  std::vector<double> values;
  double mean = 0.0;
  double sd = 0.0;
};

/// z-scores with the sample standard deviation.
inline Standardized z_score(std::span<const double> x) {
  if (x.size() < 2) throw SingularDesign("need at least two observations to standardize");
  Standardized s;
  for (double v : x) s.mean += v;
  s.mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
  if (!(s.sd > 0)) throw SingularDesign("predictor has a single level");
  s.values.reserve(x.size());
  for (double v : x) s.values.push_back((v - s.mean) / s.sd);
  return s;
}

/// Ordinary least squares of y on the given predictor columns plus an
/// intercept, solved through the Cholesky factor of X'X.
inline OlsFit ols(std::span<const std::vector<double>> predictors, std::span<const std::string> names,
                  std::span<const double> y) {
  const std::size_t n = y.size();
  const std::size_t k = predictors.size() + 1;
  if (names.size() != predictors.size()) throw std::invalid_argument("one name per predictor");
  for (const auto &col : predictors)
    if (col.size() != n) throw std::invalid_argument("predictor length mismatch");
  if (n <= k) throw SingularDesign("not enough observations for the number of coefficients");

  auto x_at = [&](std::size_t row, std::size_t col) { return col == 0 ? 1.0 : predictors[col - 1][row]; };

  std::vector<double> xtx(k * k, 0.0);
  std::vector<double> xty(k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      const double xi = x_at(r, i);
      xty[i] += xi * y[r];
      for (std::size_t j = 0; j <= i; ++j) xtx[i * k + j] += xi * x_at(r, j);
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < i; ++j) xtx[j * k + i] = xtx[i * k + j];

  // lower Cholesky factor L with X'X = L L'
  std::vector<double> chol(k * k, 0.0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = xtx[i * k + j];
      for (std::size_t m = 0; m < j; ++m) s -= chol[i * k + m] * chol[j * k + m];
      if (i == j) {
        if (!(s > 1e-12 * std::max(1.0, xtx[i * k + i]))) throw SingularDesign("design matrix is singular");
        chol[i * k + i] = std::sqrt(s);
      } else {
        chol[i * k + j] = s / chol[j * k + j];
      }
    }
  }
  auto solve = [&](std::vector<double> b) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t m = 0; m < i; ++m) b[i] -= chol[i * k + m] * b[m];
      b[i] /= chol[i * k + i];
    }
    for (std::size_t i = k; i-- > 0;) {
      for (std::size_t m = i + 1; m < k; ++m) b[i] -= chol[m * k + i] * b[m];
      b[i] /= chol[i * k + i];
    }
    return b;
  };
  std::vector<double> beta = solve(xty);

  double y_mean = 0.0;
  for (double v : y) y_mean += v;
  y_mean /= static_cast<double>(n);
  double tss = 0.0;
  for (double v : y) tss += (v - y_mean) * (v - y_mean);
  const bool constant_response = tss == 0.0;
  if (constant_response) {
    // the exact solution; suppresses rounding residue in the slopes
    std::fill(beta.begin(), beta.end(), 0.0);
    beta[0] = y_mean;
  }

  OlsFit fit;
  fit.dof = n - k;
  fit.residuals.resize(n);
  double rss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double yhat = 0.0;
    for (std::size_t i = 0; i < k; ++i) yhat += beta[i] * x_at(r, i);
    fit.residuals[r] = constant_response ? 0.0 : y[r] - yhat;
    rss += fit.residuals[r] * fit.residuals[r];
  }
  fit.residual_variance = rss / static_cast<double>(fit.dof);
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> unit(k, 0.0);
    unit[i] = 1.0;
    const double inv_diag = solve(unit)[i];
    Coefficient c;
    c.name = i == 0 ? "intercept" : names[i - 1];
    c.estimate = beta[i];
    c.std_error = std::sqrt(fit.residual_variance * inv_diag);
    // a perfect fit leaves no residual variance; a zero estimate is then not significant
    if (c.std_error > 0) {
      c.t = c.estimate / c.std_error;
    } else {
      c.t = std::abs(c.estimate) < 1e-12 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), c.estimate);
    }
    c.p = std::isinf(c.t) ? 0.0 : two_sided_p(c.t, static_cast<double>(fit.dof));
    fit.coefficients.push_back(std::move(c));
  }
  return fit;
}

}  // namespace swarmsim::stats
