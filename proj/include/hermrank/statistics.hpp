#pragma once

// Sample statistics used by the experiments: moments, Kolmogorov-Smirnov
// tests and Mardia's multivariate skewness.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace hermrank {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// P(K > lambda) for the limiting Kolmogorov distribution.
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form, fast for small lambda.
    const double y = std::exp(-std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda));
    double cdf = 0;
    for (int j = 1; j < 20; j += 2) cdf += std::pow(y, j * j);
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double q = 0;
  for (int j = 1; j < 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    q += (j % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(q, 0.0, 1.0);
}

struct KsResult {
  double statistic;
  double p_value;  // asymptotic, with Stephens' small-sample correction
};

/// One-sample KS test of `sample` against a continuous distribution function.
template <typename Cdf>
KsResult ks_test(std::vector<double> sample, Cdf&& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_test on an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

/// Two-sample KS test.
inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample on an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

struct SampleMoments {
  double mean;
  double variance;  // unbiased
  double skewness;
  double kurtosis;  // non-excess; 3 for a normal sample
};

inline SampleMoments sample_moments(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n < 2) throw std::invalid_argument("sample_moments needs at least two values");
  double mean = 0;
  for (double x : v) mean += x;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : v) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  return {mean, m2 * n / (n - 1), m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

/// Variance of `v` about a known mean, with a delta-method standard error
/// sqrt((mu4 - s^4) / n).
struct VarianceEstimate {
  double value;
  double stderr_;
};

inline VarianceEstimate variance_about(std::span<const double> v, double mean) {
  const std::size_t n = v.size();
  if (n < 2) throw std::invalid_argument("variance_about needs at least two values");
  double m2 = 0, m4 = 0;
  for (double x : v) {
    const double d2 = (x - mean) * (x - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  m2 /= n;
  m4 /= n;
  return {m2, std::sqrt(std::max(m4 - m2 * m2, 0.0) / n)};
}

struct MardiaSkewness {
  double b1;         // Mardia's b_{1,2}
  double statistic;  // n b1 / 6, asymptotically chi-square with 4 d.o.f.
  double p_value;
};

/// Mardia's skewness for bivariate observations.
inline MardiaSkewness mardia_skewness(std::span<const std::array<double, 2>> obs) {
  const std::size_t n = obs.size();
  if (n < 3) throw std::invalid_argument("mardia_skewness needs at least three observations");
  double mx = 0, my = 0;
  for (const auto& o : obs) {
    mx += o[0];
    my += o[1];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& o : obs) {
    sxx += (o[0] - mx) * (o[0] - mx);
    sxy += (o[0] - mx) * (o[1] - my);
    syy += (o[1] - my) * (o[1] - my);
  }
  sxx /= n;
  sxy /= n;
  syy /= n;
  const double det = sxx * syy - sxy * sxy;
  if (!(det > 0)) throw std::invalid_argument("mardia_skewness: singular sample covariance");
  const double ixx = syy / det, ixy = -sxy / det, iyy = sxx / det;
  std::vector<std::array<double, 2>> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = {obs[i][0] - mx, obs[i][1] - my};
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double ax = ixx * c[i][0] + ixy * c[i][1];
    const double ay = ixy * c[i][0] + iyy * c[i][1];
    for (std::size_t j = 0; j < n; ++j) {
      const double g = ax * c[j][0] + ay * c[j][1];
      sum += g * g * g;
    }
  }
  const double b1 = sum / (static_cast<double>(n) * n);
  const double stat = n * b1 / 6.0;
  // Chi-square(4) survival: exp(-x/2) (1 + x/2).
  return {b1, stat, std::exp(-stat / 2.0) * (1.0 + stat / 2.0)};
}

}  // namespace hermrank
