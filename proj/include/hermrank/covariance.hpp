#pragma once

// Covariance models for the standardized Gaussian base sequence and the
// SRD/LRD classification of rank-m functionals of it.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hermrank {

/// Raised when a parameter lies outside its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class CovarianceFamily { power_law, fgn };

enum class SlowlyVaryingKind { constant, logarithmic };

/// L(n) = c or L(n) = c (1 + log n).
struct SlowlyVarying {
  SlowlyVaryingKind kind = SlowlyVaryingKind::constant;
  double scale = 1.0;

  long double operator()(long double n) const {
    return kind == SlowlyVaryingKind::constant ? static_cast<long double>(scale)
                                               : static_cast<long double>(scale) * (1.0L + std::log(n));
  }
};

inline std::string to_string(CovarianceFamily f) { return f == CovarianceFamily::fgn ? "fgn" : "power_law"; }
inline std::string to_string(SlowlyVaryingKind k) {
  return k == SlowlyVaryingKind::constant ? "constant" : "logarithmic";
}

inline void require_hurst(double hurst) {
  if (!(hurst > 0.5 && hurst < 1.0))
    throw DomainError("Hurst index must satisfy 1/2 < H < 1, got " + std::to_string(hurst));
}

/// Covariance gamma(n) of a standardized stationary Gaussian sequence.
///
/// power_law: gamma(n) = n^{2H-2} L(n) for n >= 1.
/// fgn:       gamma(n) = (|n+1|^{2H} - 2|n|^{2H} + |n-1|^{2H}) / 2,
///            asymptotic to H(2H-1) n^{2H-2}.
/// Both have gamma(0) = 1 and gamma(-n) = gamma(n).
class CovarianceModel {
 public:
  static CovarianceModel fgn(double hurst) { return CovarianceModel(CovarianceFamily::fgn, hurst, {}); }

  static CovarianceModel power_law(double hurst, SlowlyVarying L = {}) {
    return CovarianceModel(CovarianceFamily::power_law, hurst, L);
  }

  /// gamma = delta_0, expressed as a power law with L == 0.
  static CovarianceModel white_noise() { return power_law(0.75, {SlowlyVaryingKind::constant, 0.0}); }

  CovarianceFamily family() const noexcept { return family_; }
  double hurst() const noexcept { return hurst_; }
  const SlowlyVarying& slowly_varying() const noexcept { return L_; }

  /// True when every off-zero lag has zero covariance.
  bool is_white_noise() const noexcept { return family_ == CovarianceFamily::power_law && L_.scale == 0.0; }

  long double operator()(std::int64_t n) const {
    const long double d = static_cast<long double>(n < 0 ? -n : n);
    if (n == 0) return 1.0L;
    const long double a = 2.0L * static_cast<long double>(hurst_);
    if (family_ == CovarianceFamily::power_law) return std::pow(d, a - 2.0L) * L_(d);
    if (d < 8.0L)
      return 0.5L * (std::pow(d + 1.0L, a) - 2.0L * std::pow(d, a) + std::pow(d - 1.0L, a));
    // d^a * sum_{j>=1} C(a, 2j) d^{-2j}; avoids the cancellation in the
    // second difference at large lags. All terms are positive for 1 < a < 2.
    const long double u2 = 1.0L / (d * d);
    long double binom = a * (a - 1.0L) / 2.0L;  // C(a, 2)
    long double upow = u2;
    long double sum = 0.0L;
    for (int j = 1; j < 60; ++j) {
      const long double term = binom * upow;
      sum += term;
      if (term < sum * std::numeric_limits<long double>::epsilon()) break;
      binom *= (a - 2.0L * j) * (a - 2.0L * j - 1.0L) / ((2.0L * j + 1.0L) * (2.0L * j + 2.0L));
      upow *= u2;
    }
    return std::pow(d, a) * sum;
  }

 private:
  CovarianceModel(CovarianceFamily family, double hurst, SlowlyVarying L) : family_(family), hurst_(hurst), L_(L) {
    require_hurst(hurst);
    if (family == CovarianceFamily::power_law) validate_power_law();
  }

  // |gamma(n)| <= 1 for n >= 1.
  void validate_power_law() const {
    if (!std::isfinite(L_.scale)) throw DomainError("slowly varying scale must be finite");
    double peak = std::abs(L_.scale);
    if (L_.kind == SlowlyVaryingKind::logarithmic) {
      if (L_.scale < 0.0) throw DomainError("logarithmic slowly varying scale must be non-negative");
      // (1 + log n) n^{-b} peaks at log n = 1/b - 1 (or at n = 1).
      const double b = 2.0 - 2.0 * hurst_;
      const double log_n = std::max(0.0, 1.0 / b - 1.0);
      peak = L_.scale * (1.0 + log_n) * std::exp(-b * log_n);
    }
    if (peak > 1.0)
      throw DomainError("power-law covariance exceeds gamma(0) = 1 in magnitude (peak " + std::to_string(peak) + ")");
  }

  CovarianceFamily family_;
  double hurst_;
  SlowlyVarying L_;
};

inline long double gamma(const CovarianceModel& model, std::int64_t n) { return model(n); }

enum class DependenceRegime { srd, lrd, boundary };

inline std::string to_string(DependenceRegime r) {
  switch (r) {
    case DependenceRegime::srd: return "SRD";
    case DependenceRegime::lrd: return "LRD";
    default: return "boundary";
  }
}

/// Sign of (2H-2)m + 1 decides summability of the rank-m covariance
/// gamma(n)^m. Values within kBoundaryTolerance of zero count as boundary,
/// so decimal inputs such as H = 0.75, m = 2 are not pushed to either side by
/// rounding.
struct DependenceClass {
  DependenceRegime classification;
  double exponent_value;
};

inline constexpr double kBoundaryTolerance = 1e-9;

inline DependenceClass classify(unsigned rank, double hurst) {
  require_hurst(hurst);
  if (rank == 0) throw DomainError("Hermite rank must be at least 1");
  const double value = (2.0 * hurst - 2.0) * rank + 1.0;
  if (std::abs(value) <= kBoundaryTolerance) return {DependenceRegime::boundary, 0.0};
  return {value < 0.0 ? DependenceRegime::srd : DependenceRegime::lrd, value};
}

/// Growth exponent of Var[sum_{i<=N} X_i] for a rank-m functional:
/// (2H-2)m + 2 in the LRD regime, 1 otherwise.
struct GrowthExponent {
  double value;
  DependenceRegime regime;
};

inline GrowthExponent theoretical_exponent(unsigned rank, double hurst) {
  const DependenceClass c = classify(rank, hurst);
  if (c.classification == DependenceRegime::lrd) return {c.exponent_value + 1.0, c.classification};
  return {1.0, c.classification};
}

}  // namespace hermrank
