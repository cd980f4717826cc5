#pragma once

// Second-order structure of subordinated sequences X_i = p(Z_i), with Z a
// standardized Gaussian sequence of covariance gamma. For
// p = sum_k c_k H_k the Hermite orthogonality relations give
//
//   Cov[p(Z_0), p(Z_n)] = sum_{k>=1} c_k^2 k! gamma(n)^k,
//
// from which the exact partial-sum variance and the long-run variance follow.
// All of this is done in long double; gamma(d)^k underflows smoothly to zero
// for large chaos levels, which only drops terms far below working precision.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermrank/covariance.hpp"
#include "hermrank/hermite_algebra.hpp"
#include "hermrank/numerics.hpp"

namespace hermrank {

/// A call whose mathematical precondition does not hold (e.g. a divergent
/// series, or an LRD input to an SRD-only procedure).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline const char* kSrdCondition = "(2H-2)m+1<0";
inline const char* kLrdCondition = "(2H-2)m'+1>0";

namespace detail {

/// w_k = c_k^2 k!, the variance carried by chaos level k (index 0 unused).
inline std::vector<long double> chaos_weights(const HermitePoly& p) {
  if (p.is_constant()) throw DomainError("a nonconstant polynomial is required");
  std::vector<long double> w(p.coeffs().size(), 0.0L);
  for (unsigned k = 1; k < w.size(); ++k) {
    const Rational& c = p.coeffs()[k];
    if (c != 0) w[k] = static_cast<long double>(c * c * Rational(factorial(k)));
  }
  return w;
}

/// sum_{k>=1} w_k g^k by Horner.
inline long double chaos_series(const std::vector<long double>& w, long double g) {
  long double acc = 0.0L;
  for (std::size_t k = w.size(); k-- > 1;) acc = (acc + w[k]) * g;
  return acc;
}

}  // namespace detail

/// Covariance of the subordinated sequence at lag n.
inline long double subordinated_covariance(const HermitePoly& p, const CovarianceModel& model, std::int64_t n) {
  return detail::chaos_series(detail::chaos_weights(p), model(n));
}

/// Exact Var[sum_{i=1}^N p(Z_i)]
///   = sum_k w_k [N + 2 sum_{d=1}^{N-1} (N-d) gamma(d)^k],   O(N deg p).
/// Lags are accumulated in a fixed order with compensated summation, so the
/// result does not depend on how the caller partitions work.
inline long double partial_sum_variance(const HermitePoly& p, const CovarianceModel& model, std::uint64_t N) {
  if (N == 0) throw DomainError("partial_sum_variance needs N >= 1");
  const auto w = detail::chaos_weights(p);
  long double w_total = 0.0L;
  for (std::size_t k = 1; k < w.size(); ++k) w_total += w[k];
  CompensatedSum<long double> lags;
  for (std::uint64_t d = 1; d < N; ++d) {
    const long double g = model(static_cast<std::int64_t>(d));
    lags += static_cast<long double>(N - d) * detail::chaos_series(w, g);
  }
  return static_cast<long double>(N) * w_total + 2.0L * lags.value();
}

/// True when the subordinated covariances are absolutely summable: the
/// Breuer-Major regime, or a white-noise base sequence.
inline bool is_short_memory(const HermitePoly& p, const CovarianceModel& model) {
  const auto rank = hermite_rank(p);
  if (!rank) return false;
  if (model.is_white_noise()) return true;
  return classify(*rank, model.hurst()).classification == DependenceRegime::srd;
}

namespace detail {

// Tail sum_{n>T} gamma(n)^k for a model whose level-k covariances are
// summable, by the Euler-Maclaurin formula with a closed-form integral.
struct TailEstimate {
  long double value;
  long double error;
};

inline TailEstimate level_tail(const CovarianceModel& model, unsigned k, std::int64_t T) {
  const long double a = 2.0L * model.hurst();
  const long double s = (2.0L - a) * k;  // gamma(x)^k ~ x^{-s}
  const long double Tl = static_cast<long double>(T);
  const long double fT = std::pow(model(T), static_cast<long double>(k));
  long double integral = 0.0L;
  long double s_local = s;
  if (model.family() == CovarianceFamily::power_law) {
    const SlowlyVarying& L = model.slowly_varying();
    const long double ck = std::pow(static_cast<long double>(L.scale), static_cast<long double>(k));
    if (L.kind == SlowlyVaryingKind::constant) {
      integral = ck * std::pow(Tl, 1.0L - s) / (s - 1.0L);
    } else {
      // int_T^inf x^{-s} (1+log x)^k dx
      //   = T^{1-s} sum_{j=0}^k (k!/j!) (1+log T)^j (s-1)^{j-k-1}
      const long double t0 = 1.0L + std::log(Tl);
      long double term = 1.0L / std::pow(s - 1.0L, static_cast<long double>(k + 1));  // j = 0 with k!/0! folded below
      for (unsigned i = 1; i <= k; ++i) term *= i;  // k!
      long double acc = term;
      for (unsigned j = 1; j <= k; ++j) {
        term *= t0 * (s - 1.0L) / j;
        acc += term;
      }
      integral = ck * std::pow(Tl, 1.0L - s) * acc;
      s_local = k * ((2.0L - a) - 1.0L / t0);
    }
  } else {
    // gamma(x) = x^{a-2} S(y), y = x^{-2}, S(y) = sum_j C(a, 2j+2) y^j.
    constexpr int terms = 8;
    std::vector<long double> S(terms), Sk(terms, 0.0L);
    long double binom = a * (a - 1.0L) / 2.0L;
    for (int j = 0; j < terms; ++j) {
      S[j] = binom;
      binom *= (a - 2.0L * j - 2.0L) * (a - 2.0L * j - 3.0L) / ((2.0L * j + 3.0L) * (2.0L * j + 4.0L));
    }
    Sk[0] = 1.0L;
    for (unsigned r = 0; r < k; ++r) {
      std::vector<long double> next(terms, 0.0L);
      for (int i = 0; i < terms; ++i)
        for (int j = 0; i + j < terms; ++j) next[i + j] += Sk[i] * S[j];
      Sk = std::move(next);
    }
    for (int i = 0; i < terms; ++i)
      integral += Sk[i] * std::pow(Tl, 1.0L - s - 2.0L * i) / (s + 2.0L * i - 1.0L);
  }
  // f'(T) ~ -s f/T, f'''(T) ~ -s(s+1)(s+2) f/T^3 for f locally ~ x^{-s}.
  const long double d1 = -s_local * fT / Tl;
  const long double d3 = -s_local * (s_local + 1.0L) * (s_local + 2.0L) * fT / (Tl * Tl * Tl);
  const long double d5 = d3 * (s_local + 3.0L) * (s_local + 4.0L) / (Tl * Tl);
  return {integral - fT / 2.0L - d1 / 12.0L + d3 / 720.0L, std::abs(d5) / 30240.0L};
}

}  // namespace detail

/// Long-run variance sigma^2 = sum_k c_k^2 k! sum_{n in Z} gamma(n)^k of the
/// subordinated sequence. Lags up to a cutoff T are summed directly; the
/// remainder comes from an integral comparison per chaos level with
/// Euler-Maclaurin corrections, and T grows until the correction error
/// estimate is below `tolerance`.
inline long double breuer_major_sigma2(const HermitePoly& p, const CovarianceModel& model,
                                       double tolerance = 1e-10) {
  if (!is_short_memory(p, model))
    throw PreconditionError("long-run variance diverges: the summability condition " + std::string(kSrdCondition) +
                            " fails for rank " + std::to_string(hermite_rank(p).value_or(0)) +
                            " and H = " + std::to_string(model.hurst()));
  const auto w = detail::chaos_weights(p);
  long double w_total = 0.0L;
  for (std::size_t k = 1; k < w.size(); ++k) w_total += w[k];
  if (model.is_white_noise()) return w_total;

  for (std::int64_t T = 1024; T <= (std::int64_t{1} << 26); T *= 4) {
    long double err = 0.0L;
    CompensatedSum<long double> total;
    total += w_total;
    std::vector<CompensatedSum<long double>> level(w.size());
    for (std::int64_t n = 1; n <= T; ++n) {
      const long double g = model(n);
      long double gk = 1.0L;
      for (std::size_t k = 1; k < w.size(); ++k) {
        gk *= g;
        if (w[k] != 0.0L) level[k] += gk;
      }
    }
    for (std::size_t k = 1; k < w.size(); ++k) {
      if (w[k] == 0.0L) continue;
      const auto tail = detail::level_tail(model, static_cast<unsigned>(k), T);
      total += 2.0L * w[k] * (level[k].value() + tail.value);
      err += 2.0L * w[k] * tail.error;
    }
    if (err <= tolerance) return total.value();
  }
  throw std::runtime_error("breuer_major_sigma2: tail error did not fall below tolerance " +
                           std::to_string(tolerance));
}

/// Outcome of the search for an outer polynomial q whose composition with p
/// is long-range dependent.
struct QSearchResult {
  MonomialPoly q;
  unsigned power;
  unsigned rank;  // Hermite rank m' of q(p(x))
};

/// Searches q = x^2, ..., x^max_power for a composition q(p) of Hermite rank
/// m' with (2H-2)m' + 1 > 0. Returns the power giving the smallest such m'
/// (the lowest power on ties), or nothing if no power qualifies.
inline std::optional<QSearchResult> find_q(const HermitePoly& p, double hurst, unsigned max_power) {
  const auto rank = hermite_rank(p);
  if (!rank) throw DomainError("find_q needs a nonconstant polynomial");
  const auto cls = classify(*rank, hurst);
  if (cls.classification != DependenceRegime::srd)
    throw PreconditionError("find_q requires an SRD input, " + std::string(kSrdCondition) + ", but rank " +
                            std::to_string(*rank) + " at H = " + std::to_string(hurst) + " gives " +
                            std::to_string(cls.exponent_value));
  std::optional<QSearchResult> best;
  for (unsigned j = 2; j <= max_power; ++j) {
    const MonomialPoly q = MonomialPoly::basis(j);
    const auto r = hermite_rank(compose(q, p));
    if (!r) continue;
    if (classify(*r, hurst).classification != DependenceRegime::lrd) continue;
    if (!best || *r < best->rank) best = QSearchResult{q, j, *r};
    if (best->rank == 1) break;
  }
  return best;
}

}  // namespace hermrank
