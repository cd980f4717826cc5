#pragma once

// Experiment pipelines: partial-sum variance growth, the Breuer-Major CLT
// check, the SRD-P / LRD-Q(P) counterexample, and the parameter-space scan.
//
// Strong mixing itself is never estimated. What is observable is the
// mechanism behind its failure: Var[sum X_i] of the SRD input grows like N,
// while Var[sum Q(X_i)] grows like N^{(2H-2)m'+2} with exponent above 1,
// which no strongly mixing sequence with uniformly integrable normalized sums
// can do.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hermrank/covariance.hpp"
#include "hermrank/dependence.hpp"
#include "hermrank/hermite_algebra.hpp"
#include "hermrank/numerics.hpp"
#include "hermrank/simulator.hpp"
#include "hermrank/statistics.hpp"

namespace hermrank {

/// Calibration constants of the experiments (not derived from theory).
struct Tolerances {
  double slope = 0.05;  // |fitted - theoretical| growth exponent
  double ks = 0.06;     // KS distance of standardized sums from N(0,1)
};

enum class GrowthMode { exact, monte_carlo };

inline std::string to_string(GrowthMode m) { return m == GrowthMode::exact ? "exact" : "monte_carlo"; }

struct MonteCarloOptions {
  std::size_t replications = 500;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct GrowthReport {
  std::vector<std::uint64_t> grid;
  std::vector<double> variances;
  std::vector<double> variance_stderr;  // Monte Carlo only
  std::vector<double> ratio_to_power;   // s_N^2 / N^theoretical_slope
  double fitted_slope = 0;
  double slope_stderr = 0;
  double intercept = 0;
  double theoretical_slope = 0;
  unsigned rank = 0;
  DependenceRegime regime = DependenceRegime::srd;
  GrowthMode mode = GrowthMode::exact;
};

/// Checks the grid: strictly increasing, at least 4 points, at least two
/// decades from first to last.
inline void validate_grid(std::span<const std::uint64_t> grid) {
  if (grid.size() < 4) throw DomainError("growth grid needs at least 4 points");
  if (grid.front() < 1) throw DomainError("growth grid values must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1]) throw DomainError("growth grid must be strictly increasing");
  if (static_cast<double>(grid.back()) < 100.0 * static_cast<double>(grid.front()))
    throw DomainError("growth grid must span at least two decades");
}

/// `points` values from start to stop, geometrically spaced and rounded,
/// duplicates removed.
inline std::vector<std::uint64_t> geometric_grid(std::uint64_t start, std::uint64_t stop, std::size_t points) {
  if (start < 1 || stop <= start || points < 2) throw DomainError("geometric grid needs 1 <= start < stop, points >= 2");
  std::vector<std::uint64_t> g;
  const double ratio = std::log(static_cast<double>(stop) / start) / (points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const auto v = i + 1 == points ? stop : static_cast<std::uint64_t>(std::llround(start * std::exp(ratio * i)));
    if (g.empty() || v > g.back()) g.push_back(v);
  }
  return g;
}

namespace detail {

inline DependenceRegime regime_of(unsigned rank, const CovarianceModel& model) {
  if (model.is_white_noise()) return DependenceRegime::srd;
  return classify(rank, model.hurst()).classification;
}

inline double slope_of(unsigned rank, const CovarianceModel& model) {
  if (model.is_white_noise()) return 1.0;
  return theoretical_exponent(rank, model.hurst()).value;
}

/// Prefix sums of x_i - mean at each grid point, one row per replication.
inline std::vector<std::vector<double>> simulated_partial_sums(const HermitePoly& p, const CovarianceModel& model,
                                                               std::span<const std::uint64_t> grid,
                                                               const MonteCarloOptions& mc) {
  SimulationConfig cfg{model, static_cast<std::size_t>(grid.back()), mc.replications, mc.seed, mc.threads};
  const auto coeffs = coefficients_as<double>(hermite_to_monomial(p));
  const double mean = static_cast<double>(p.coeff(0));
  std::vector<std::vector<double>> sums(mc.replications, std::vector<double>(grid.size()));
  generate_paths(cfg, [&](std::size_t rep, std::span<const double> z) {
    CompensatedSum<double> s;
    std::size_t g = 0;
    for (std::size_t i = 0; i < z.size() && g < grid.size(); ++i) {
      s += compensated_horner(coeffs, z[i]) - mean;
      if (i + 1 == grid[g]) sums[rep][g++] = s.value();
    }
  });
  return sums;
}

}  // namespace detail

/// Fits log s_N^2 against log N by least squares, leaving out the smallest
/// grid value. Exact mode uses partial_sum_variance; Monte Carlo mode
/// estimates the variance over simulated replications.
inline GrowthReport fit_growth(const HermitePoly& p, const CovarianceModel& model, std::vector<std::uint64_t> grid,
                               GrowthMode mode, const std::optional<MonteCarloOptions>& mc = std::nullopt) {
  const auto rank = hermite_rank(p);
  if (!rank) throw DomainError("fit_growth needs a nonconstant polynomial");
  validate_grid(grid);
  GrowthReport r;
  r.grid = std::move(grid);
  r.mode = mode;
  r.rank = *rank;
  r.regime = detail::regime_of(*rank, model);
  r.theoretical_slope = detail::slope_of(*rank, model);

  if (mode == GrowthMode::exact) {
    for (auto N : r.grid) r.variances.push_back(static_cast<double>(partial_sum_variance(p, model, N)));
  } else {
    if (!mc) throw DomainError("monte_carlo mode needs simulation options");
    if (mc->replications < 2) throw DomainError("monte_carlo mode needs at least 2 replications");
    const auto sums = detail::simulated_partial_sums(p, model, r.grid, *mc);
    std::vector<double> column(sums.size());
    for (std::size_t g = 0; g < r.grid.size(); ++g) {
      for (std::size_t rep = 0; rep < sums.size(); ++rep) column[rep] = sums[rep][g];
      const auto est = variance_about(column, 0.0);
      if (!(est.value > 0))
        throw std::runtime_error("Monte Carlo variance estimate is not positive at N = " + std::to_string(r.grid[g]));
      r.variances.push_back(est.value);
      r.variance_stderr.push_back(est.stderr_);
    }
  }

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    const double N = static_cast<double>(r.grid[i]);
    if (!(r.variances[i] > 0)) throw std::runtime_error("nonpositive partial-sum variance");
    r.ratio_to_power.push_back(r.variances[i] / std::pow(N, r.theoretical_slope));
    if (i == 0) continue;  // pre-asymptotic
    lx.push_back(std::log(N));
    ly.push_back(std::log(r.variances[i]));
  }
  const LinearFit fit = least_squares(lx, ly);
  r.fitted_slope = fit.slope;
  r.slope_stderr = fit.slope_stderr;
  r.intercept = fit.intercept;
  if (!std::isfinite(r.fitted_slope)) throw std::runtime_error("fitted slope is not finite");
  return r;
}

struct CltReport {
  std::size_t N = 0;
  std::size_t R = 0;
  double ks_statistic = 0;
  double ks_p_value = 0;
  double sigma2_used = 0;
  double finite_n_variance_ratio = 0;  // s_N^2 / (N sigma^2), exact
  SampleMoments moments{};
  MardiaSkewness joint_skewness{};  // of (S_{N/2}, S_N) standardized
};

/// R replicates of (N sigma^2)^{-1/2} sum_{i<=N} (p(Z_i) - c_0), compared
/// with N(0,1). Only meaningful in the short-memory regime.
inline CltReport clt_experiment(const HermitePoly& p, const CovarianceModel& model, std::size_t N, std::size_t R,
                                std::uint64_t seed, unsigned threads = 0) {
  if (!hermite_rank(p)) throw DomainError("clt_experiment needs a nonconstant polynomial");
  if (!is_short_memory(p, model))
    throw PreconditionError("the central limit regime requires " + std::string(kSrdCondition) + "; rank " +
                            std::to_string(*hermite_rank(p)) + " at H = " + std::to_string(model.hurst()) +
                            " is not short-range dependent");
  if (R < 200) throw DomainError("clt_experiment needs R >= 200 replications");
  if (N < 2) throw DomainError("clt_experiment needs N >= 2");

  CltReport rep;
  rep.N = N;
  rep.R = R;
  rep.sigma2_used = static_cast<double>(breuer_major_sigma2(p, model));
  rep.finite_n_variance_ratio = static_cast<double>(partial_sum_variance(p, model, N) / (N * rep.sigma2_used));

  const double norm = 1.0 / std::sqrt(static_cast<double>(N) * rep.sigma2_used);
  const auto coeffs = coefficients_as<double>(hermite_to_monomial(p));
  const double mean = static_cast<double>(p.coeff(0));
  std::vector<std::array<double, 2>> joint(R);
  generate_paths(SimulationConfig{model, N, R, seed, threads}, [&](std::size_t r, std::span<const double> z) {
    CompensatedSum<double> s;
    double half = 0;
    for (std::size_t i = 0; i < N; ++i) {
      s += compensated_horner(coeffs, z[i]) - mean;
      if (i + 1 == N / 2) half = s.value();
    }
    joint[r] = {half * norm, s.value() * norm};
  });
  std::vector<double> total(R);
  for (std::size_t r = 0; r < R; ++r) total[r] = joint[r][1];
  rep.moments = sample_moments(total);
  const auto ks = ks_test(total, normal_cdf);
  rep.ks_statistic = ks.statistic;
  rep.ks_p_value = ks.p_value;
  rep.joint_skewness = mardia_skewness(joint);
  return rep;
}

enum class CounterexampleCase { a, b };

inline std::string to_string(CounterexampleCase c) { return c == CounterexampleCase::a ? "a" : "b"; }

struct CounterexampleVerdict {
  bool p_is_srd = false;
  bool qp_is_lrd = false;
  bool rank_drops = false;           // m' < m
  bool p_slope_matches = false;      // within Tolerances::slope of 1
  bool qp_slope_matches = false;     // within Tolerances::slope of (2H-2)m'+2
  bool qp_grows_faster = false;      // fitted Q(P) slope > fitted P slope
  bool dichotomy_held() const { return p_is_srd && qp_is_lrd && rank_drops && p_slope_matches && qp_slope_matches; }
};

struct CounterexampleReport {
  CounterexampleCase which = CounterexampleCase::a;
  unsigned m = 0;
  double hurst = 0;
  HermitePoly p;
  QSearchResult q;
  HermitePoly qp;
  GrowthReport p_growth;
  GrowthReport qp_growth;
  CounterexampleVerdict verdict;
  std::string narrative;
};

/// Checks the parameter constraints of each case; throws PreconditionError
/// quoting the violated inequality.
inline void check_counterexample_case(CounterexampleCase which, unsigned m, double hurst) {
  require_hurst(hurst);
  const double srd = (2.0 * hurst - 2.0) * m + 1.0;
  auto fail = [&](const std::string& what) {
    throw PreconditionError("case (" + to_string(which) + ") with m = " + std::to_string(m) + ", H = " +
                            std::to_string(hurst) + " violates " + what);
  };
  if (which == CounterexampleCase::a) {
    if (m < 4 || m % 2 != 0) fail("m >= 4 even");
    if (!(hurst > 0.75)) fail("H > 3/4");
  } else {
    if (m < 3 || m % 2 != 1) fail("m >= 3 odd");
  }
  if (!(srd < -kBoundaryTolerance)) fail(std::string(kSrdCondition) + " (value " + std::to_string(srd) + ")");
}

/// Builds P = H_m, finds Q (x^2 in case (a), x^3 in case (b)) and fits the
/// growth of both partial-sum variances on the fgn model with the given H.
inline CounterexampleReport counterexample_run(CounterexampleCase which, unsigned m, double hurst,
                                               const std::vector<std::uint64_t>& grid, GrowthMode mode,
                                               const std::optional<MonteCarloOptions>& mc = std::nullopt,
                                               const Tolerances& tol = {}) {
  check_counterexample_case(which, m, hurst);
  CounterexampleReport rep;
  rep.which = which;
  rep.m = m;
  rep.hurst = hurst;
  rep.p = HermitePoly::basis(m);
  const auto found = find_q(rep.p, hurst, 4);
  const unsigned expected_power = which == CounterexampleCase::a ? 2 : 3;
  if (!found || found->power != expected_power)
    throw std::logic_error("Q search did not return x^" + std::to_string(expected_power) + " for case (" +
                           to_string(which) + ")");
  rep.q = *found;
  rep.qp = compose(rep.q.q, rep.p);

  const auto model = CovarianceModel::fgn(hurst);
  rep.p_growth = fit_growth(rep.p, model, grid, mode, mc);
  rep.qp_growth = fit_growth(rep.qp, model, grid, mode, mc);

  auto& v = rep.verdict;
  v.p_is_srd = rep.p_growth.regime == DependenceRegime::srd;
  v.qp_is_lrd = rep.qp_growth.regime == DependenceRegime::lrd;
  v.rank_drops = rep.q.rank < m;
  v.p_slope_matches = std::abs(rep.p_growth.fitted_slope - rep.p_growth.theoretical_slope) <= tol.slope;
  v.qp_slope_matches = std::abs(rep.qp_growth.fitted_slope - rep.qp_growth.theoretical_slope) <= tol.slope;
  v.qp_grows_faster = rep.qp_growth.fitted_slope > rep.p_growth.fitted_slope;
  if (!(v.rank_drops && v.qp_is_lrd))
    throw std::logic_error("Q search returned a composition that is not long-range dependent");

  char buf[512];
  std::snprintf(buf, sizeof buf,
                "P = H%u has Hermite rank %u and is SRD at H = %.4g ((2H-2)m+1 = %.4g < 0); Q = x^%u gives Q(P) of "
                "rank m' = %u with (2H-2)m'+1 = %.4g > 0. Fitted growth exponents: P %.4f (theory 1), Q(P) %.4f "
                "(theory %.4g). The SRD sequence P(Z_i) therefore has an LRD instantaneous function, so it cannot be "
                "strong mixing.",
                m, m, hurst, (2 * hurst - 2) * m + 1, rep.q.power, rep.q.rank, (2 * hurst - 2) * rep.q.rank + 1,
                rep.p_growth.fitted_slope, rep.qp_growth.fitted_slope, rep.qp_growth.theoretical_slope);
  rep.narrative = buf;
  return rep;
}

struct ScanRow {
  unsigned m = 0;
  double hurst = 0;
  unsigned rank = 0;
  DependenceClass dependence{};
  std::optional<QSearchResult> q;  // searched only in SRD cells
  bool dichotomy_applies = false;
};

/// Rank, dependence class and Q-search outcome of P = H_m on every (m, H).
inline std::vector<ScanRow> dichotomy_scan(std::span<const unsigned> ms, std::span<const double> hursts,
                                           unsigned max_power = 6) {
  std::vector<ScanRow> rows;
  for (unsigned m : ms) {
    if (m == 0) throw DomainError("scan needs m >= 1");
    const HermitePoly p = HermitePoly::basis(m);
    for (double h : hursts) {
      ScanRow row;
      row.m = m;
      row.hurst = h;
      row.rank = *hermite_rank(p);
      row.dependence = classify(row.rank, h);
      if (row.dependence.classification == DependenceRegime::srd) {
        row.q = find_q(p, h, max_power);
        row.dichotomy_applies = row.q.has_value();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace hermrank
