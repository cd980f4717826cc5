#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "hermrank/experiments.hpp"
#include "hermrank/report_json.hpp"

namespace hermrank {
namespace {

std::vector<std::uint64_t> dyadic_grid(int lo, int hi) {
  std::vector<std::uint64_t> g;
  for (int e = lo; e <= hi; ++e) g.push_back(std::uint64_t{1} << e);
  return g;
}

TEST(Grid, Validation) {
  EXPECT_THROW(validate_grid(std::vector<std::uint64_t>{1, 2, 3}), DomainError);
  EXPECT_THROW(validate_grid(std::vector<std::uint64_t>{10, 20, 20, 2000}), DomainError);
  EXPECT_THROW(validate_grid(std::vector<std::uint64_t>{10, 20, 30, 900}), DomainError);
  EXPECT_NO_THROW(validate_grid(std::vector<std::uint64_t>{10, 20, 30, 1000}));
}

TEST(Grid, Geometric) {
  const auto g = geometric_grid(256, 65536, 9);
  EXPECT_EQ(g, dyadic_grid(8, 16));
  const auto h = geometric_grid(256, 65536, 8);
  EXPECT_EQ(h.size(), 8u);
  EXPECT_EQ(h.front(), 256u);
  EXPECT_EQ(h.back(), 65536u);
}

TEST(FitGrowth, ExactFgnLinearSlope) {
  const auto r = fit_growth(HermitePoly::basis(1), CovarianceModel::fgn(0.8), dyadic_grid(8, 16), GrowthMode::exact);
  EXPECT_NEAR(r.fitted_slope, 1.6, 0.001);
  EXPECT_NEAR(r.theoretical_slope, 1.6, 1e-12);
  EXPECT_EQ(r.regime, DependenceRegime::lrd);
  EXPECT_EQ(r.rank, 1u);
  EXPECT_LT(r.slope_stderr, 1e-6);
  for (double ratio : r.ratio_to_power) EXPECT_NEAR(ratio, 1.0, 1e-9);
}

TEST(FitGrowth, ExactSrdSlope) {
  const auto r = fit_growth(HermitePoly::basis(3), CovarianceModel::fgn(0.8), dyadic_grid(8, 16), GrowthMode::exact);
  EXPECT_NEAR(r.fitted_slope, 1.0, 0.05);
  EXPECT_EQ(r.theoretical_slope, 1.0);
  EXPECT_EQ(r.regime, DependenceRegime::srd);
}

TEST(FitGrowth, CompositionGrowsFasterThanInput) {
  const auto m = CovarianceModel::fgn(0.8);
  const auto p = fit_growth(HermitePoly::basis(3), m, dyadic_grid(8, 16), GrowthMode::exact);
  const auto qp = fit_growth(cube_hermite(3), m, dyadic_grid(8, 16), GrowthMode::exact);
  EXPECT_GT(qp.fitted_slope, p.fitted_slope + 0.2);
  EXPECT_NEAR(qp.theoretical_slope, 1.6, 1e-12);
  EXPECT_EQ(qp.regime, DependenceRegime::lrd);
}

TEST(FitGrowth, MonteCarloAgreesWithExact) {
  const auto m = CovarianceModel::fgn(0.8);
  const auto grid = dyadic_grid(5, 12);
  const HermitePoly p = HermitePoly::basis(2) + HermitePoly::basis(1);
  const auto exact = fit_growth(p, m, grid, GrowthMode::exact);
  const auto mc = fit_growth(p, m, grid, GrowthMode::monte_carlo, MonteCarloOptions{400, 17, 0});
  ASSERT_EQ(mc.variance_stderr.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_NEAR(mc.variances[i], exact.variances[i], 4 * mc.variance_stderr[i]) << "N = " << grid[i];
  EXPECT_EQ(mc.mode, GrowthMode::monte_carlo);
}

TEST(FitGrowth, Errors) {
  const auto m = CovarianceModel::fgn(0.8);
  EXPECT_THROW(fit_growth(HermitePoly::constant(1), m, dyadic_grid(8, 16), GrowthMode::exact), DomainError);
  EXPECT_THROW(fit_growth(HermitePoly::basis(1), m, {8, 16, 32}, GrowthMode::exact), DomainError);
  EXPECT_THROW(fit_growth(HermitePoly::basis(1), m, dyadic_grid(8, 16), GrowthMode::monte_carlo), DomainError);
}

TEST(CltExperiment, HermiteThreeStandardizedSums) {
  const auto r = clt_experiment(HermitePoly::basis(3), CovarianceModel::fgn(0.8), 1u << 12, 400, 21);
  EXPECT_GT(r.sigma2_used, 0);
  EXPECT_NEAR(r.moments.mean, 0.0, 4 / std::sqrt(400.0));
  // Finite-N variance sits below sigma^2 (ratio ~0.89 at N = 2^12).
  EXPECT_NEAR(r.moments.variance, r.finite_n_variance_ratio, 4 * std::sqrt(2 / 400.0) * r.finite_n_variance_ratio);
  EXPECT_GE(r.ks_statistic, 0);
  EXPECT_LE(r.ks_statistic, 1);
}

TEST(CltExperiment, WhiteNoiseIsExactlyGaussian) {
  const std::size_t R = 1000;
  const auto r = clt_experiment(HermitePoly::basis(1), CovarianceModel::white_noise(), 256, R, 5);
  EXPECT_EQ(r.sigma2_used, 1.0);
  EXPECT_EQ(r.finite_n_variance_ratio, 1.0);
  EXPECT_LT(r.ks_statistic, 1.63 / std::sqrt(static_cast<double>(R)));
  EXPECT_NEAR(r.moments.variance, 1.0, 0.1);
  EXPECT_GT(r.joint_skewness.p_value, 0.001);
}

TEST(CltExperiment, RefusesLongMemory) {
  try {
    clt_experiment(HermitePoly::basis(2), CovarianceModel::fgn(0.8), 1024, 200, 1);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("(2H-2)m+1<0"), std::string::npos);
  }
  EXPECT_THROW(clt_experiment(HermitePoly::basis(3), CovarianceModel::fgn(0.8), 1024, 100, 1), DomainError);
}

TEST(Counterexample, CaseB) {
  const auto r = counterexample_run(CounterexampleCase::b, 3, 0.8, dyadic_grid(8, 16), GrowthMode::exact);
  EXPECT_EQ(r.q.power, 3u);
  EXPECT_EQ(r.q.rank, 1u);
  EXPECT_EQ(r.qp, cube_hermite(3));
  EXPECT_TRUE(r.verdict.p_is_srd);
  EXPECT_TRUE(r.verdict.qp_is_lrd);
  EXPECT_TRUE(r.verdict.rank_drops);
  EXPECT_TRUE(r.verdict.p_slope_matches);
  EXPECT_TRUE(r.verdict.qp_grows_faster);
  EXPECT_NEAR(r.qp_growth.theoretical_slope, 1.6, 1e-12);
  EXPECT_FALSE(r.narrative.empty());
}

TEST(Counterexample, CaseA) {
  const auto r = counterexample_run(CounterexampleCase::a, 4, 0.8, dyadic_grid(8, 16), GrowthMode::exact);
  EXPECT_EQ(r.q.q, MonomialPoly::basis(2));
  EXPECT_EQ(r.q.rank, 2u);
  EXPECT_NEAR(r.qp_growth.theoretical_slope, 1.2, 1e-12);
  EXPECT_TRUE(r.verdict.rank_drops);
  EXPECT_TRUE(r.verdict.qp_grows_faster);
}

TEST(Counterexample, Preconditions) {
  auto expect_violation = [](CounterexampleCase c, unsigned m, double h, const std::string& quoted) {
    try {
      counterexample_run(c, m, h, dyadic_grid(8, 16), GrowthMode::exact);
      ADD_FAILURE() << "accepted m = " << m << ", H = " << h;
    } catch (const PreconditionError& e) {
      EXPECT_NE(std::string(e.what()).find(quoted), std::string::npos) << e.what();
    }
  };
  expect_violation(CounterexampleCase::a, 4, 0.7, "H > 3/4");
  expect_violation(CounterexampleCase::a, 4, 0.9, "(2H-2)m+1<0");  // 4 * (-0.2) + 1 > 0
  expect_violation(CounterexampleCase::a, 5, 0.8, "m >= 4 even");
  expect_violation(CounterexampleCase::b, 4, 0.8, "m >= 3 odd");
  expect_violation(CounterexampleCase::b, 3, 0.9, "(2H-2)m+1<0");
  EXPECT_THROW(counterexample_run(CounterexampleCase::b, 3, 1.0, dyadic_grid(8, 16), GrowthMode::exact), DomainError);
}

TEST(Scan, ParameterSpaceMap) {
  const std::vector<unsigned> ms{1, 2, 3, 4, 5, 6};
  std::vector<double> hs;
  for (int i = 0; i <= 8; ++i) hs.push_back(0.55 + 0.05 * i);
  const auto rows = dichotomy_scan(ms, hs, 6);
  ASSERT_EQ(rows.size(), ms.size() * hs.size());
  int applies = 0;
  for (const auto& row : rows) {
    if (row.m == 1) EXPECT_NE(row.dependence.classification, DependenceRegime::srd);
    if (row.m == 2 && row.dependence.classification == DependenceRegime::srd) EXPECT_FALSE(row.q);
    if (row.q) {
      ++applies;
      EXPECT_LT(row.q->rank, row.m);
      EXPECT_GT((2 * row.hurst - 2) * row.q->rank + 1, 0);
    }
    if (row.m == 2 && std::abs(row.hurst - 0.75) < 1e-9)
      EXPECT_EQ(row.dependence.classification, DependenceRegime::boundary);
  }
  EXPECT_GT(applies, 0);
  // (m = 5, H = 0.8): SRD, Q = x^3, m' = 1.
  for (const auto& row : rows)
    if (row.m == 5 && std::abs(row.hurst - 0.8) < 1e-9) {
      ASSERT_TRUE(row.q);
      EXPECT_EQ(row.q->power, 3u);
      EXPECT_EQ(row.q->rank, 1u);
    }
  const std::vector<unsigned> m5{5};
  const std::vector<double> h082{0.82};
  const auto single = dichotomy_scan(m5, h082, 6);
  ASSERT_TRUE(single.front().q);
  EXPECT_EQ(single.front().q->power, 3u);
  EXPECT_TRUE(single.front().dichotomy_applies);
}

TEST(Reports, JsonFieldNames) {
  const auto g = fit_growth(HermitePoly::basis(3), CovarianceModel::fgn(0.8), dyadic_grid(4, 12), GrowthMode::exact);
  const json j = to_json(g);
  for (const char* key : {"grid", "variances", "fitted_slope", "slope_stderr", "theoretical_slope", "regime", "mode"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["regime"], "SRD");
  EXPECT_EQ(j["mode"], "exact");
  const auto c = clt_experiment(HermitePoly::basis(1), CovarianceModel::white_noise(), 64, 200, 1);
  const json k = to_json(c);
  EXPECT_TRUE(k.contains("ks_statistic"));
  EXPECT_TRUE(k.contains("sigma2_used"));
}

TEST(Reports, PlotData) {
  const auto g = fit_growth(HermitePoly::basis(1), CovarianceModel::fgn(0.7), dyadic_grid(4, 11), GrowthMode::exact);
  std::ostringstream pts, fit;
  write_growth_points_csv(pts, g);
  write_growth_fit_csv(fit, g);
  EXPECT_TRUE(pts.str().starts_with("N,variance,log_N,log_variance\n"));
  const std::string points = pts.str();
  EXPECT_EQ(std::count(points.begin(), points.end(), '\n'), 9);
  EXPECT_TRUE(fit.str().starts_with("log_N,fitted_log_variance\n"));
}

}  // namespace
}  // namespace hermrank
