#pragma once

// JSON and CSV serialization of experiment reports. Field names are stable:
// downstream tooling reads grid, variances, fitted_slope, slope_stderr,
// theoretical_slope, regime, mode, ks_statistic and sigma2_used by name.

#include <cmath>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "hermrank/covariance.hpp"
#include "hermrank/experiments.hpp"

namespace hermrank {

using json = nlohmann::json;

inline json coefficients_json(const HermitePoly& p) {
  json c = json::array();
  for (const auto& v : p.coeffs()) c.push_back(v.str());
  return c;
}

inline json to_json(const CovarianceModel& m) {
  json j{{"family", to_string(m.family())}, {"hurst", m.hurst()}};
  if (m.family() == CovarianceFamily::power_law)
    j["slowly_varying"] = {{"kind", to_string(m.slowly_varying().kind)}, {"scale", m.slowly_varying().scale}};
  return j;
}

inline json to_json(const GrowthReport& r) {
  json j{{"grid", r.grid},
         {"variances", r.variances},
         {"fitted_slope", r.fitted_slope},
         {"slope_stderr", r.slope_stderr},
         {"intercept", r.intercept},
         {"theoretical_slope", r.theoretical_slope},
         {"rank", r.rank},
         {"regime", to_string(r.regime)},
         {"mode", to_string(r.mode)},
         {"ratio_to_power", r.ratio_to_power}};
  if (!r.variance_stderr.empty()) j["variance_stderr"] = r.variance_stderr;
  return j;
}

inline json to_json(const CltReport& r) {
  return json{{"N", r.N},
              {"R", r.R},
              {"ks_statistic", r.ks_statistic},
              {"ks_p_value", r.ks_p_value},
              {"sigma2_used", r.sigma2_used},
              {"finite_n_variance_ratio", r.finite_n_variance_ratio},
              {"mean", r.moments.mean},
              {"variance", r.moments.variance},
              {"skewness", r.moments.skewness},
              {"kurtosis", r.moments.kurtosis},
              {"joint_mardia_skewness", {{"b1", r.joint_skewness.b1},
                                         {"statistic", r.joint_skewness.statistic},
                                         {"p_value", r.joint_skewness.p_value}}}};
}

inline json to_json(const QSearchResult& q) {
  return json{{"q", q.q.to_string()}, {"power", q.power}, {"rank", q.rank}};
}

inline json to_json(const CounterexampleReport& r) {
  const auto& v = r.verdict;
  return json{{"case", to_string(r.which)},
              {"m", r.m},
              {"hurst", r.hurst},
              {"p", r.p.to_string()},
              {"q", to_json(r.q)},
              {"qp", r.qp.to_string()},
              {"p_growth", to_json(r.p_growth)},
              {"qp_growth", to_json(r.qp_growth)},
              {"verdict", {{"p_is_srd", v.p_is_srd},
                           {"qp_is_lrd", v.qp_is_lrd},
                           {"rank_drops", v.rank_drops},
                           {"p_slope_matches", v.p_slope_matches},
                           {"qp_slope_matches", v.qp_slope_matches},
                           {"qp_grows_faster", v.qp_grows_faster},
                           {"dichotomy_held", v.dichotomy_held()}}},
              {"narrative", r.narrative}};
}

inline json to_json(const ScanRow& row) {
  json j{{"m", row.m},
         {"hurst", row.hurst},
         {"rank", row.rank},
         {"regime", to_string(row.dependence.classification)},
         {"exponent_value", row.dependence.exponent_value},
         {"dichotomy_applies", row.dichotomy_applies}};
  j["q"] = row.q ? to_json(*row.q) : json(nullptr);
  return j;
}

/// Plot data: one row per grid point with N, s_N^2 and their logarithms.
inline void write_growth_points_csv(std::ostream& os, const GrowthReport& r) {
  os << "N,variance,log_N,log_variance\n";
  char buf[160];
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g,%.17g\n", static_cast<unsigned long long>(r.grid[i]),
                  r.variances[i], std::log(static_cast<double>(r.grid[i])), std::log(r.variances[i]));
    os << buf;
  }
}

/// Fitted line sidecar: the least-squares line evaluated at each log N.
inline void write_growth_fit_csv(std::ostream& os, const GrowthReport& r) {
  os << "log_N,fitted_log_variance\n";
  char buf[96];
  for (auto N : r.grid) {
    const double x = std::log(static_cast<double>(N));
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x, r.intercept + r.fitted_slope * x);
    os << buf;
  }
}

}  // namespace hermrank
