#pragma once

// Command execution behind the hermrank executable. run_command() turns a
// finalized RunConfig into a JSON report and writes any side files (paths,
// plot data) the config names.

#include <fstream>
#include <ostream>
#include <string>

#include "hermrank/experiments.hpp"
#include "hermrank/poly_parse.hpp"
#include "hermrank/report_json.hpp"
#include "hermrank/run_config.hpp"
#include "hermrank/simulator.hpp"

namespace hermrank {

namespace detail {

inline CovarianceModel model_from(const RunConfig& c) {
  const auto family = c.get<std::string>("model");
  if (family == "white_noise") return CovarianceModel::white_noise();
  const double h = c.get<double>("hurst");
  if (family == "fgn") return CovarianceModel::fgn(h);
  const auto kind = c.get<std::string>("sv") == "log" ? SlowlyVaryingKind::logarithmic : SlowlyVaryingKind::constant;
  return CovarianceModel::power_law(h, {kind, c.get<double>("sv_scale")});
}

inline std::uint64_t seed_from(const RunConfig& c) {
  if (!c.has("seed")) throw ConfigError(c.command() + " is stochastic: --seed is required");
  return c.get<std::uint64_t>("seed");
}

inline std::optional<MonteCarloOptions> mc_from(const RunConfig& c, unsigned threads) {
  if (c.get<std::string>("mode") != "monte_carlo") return std::nullopt;
  return MonteCarloOptions{c.get<std::size_t>("reps"), seed_from(c), threads};
}

inline GrowthMode mode_from(const RunConfig& c) {
  return c.get<std::string>("mode") == "monte_carlo" ? GrowthMode::monte_carlo : GrowthMode::exact;
}

inline std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

inline void write_plot_data(const std::string& prefix, const GrowthReport& r) {
  auto points = open_output(prefix + "_points.csv");
  write_growth_points_csv(points, r);
  auto fit = open_output(prefix + "_fit.csv");
  write_growth_fit_csv(fit, r);
}

inline json polynomial_json(const HermitePoly& p) {
  const auto rank = hermite_rank(p);
  return json{{"hermite", p.to_string()},
              {"coefficients", coefficients_json(p)},
              {"monomial", hermite_to_monomial(p).to_string()},
              {"degree", p.degree()},
              {"rank", rank ? json(*rank) : json(nullptr)}};
}

inline unsigned nonconstant_rank(const HermitePoly& p) {
  const auto rank = hermite_rank(p);
  if (!rank) throw DomainError("the polynomial is constant and has no Hermite rank");
  return *rank;
}

}  // namespace detail

/// Runs a finalized config. `threads` = 0 means default_thread_count().
/// Warnings (e.g. a boundary classification) go to `warn`.
inline json run_command(const RunConfig& c, unsigned threads, std::ostream& warn) {
  using namespace detail;
  const std::string& cmd = c.command();
  json result;

  if (cmd == "expand") {
    const auto p = parse_polynomial(c.get<std::string>("poly"));
    result = polynomial_json(p);
    const auto mom = gaussian_moments(p);
    result["mean"] = mom.mean.str();
    result["variance"] = mom.variance.str();
  } else if (cmd == "rank") {
    const auto p = parse_polynomial(c.get<std::string>("poly"));
    const auto rank = hermite_rank(p);
    result = {{"hermite", p.to_string()}, {"rank", rank ? json(*rank) : json(nullptr)}, {"degree", p.degree()}};
  } else if (cmd == "compose") {
    const auto p = parse_polynomial(c.get<std::string>("p"));
    const auto q = parse_monomial(c.get<std::string>("q"));
    const auto qp = compose(q, p);
    const auto rp = hermite_rank(p);
    result = polynomial_json(qp);
    result["p"] = p.to_string();
    result["q"] = q.to_string();
    result["rank_p"] = rp ? json(*rp) : json(nullptr);
  } else if (cmd == "classify") {
    const auto p = parse_polynomial(c.get<std::string>("poly"));
    const double h = c.get<double>("hurst");
    require_hurst(h);
    const unsigned rank = nonconstant_rank(p);
    const auto cls = classify(rank, h);
    const auto growth = theoretical_exponent(rank, h);
    if (cls.classification == DependenceRegime::boundary)
      warn << "warning: (2H-2)m+1 = " << cls.exponent_value
           << " is at the SRD/LRD boundary; neither the CLT nor the non-central limit applies\n";
    result = {{"hermite", p.to_string()},
              {"rank", rank},
              {"hurst", h},
              {"regime", to_string(cls.classification)},
              {"exponent_value", cls.exponent_value},
              {"growth_exponent", growth.value}};
  } else if (cmd == "find-q") {
    const auto p = parse_polynomial(c.get<std::string>("poly"));
    const double h = c.get<double>("hurst");
    require_hurst(h);
    const auto found = find_q(p, h, static_cast<unsigned>(c.get<std::uint64_t>("max_power")));
    result = {{"hermite", p.to_string()}, {"rank", nonconstant_rank(p)}, {"hurst", h}};
    result["q"] = found ? to_json(*found) : json(nullptr);
    result["qp"] = found ? json(compose(found->q, p).to_string()) : json(nullptr);
    result["dichotomy_applies"] = found.has_value();
  } else if (cmd == "simulate") {
    const auto model = model_from(c);
    SimulationConfig sim{model, c.get<std::size_t>("n"), c.get<std::size_t>("reps"), seed_from(c), threads};
    PathBatch batch = sample_paths(sim);
    if (c.has("poly")) batch = subordinate(std::move(batch), parse_polynomial(c.get<std::string>("poly")));
    const auto spectrum = embedding_spectrum(model, sim.length);
    result = {{"model", to_json(model)},
              {"embedding", {{"size", spectrum.eigenvalues.size()},
                             {"min_eigenvalue", spectrum.min},
                             {"max_eigenvalue", spectrum.max},
                             {"negative_mass", spectrum.negative_mass}}},
              {"z", {{"mean", sample_moments(batch.z).mean}, {"variance", sample_moments(batch.z).variance}}}};
    if (batch.subordinated())
      result["x"] = {{"mean", sample_moments(batch.x).mean}, {"variance", sample_moments(batch.x).variance}};
    if (c.has("paths")) {
      const auto path = c.get<std::string>("paths");
      if (c.get<std::string>("paths_format") == "binary") {
        auto out = open_output(path, std::ios::out | std::ios::binary);
        write_paths_binary(out, batch);
      } else {
        auto out = open_output(path);
        write_paths_csv(out, batch);
      }
    }
  } else if (cmd == "variance-growth") {
    const auto p = parse_polynomial(c.get<std::string>("poly"));
    const auto model = model_from(c);
    const auto r = fit_growth(p, model, c.get<std::vector<std::uint64_t>>("grid"), mode_from(c), mc_from(c, threads));
    result = to_json(r);
    result["model"] = to_json(model);
    result["slope_matches"] = std::abs(r.fitted_slope - r.theoretical_slope) <= c.get<double>("slope_tol");
    if (c.has("plot_data")) write_plot_data(c.get<std::string>("plot_data"), r);
  } else if (cmd == "clt-check") {
    const auto p = parse_polynomial(c.get<std::string>("poly"));
    const auto model = model_from(c);
    const auto r = clt_experiment(p, model, c.get<std::size_t>("n"), c.get<std::size_t>("reps"), seed_from(c),
                                  threads);
    result = to_json(r);
    result["model"] = to_json(model);
    result["within_tolerance"] = r.ks_statistic < c.get<double>("ks_tol");
  } else if (cmd == "counterexample") {
    const auto which = c.get<std::string>("case") == "a" ? CounterexampleCase::a : CounterexampleCase::b;
    const auto m = c.get<std::uint64_t>("m");
    if (m > kDefaultDegreeCap) throw DomainError("m must not exceed the degree cap");
    Tolerances tol;
    tol.slope = c.get<double>("slope_tol");
    const auto r = counterexample_run(which, static_cast<unsigned>(m), c.get<double>("hurst"),
                                      c.get<std::vector<std::uint64_t>>("grid"), mode_from(c), mc_from(c, threads),
                                      tol);
    result = to_json(r);
    if (c.has("plot_data")) {
      write_plot_data(c.get<std::string>("plot_data") + "_p", r.p_growth);
      write_plot_data(c.get<std::string>("plot_data") + "_qp", r.qp_growth);
    }
  } else if (cmd == "scan") {
    const auto ms64 = c.get<std::vector<std::uint64_t>>("ms");
    std::vector<unsigned> ms;
    for (auto m : ms64) {
      if (m > kDefaultDegreeCap) throw DomainError("scan ranks must not exceed the degree cap");
      ms.push_back(static_cast<unsigned>(m));
    }
    const auto hursts = c.get<std::vector<double>>("hursts");
    for (double h : hursts) require_hurst(h);
    const auto rows = dichotomy_scan(ms, hursts, static_cast<unsigned>(c.get<std::uint64_t>("max_power")));
    result = json::array();
    for (const auto& row : rows) result.push_back(to_json(row));
  } else {
    throw ConfigError("unknown command '" + cmd + "'");
  }
  return json{{"command", cmd}, {"config", c.to_json()}, {"result", result}};
}

}  // namespace hermrank
