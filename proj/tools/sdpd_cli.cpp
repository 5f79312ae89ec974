// Command-line front end: simulate panels, estimate coefficients, trace
// identification profiles, run benchmark studies and build reduced-form
// transition matrices. Exit codes: 0 success, 1 usage error, 2 bad input
// data, 3 numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sdpd/csv_io.hpp"
#include "sdpd/errors.hpp"
#include "sdpd/estimator.hpp"
#include "sdpd/metrics.hpp"
#include "sdpd/model_config.hpp"
#include "sdpd/moments.hpp"
#include "sdpd/monte_carlo.hpp"
#include "sdpd/process_sim.hpp"
#include "sdpd/reduced_form.hpp"

namespace {

struct SimulateArgs {
  std::string model_path;
  std::string out = "panel.csv";
  std::string w_out;
  std::int64_t T = -1;
  std::int64_t burn_in = -1;
  std::optional<std::uint64_t> seed;
  bool no_header = false;
};

struct EstimateArgs {
  std::string panel_path;
  std::string w_path;
  bool latent_w = false;
  bool center = false;
  std::string out = "estimate.csv";
  std::string format = "csv";
};

struct ProfileArgs {
  std::string panel_path;
  std::string w_path;
  std::int64_t location = 1;  // 1-based
  double grid_min = -3.0;
  double grid_max = 3.0;
  std::int64_t grid_n = 241;
  std::string out = "profile.csv";
};

struct BenchmarkArgs {
  std::string config_path;
  std::string out = "summary.csv";
  std::string raw;
  std::optional<std::uint64_t> seed;
  int threads = -1;
  bool fixed_lambda = false;
};

struct ReducedArgs {
  std::string panel_path;
  std::string model_path;
  std::string w_path;
  bool latent_w = false;
  bool var = false;
  bool report = false;
  std::string out = "transition.csv";
};

int run_simulate(const SimulateArgs& a) {
  sdpd::ModelDescriptor d = sdpd::read_model_descriptor(a.model_path);
  if (a.T > 0) d.T = a.T;
  if (a.burn_in >= 0) d.burn_in = a.burn_in;
  if (a.seed) d.seed = *a.seed;
  const sdpd::SdpdModel model = sdpd::build_model(d);
  const sdpd::PanelSeries y = sdpd::simulate(model, d.T, d.burn_in);
  sdpd::write_panel_csv(a.out, y, !a.no_header);
  if (!a.w_out.empty()) sdpd::write_weights_csv(a.w_out, model.w);
  std::cerr << "wrote " << y.T() << "x" << y.p() << " panel to " << a.out
            << '\n';
  return 0;
}

int run_estimate(const EstimateArgs& a) {
  const sdpd::PanelSeries y = sdpd::read_panel_csv(a.panel_path);
  const sdpd::SpatialWeightMatrix w = a.latent_w
                                          ? sdpd::estimate_latent_w(y)
                                          : sdpd::read_weights_csv(a.w_path);
  const sdpd::EstimationResult r = sdpd::estimate(y, w, a.center);
  if (a.format == "json") {
    sdpd::write_result_json(a.out, r);
  } else {
    sdpd::write_result_csv(a.out, r);
  }
  std::cerr << "estimated " << r.p() << " locations (" << r.n_degenerate()
            << " degenerate) -> " << a.out << '\n';
  return 0;
}

int run_profile(const ProfileArgs& a) {
  const sdpd::PanelSeries y = sdpd::read_panel_csv(a.panel_path);
  const sdpd::SpatialWeightMatrix w = sdpd::read_weights_csv(a.w_path);
  if (a.location < 1 || a.location > y.p()) {
    throw sdpd::BadSpec("profile: --location must be in 1.." +
                        std::to_string(y.p()));
  }
  if (a.grid_n < 2 || !(a.grid_min < a.grid_max)) {
    throw sdpd::BadSpec("profile: need --grid-min < --grid-max and >= 2 points");
  }
  std::vector<double> grid(a.grid_n);
  const double step = (a.grid_max - a.grid_min) / double(a.grid_n - 1);
  for (std::int64_t k = 0; k < a.grid_n; ++k) grid[k] = a.grid_min + step * k;

  const sdpd::LagCovariancePair cov = sdpd::sample_covariances(y);
  const sdpd::CorrelationProfile prof =
      sdpd::correlation_profile(cov, w, a.location - 1, grid);
  sdpd::write_profile_csv(a.out, prof, a.location - 1);
  return 0;
}

int run_benchmark(const BenchmarkArgs& a) {
  sdpd::McConfig cfg = sdpd::read_mc_config(a.config_path);
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.threads >= 0) cfg.threads = a.threads;
  if (a.fixed_lambda) cfg.fixed_lambda = true;
  const sdpd::McSummary s = sdpd::run_monte_carlo(cfg);
  sdpd::write_summary_csv(a.out, s);
  if (!a.raw.empty()) sdpd::write_raw_csv(a.raw, s);
  std::cerr << s.raw.size() << " replications in " << s.wall_seconds
            << "s -> " << a.out << '\n';
  return 0;
}

int run_reduced(const ReducedArgs& a) {
  sdpd::TransitionMatrix t;
  if (!a.model_path.empty()) {
    const sdpd::SdpdModel model =
        sdpd::build_model(sdpd::read_model_descriptor(a.model_path));
    t = sdpd::build_reduced(model.w, model.lambda0, model.lambda1);
  } else {
    const sdpd::PanelSeries y = sdpd::read_panel_csv(a.panel_path);
    if (a.var) {
      t = sdpd::var_yule_walker(y);
    } else if (a.latent_w) {
      t = sdpd::sdpd_transition_estimators(y, nullptr).transition;
    } else {
      const sdpd::SpatialWeightMatrix w = sdpd::read_weights_csv(a.w_path);
      t = sdpd::sdpd_transition_estimators(y, &w).transition;
    }
  }
  sdpd::write_transition_csv(a.out, t);
  if (a.report) {
    const sdpd::RepresentabilityReport rep = sdpd::check_representable(t);
    nlohmann::json j;
    j["diagonalizable"] = rep.diagonalizable;
    j["eigen_real"] = rep.eigen_real;
    j["distinct"] = rep.distinct;
    j["eigenvector_condition"] = rep.eigenvector_condition;
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : rep.multiplicities) {
      clusters.push_back({{"re", c.value.real()},
                          {"im", c.value.imag()},
                          {"algebraic", c.algebraic},
                          {"geometric", c.geometric}});
    }
    j["eigenvalues"] = std::move(clusters);
    std::cout << j.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Stationary spatial dynamic panel toolkit: simulation, per-location "
      "generalized Yule-Walker estimation, benchmarks"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand(
      "simulate", "Draw a panel from a JSON model description");
  c_sim->add_option("--model", sim.model_path, "model descriptor (JSON)")
      ->required();
  c_sim->add_option("--T", sim.T, "override the number of periods");
  c_sim->add_option("--burn-in", sim.burn_in, "override the burn-in length");
  c_sim->add_option("--seed", sim.seed, "override the master seed");
  c_sim->add_option("--out", sim.out, "panel CSV path");
  c_sim->add_option("--w-out", sim.w_out, "also store the W actually used");
  c_sim->add_flag("--no-header", sim.no_header, "omit the loc_* header row");

  EstimateArgs est;
  CLI::App* c_est = app.add_subcommand(
      "estimate", "Estimate per-location coefficients from a panel");
  c_est->add_option("--panel", est.panel_path, "panel CSV")->required();
  CLI::Option* est_w = c_est->add_option("--w", est.w_path, "link matrix CSV");
  CLI::Option* est_latent = c_est->add_flag(
      "--latent-w", est.latent_w, "recover W from lag-0 correlations instead");
  est_w->excludes(est_latent);
  c_est->add_flag("--center", est.center, "center the panel before moments");
  c_est->add_option("--out", est.out, "output path");
  c_est->add_option("--format", est.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  ProfileArgs prof;
  CLI::App* c_prof = app.add_subcommand(
      "profile", "Trace the implied autoregressive coefficient over a grid "
                 "of spatial coefficients for one location");
  c_prof->add_option("--panel", prof.panel_path, "panel CSV")->required();
  c_prof->add_option("--w", prof.w_path, "link matrix CSV")->required();
  c_prof->add_option("--location", prof.location, "location index (1-based)")
      ->required();
  c_prof->add_option("--grid-min", prof.grid_min, "grid lower end");
  c_prof->add_option("--grid-max", prof.grid_max, "grid upper end");
  c_prof->add_option("--grid-n", prof.grid_n, "number of grid points");
  c_prof->add_option("--out", prof.out, "profile CSV path");

  BenchmarkArgs bench;
  CLI::App* c_bench = app.add_subcommand(
      "benchmark", "Monte Carlo study driven by a JSON config");
  c_bench->add_option("--config", bench.config_path, "study config (JSON)")
      ->required();
  c_bench->add_option("--out", bench.out, "summary CSV path");
  c_bench->add_option("--raw", bench.raw, "per-replication CSV path");
  c_bench->add_option("--seed", bench.seed, "override the master seed");
  c_bench->add_option("--threads", bench.threads,
                      "worker threads (0 = hardware)");
  c_bench->add_flag("--fixed-lambda", bench.fixed_lambda,
                    "one coefficient draw shared by all replications");

  ReducedArgs red;
  CLI::App* c_red = app.add_subcommand(
      "reduced", "Build a reduced-form transition matrix");
  CLI::Option* red_panel = c_red->add_option("--panel", red.panel_path,
                                             "panel CSV (estimation modes)");
  CLI::Option* red_model = c_red->add_option(
      "--model", red.model_path, "model descriptor (true transition)");
  red_model->excludes(red_panel);
  c_red->add_option("--w", red.w_path, "known link matrix CSV");
  c_red->add_flag("--latent-w", red.latent_w, "recover W from correlations");
  c_red->add_flag("--var", red.var, "first-order VAR moment estimator");
  c_red->add_flag("--report", red.report,
                  "print a representability report to stdout (JSON)");
  c_red->add_option("--out", red.out, "transition CSV path");

  try {
    app.parse(argc, argv);
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_est->parsed()) {
      if (!est.latent_w && est.w_path.empty()) {
        std::cerr << "estimate: give --w FILE or --latent-w\n";
        return 1;
      }
      return run_estimate(est);
    }
    if (c_prof->parsed()) return run_profile(prof);
    if (c_bench->parsed()) return run_benchmark(bench);
    if (c_red->parsed()) {
      if (red.model_path.empty()) {
        if (red.panel_path.empty()) {
          std::cerr << "reduced: give --panel FILE or --model FILE\n";
          return 1;
        }
        if (!red.var && !red.latent_w && red.w_path.empty()) {
          std::cerr << "reduced: pick one of --w FILE, --latent-w, --var\n";
          return 1;
        }
      }
      return run_reduced(red);
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const sdpd::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const sdpd::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
