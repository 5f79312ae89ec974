#include "sdpd/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "sdpd/csv_io.hpp"
#include "sdpd/errors.hpp"
#include "sdpd/metrics.hpp"
#include "sdpd/reduced_form.hpp"
#include "sdpd/rng.hpp"

namespace sdpd {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void append_note(std::string& notes, const std::string& note) {
  if (!notes.empty()) notes += ';';
  notes += note;
}

std::vector<std::string> metric_names_for(const McConfig& cfg) {
  std::vector<std::string> names;
  for (EstimatorKind k : cfg.estimators) {
    switch (k) {
      case EstimatorKind::sdpd_known_w:
        names.insert(names.end(),
                     {"ae_lambda0", "ae_lambda1", "ase_lambda0", "ase_lambda1",
                      "ase_row1_sdpd_known_w"});
        break;
      case EstimatorKind::sdpd_estimated_w:
        names.push_back("ase_row1_sdpd_estimated_w");
        break;
      case EstimatorKind::var_yule_walker:
        names.push_back("ase_row1_var");
        break;
    }
  }
  return names;
}

SpatialWeightMatrix study_w(const McConfig& cfg) {
  if (!cfg.w_file.empty()) {
    SpatialWeightMatrix w = read_weights_csv(cfg.w_file);
    if (w.p() != cfg.p) {
      throw BadSpec("run_monte_carlo(): stored W does not match p");
    }
    return w;
  }
  if (!cfg.w_kind) {
    throw BadSpec("run_monte_carlo(): no W source configured");
  }
  return gen_spatial_matrix(*cfg.w_kind, cfg.p,
                            derive_seed(cfg.master_seed, 0),
                            cfg.normalization);
}

struct RepOutcome {
  McReplication rep;
  McArtifacts artifacts;
};

RepOutcome run_one(const McConfig& cfg, const SpatialWeightMatrix& w, int r,
                   bool keep_artifacts) {
  RepOutcome out;
  McReplication& rec = out.rep;
  rec.rep = r;
  rec.seed = mc_replication_seed(cfg.master_seed, r);
  for (const std::string& name : metric_names_for(cfg)) {
    rec.values[name] = kNaN;
  }

  const std::uint64_t lambda_seed = cfg.fixed_lambda
                                        ? derive_seed(cfg.master_seed, 1)
                                        : derive_seed(rec.seed, 0);
  auto [lambda0, lambda1] = gen_coefficients(
      cfg.p, lambda_seed, cfg.lambda_low, cfg.lambda_high, &w);

  ErrorSpec spec;
  spec.sigma = draw_uniform_vector(cfg.p, derive_seed(rec.seed, 1),
                                   cfg.sigma_low, cfg.sigma_high);
  spec.cross_mode = cfg.cross_mode;
  spec.factor_loading = cfg.factor_loading;
  spec.factor_index = cfg.factor_index;
  spec.seed = derive_seed(rec.seed, 2);

  const SdpdModel model(w, lambda0, lambda1, spec);
  const PanelSeries y = simulate(model, cfg.T, cfg.burn_in);
  const TransitionMatrix a_true = build_reduced(w, lambda0, lambda1);

  out.artifacts.rep = r;
  out.artifacts.seed = rec.seed;
  if (keep_artifacts) {
    out.artifacts.lambda0_true = lambda0;
    out.artifacts.lambda1_true = lambda1;
  }

  for (EstimatorKind kind : cfg.estimators) {
    switch (kind) {
      case EstimatorKind::sdpd_known_w: {
        const EstimationResult est = estimate(y, w);
        rec.degenerate_known_w = static_cast<int>(est.n_degenerate());
        try {
          rec.values["ae_lambda0"] = ae(est.lambda0_hat, lambda0);
          rec.values["ase_lambda0"] = ase(est.lambda0_hat, lambda0);
        } catch (const EmptySet&) {
          append_note(rec.notes, "lambda0_all_degenerate");
        }
        try {
          rec.values["ae_lambda1"] = ae(est.lambda1_hat, lambda1);
          rec.values["ase_lambda1"] = ase(est.lambda1_hat, lambda1);
        } catch (const EmptySet&) {
          append_note(rec.notes, "lambda1_all_degenerate");
        }
        try {
          const TransitionMatrix a = build_reduced(
              w, est.lambda0_hat.unaryExpr([](double v) {
                return std::isfinite(v) ? v : 0.0;
              }),
              est.lambda1_hat.unaryExpr([](double v) {
                return std::isfinite(v) ? v : 0.0;
              }),
              TransitionProvenance::sdpd_known_w);
          rec.values["ase_row1_sdpd_known_w"] = ase_row1(a, a_true);
        } catch (const NumericalError& e) {
          append_note(rec.notes, std::string("known_w:") + e.what());
        }
        if (keep_artifacts) out.artifacts.known_w_estimate = est;
        break;
      }
      case EstimatorKind::sdpd_estimated_w: {
        try {
          const TransitionEstimate te = sdpd_transition_estimators(y, nullptr);
          rec.degenerate_estimated_w =
              static_cast<int>(te.estimation.n_degenerate());
          rec.values["ase_row1_sdpd_estimated_w"] =
              ase_row1(te.transition, a_true);
        } catch (const SdpdError& e) {
          append_note(rec.notes, std::string("estimated_w:") + e.what());
        }
        break;
      }
      case EstimatorKind::var_yule_walker: {
        try {
          rec.values["ase_row1_var"] = ase_row1(var_yule_walker(y), a_true);
        } catch (const NotComputable&) {
          append_note(rec.notes, "var_not_computable");
        }
        break;
      }
    }
  }
  return out;
}

McMetricSummary summarize(const std::string& name,
                          const std::vector<McReplication>& raw) {
  McMetricSummary s;
  s.name = name;
  std::vector<double> values;
  values.reserve(raw.size());
  for (const McReplication& r : raw) {
    const auto it = r.values.find(name);
    if (it == r.values.end() || !std::isfinite(it->second)) {
      ++s.n_fail;
      continue;
    }
    values.push_back(it->second);
  }
  s.n_ok = static_cast<int>(values.size());
  if (values.empty()) {
    s.mean = s.sd = s.median = kNaN;
    return s;
  }
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / values.size();
  double ss = 0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1
                 ? values[mid]
                 : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

}  // namespace

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::sdpd_known_w:
      return "sdpd_known_w";
    case EstimatorKind::sdpd_estimated_w:
      return "sdpd_estimated_w";
    case EstimatorKind::var_yule_walker:
      return "var_yule_walker";
  }
  return "unknown";
}

std::uint64_t mc_replication_seed(std::uint64_t master_seed, int rep) {
  return derive_seed(master_seed, 2 + static_cast<std::uint64_t>(rep));
}

McSummary run_monte_carlo(const McConfig& cfg, const McInspector& inspect) {
  if (cfg.replications < 1) {
    throw BadSpec("run_monte_carlo(): need at least one replication");
  }
  if (cfg.estimators.empty()) {
    throw BadSpec("run_monte_carlo(): no estimators requested");
  }
  if (cfg.T < 3) {
    throw BadSpec("run_monte_carlo(): sample moments need at least T = 3");
  }
  const auto t_start = std::chrono::steady_clock::now();

  const SpatialWeightMatrix w = study_w(cfg);
  const int n_rep = cfg.replications;
  const bool keep_artifacts = static_cast<bool>(inspect);

  std::vector<RepOutcome> outcomes(n_rep);
  std::vector<std::exception_ptr> failures(n_rep);
  std::atomic<int> next{0};
  const auto worker = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= n_rep) return;
      try {
        outcomes[r] = run_one(cfg, w, r, keep_artifacts);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };

  int n_threads = cfg.threads > 0
                      ? cfg.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_threads = std::max(1, std::min(n_threads, n_rep));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // Deterministic fold in replication order; the first failure surfaces here.
  for (int r = 0; r < n_rep; ++r) {
    if (failures[r]) std::rethrow_exception(failures[r]);
  }

  McSummary summary;
  summary.metric_names = metric_names_for(cfg);
  summary.raw.reserve(n_rep);
  for (int r = 0; r < n_rep; ++r) {
    summary.raw.push_back(std::move(outcomes[r].rep));
    if (inspect) inspect(outcomes[r].artifacts);
  }
  for (const std::string& name : summary.metric_names) {
    summary.metrics.push_back(summarize(name, summary.raw));
  }
  {
    // Degenerate-location counts ride along as plain metrics so they are
    // never silently dropped from reports.
    const auto count_summary = [n_rep](const std::string& name,
                                       std::vector<double> v) {
      McMetricSummary m;
      m.name = name;
      m.n_ok = n_rep;
      m.n_fail = 0;
      double sum = 0;
      for (double x : v) sum += x;
      m.mean = sum / n_rep;
      double ss = 0;
      for (double x : v) ss += (x - m.mean) * (x - m.mean);
      m.sd = n_rep > 1 ? std::sqrt(ss / (n_rep - 1)) : 0.0;
      std::sort(v.begin(), v.end());
      m.median = n_rep % 2 == 1 ? v[n_rep / 2]
                                : 0.5 * (v[n_rep / 2 - 1] + v[n_rep / 2]);
      return m;
    };
    std::vector<double> vk, vl;
    for (const McReplication& r : summary.raw) {
      vk.push_back(r.degenerate_known_w);
      vl.push_back(r.degenerate_estimated_w);
    }
    summary.metrics.push_back(count_summary("degenerate_known_w", vk));
    summary.metrics.push_back(count_summary("degenerate_estimated_w", vl));
  }

  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return summary;
}

}  // namespace sdpd
