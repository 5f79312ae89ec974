#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdpd/estimator.hpp"
#include "sdpd/process_sim.hpp"
#include "sdpd/spatial_weights.hpp"

namespace sdpd {

enum class EstimatorKind { sdpd_known_w, sdpd_estimated_w, var_yule_walker };

std::string to_string(EstimatorKind k);

// One benchmark study: a fixed link matrix, fresh coefficients, scales and
// innovations per replication (unless fixed_lambda), and the requested
// estimators scored against the generating model.
struct McConfig {
  std::optional<WKind> w_kind = WKind::w1;  // generator, or
  std::string w_file;                       // path to a stored matrix
  Eigen::Index p = 10;
  Eigen::Index T = 100;
  int replications = 100;
  std::uint64_t master_seed = 1;
  Eigen::Index burn_in = 200;
  Normalization normalization = Normalization::l2_row;

  double lambda_low = -0.7;
  double lambda_high = 0.7;
  bool fixed_lambda = false;  // one coefficient draw shared by all replications

  double sigma_low = 0.5;
  double sigma_high = 1.5;
  CrossMode cross_mode = CrossMode::common_factor;
  double factor_loading = -0.7;
  int factor_index = 2;

  std::vector<EstimatorKind> estimators{EstimatorKind::sdpd_known_w};
  int threads = 0;  // 0 picks the hardware concurrency
};

// Everything scored in one replication. Metric values are NaN when that
// estimator failed (e.g. var_yule_walker with T <= p); `notes` records why.
struct McReplication {
  int rep = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> values;
  int degenerate_known_w = 0;
  int degenerate_estimated_w = 0;
  std::string notes;
};

struct McMetricSummary {
  std::string name;
  double mean, sd, median;
  int n_ok = 0;
  int n_fail = 0;
};

struct McSummary {
  std::vector<std::string> metric_names;  // column order of the raw table
  std::vector<McMetricSummary> metrics;
  std::vector<McReplication> raw;
  double wall_seconds = 0;
};

// State handed to the optional per-replication callback, invoked in
// replication order after all workers finish.
struct McArtifacts {
  int rep = 0;
  std::uint64_t seed = 0;
  Eigen::VectorXd lambda0_true;
  Eigen::VectorXd lambda1_true;
  std::optional<EstimationResult> known_w_estimate;
};

using McInspector = std::function<void(const McArtifacts&)>;

// Runs the study. Replications are distributed over a worker pool keyed by
// replication index; every random stream is derived from (master_seed, index)
// alone, so results do not depend on the thread count, and aggregation folds
// in index order.
McSummary run_monte_carlo(const McConfig& cfg, const McInspector& inspect = {});

// Seed layout, shared with the documentation: the link matrix uses
// derive_seed(master, 0), a fixed coefficient draw uses derive_seed(master, 1)
// and replication r uses derive_seed(master, 2 + r), from which the
// coefficient / sigma / innovation streams are derived with indices 0/1/2.
std::uint64_t mc_replication_seed(std::uint64_t master_seed, int rep);

}  // namespace sdpd
