#pragma once

#include <Eigen/Dense>
#include <string>

#include "sdpd/estimator.hpp"
#include "sdpd/moments.hpp"
#include "sdpd/monte_carlo.hpp"
#include "sdpd/panel.hpp"
#include "sdpd/reduced_form.hpp"
#include "sdpd/spatial_weights.hpp"

namespace sdpd {

// Plain numeric CSV. Lines starting with '#' are comments and are skipped on
// read. Values are written with 17 significant digits so that a round trip
// reproduces the doubles exactly.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      int precision = 17);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Link matrix: p x p grid, no header. The reader rejects a nonzero diagonal
// (tolerance 1e-12) and detects the normalization from the row norms.
void write_weights_csv(const std::string& path, const SpatialWeightMatrix& w);
SpatialWeightMatrix read_weights_csv(const std::string& path);

// Panel: T x p grid with an optional "loc_1,...,loc_p" header row; the
// reader detects whether the first line is a header.
void write_panel_csv(const std::string& path, const PanelSeries& y,
                     bool header = true);
PanelSeries read_panel_csv(const std::string& path);

// Transition matrix with a leading "# provenance: ..." comment line.
void write_transition_csv(const std::string& path, const TransitionMatrix& a);
TransitionMatrix read_transition_csv(const std::string& path);

// One row per location: i (1-based), lambda0_hat, lambda1_hat, root1, root2,
// res1, res2, flag.
void write_result_csv(const std::string& path, const EstimationResult& r);
void write_result_json(const std::string& path, const EstimationResult& r);

// Grid profile with the stationary points and the selected solution recorded
// in comment lines above the data.
void write_profile_csv(const std::string& path, const CorrelationProfile& prof,
                       Eigen::Index location);

// Two labelled blocks, lag 0 then lag 1.
void write_covariances_csv(const std::string& path,
                           const LagCovariancePair& cov);

// metric, mean, sd, median, n_ok, n_fail; metric values at 6 significant
// digits. The raw table keeps full precision so that mean and sd can be
// recomputed from it exactly.
void write_summary_csv(const std::string& path, const McSummary& s);
void write_raw_csv(const std::string& path, const McSummary& s);

std::string to_string(LocationFlag f);

}  // namespace sdpd
