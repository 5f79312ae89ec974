#pragma once

#include <Eigen/Dense>

#include "sdpd/reduced_form.hpp"

namespace sdpd {

// Mean absolute / squared estimation error over the locations where est is
// finite; NaN entries mark locations the estimator flagged and are skipped.
// Throws EmptySet when nothing is left and DataError on a length mismatch.
double ae(const Eigen::VectorXd& est, const Eigen::VectorXd& truth);
double ase(const Eigen::VectorXd& est, const Eigen::VectorXd& truth);

// Number of entries the metrics above would skip.
Eigen::Index excluded_count(const Eigen::VectorXd& est);

// Mean squared error of the first row of the transition matrix, the row
// every estimator under comparison can produce regardless of p and T.
double ase_row1(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth);
double ase_row1(const TransitionMatrix& estimate, const TransitionMatrix& truth);

}  // namespace sdpd
