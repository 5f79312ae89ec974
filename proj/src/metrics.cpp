#include "sdpd/metrics.hpp"

#include <cmath>

#include "sdpd/errors.hpp"

namespace sdpd {

namespace {

double mean_error(const Eigen::VectorXd& est, const Eigen::VectorXd& truth,
                  bool squared, const char* where) {
  if (est.size() != truth.size()) {
    throw DataError(std::string(where) + ": length mismatch");
  }
  if (!truth.allFinite()) {
    throw DataError(std::string(where) + ": truth contains non-finite values");
  }
  double sum = 0;
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < est.size(); ++i) {
    if (!std::isfinite(est(i))) continue;  // flagged location, skip and count
    const double e = est(i) - truth(i);
    sum += squared ? e * e : std::abs(e);
    ++n;
  }
  if (n == 0) {
    throw EmptySet(std::string(where) +
                   ": every location was excluded as degenerate");
  }
  return sum / static_cast<double>(n);
}

}  // namespace

double ae(const Eigen::VectorXd& est, const Eigen::VectorXd& truth) {
  return mean_error(est, truth, false, "ae()");
}

double ase(const Eigen::VectorXd& est, const Eigen::VectorXd& truth) {
  return mean_error(est, truth, true, "ase()");
}

Eigen::Index excluded_count(const Eigen::VectorXd& est) {
  Eigen::Index n = 0;
  for (Eigen::Index i = 0; i < est.size(); ++i) {
    if (!std::isfinite(est(i))) ++n;
  }
  return n;
}

double ase_row1(const Eigen::MatrixXd& estimate, const Eigen::MatrixXd& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols() ||
      estimate.rows() == 0) {
    throw DataError("ase_row1(): dimension mismatch");
  }
  const Eigen::RowVectorXd diff = estimate.row(0) - truth.row(0);
  return diff.squaredNorm() / static_cast<double>(diff.size());
}

double ase_row1(const TransitionMatrix& estimate, const TransitionMatrix& truth) {
  return ase_row1(estimate.entries, truth.entries);
}

}  // namespace sdpd
