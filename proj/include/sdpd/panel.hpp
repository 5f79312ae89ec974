#pragma once

#include <Eigen/Dense>

namespace sdpd {

// Observed panel: row t holds the p-vector y_t, t = 1..T in time order.
struct PanelSeries {
  Eigen::MatrixXd values;

  Eigen::Index T() const { return values.rows(); }
  Eigen::Index p() const { return values.cols(); }
};

}  // namespace sdpd
