#pragma once

#include <Eigen/Dense>

#include "sdpd/panel.hpp"
#include "sdpd/process_sim.hpp"

namespace sdpd {

enum class CovSource { sample, population };

// Lag-0 and lag-1 second moments of the panel. sigma0 is symmetric positive
// semidefinite; sigma1 has rows indexed by the current period, i.e.
// sigma1(i, j) pairs y_{t,i} with y_{t-1,j}.
struct LagCovariancePair {
  Eigen::MatrixXd sigma0;
  Eigen::MatrixXd sigma1;
  CovSource source = CovSource::sample;

  Eigen::Index p() const { return sigma0.rows(); }
};

// sigma0 = (T-1)^{-1} sum_{t=1..T} y_t y_t', symmetrized, and
// sigma1 = (T-2)^{-1} sum_{t=2..T} y_t y_{t-1}'. The process is mean zero by
// construction, so centering is off by default. Throws TooShort for T < 3.
LagCovariancePair sample_covariances(const PanelSeries& y,
                                     bool center = false);

// Exact stationary covariances of the model: the reduced-form transition
// A = S^{-1} diag(lambda1) S with S the spatial filter, the transformed
// innovation covariance S^{-1} cov(eps) S^{-T}, and the solution of the
// stationary equation sigma0 = A sigma0 A' + S^{-1} cov(eps) S^{-T},
// sigma1 = A sigma0.
LagCovariancePair population_covariances(const SdpdModel& model);

}  // namespace sdpd
