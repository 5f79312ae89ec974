#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "sdpd/estimator.hpp"
#include "sdpd/moments.hpp"
#include "sdpd/panel.hpp"
#include "sdpd/spatial_weights.hpp"

namespace sdpd {

enum class TransitionProvenance {
  true_model,
  sdpd_known_w,
  sdpd_estimated_w,
  var_yule_walker,
};

// Reduced-form transition matrix A of y_t = A y_{t-1} + innovation, tagged
// with how it was obtained.
struct TransitionMatrix {
  Eigen::MatrixXd entries;
  TransitionProvenance provenance = TransitionProvenance::true_model;

  Eigen::Index p() const { return entries.rows(); }
};

std::string to_string(TransitionProvenance p);

// A = S^{-1} diag(lambda1) S with S = I - diag(lambda0) W. The eigenvalues
// of the result are exactly the entries of lambda1. Throws NearSingular when
// S is too ill conditioned to invert reliably.
TransitionMatrix build_reduced(
    const SpatialWeightMatrix& w, const Eigen::VectorXd& lambda0,
    const Eigen::VectorXd& lambda1,
    TransitionProvenance provenance = TransitionProvenance::true_model);

// Proxy link matrix recovered from the panel alone: the lag-0 sample
// correlation matrix with its diagonal zeroed and rows L2-normalized. The
// numerical rank is reported through rank_out, not enforced.
SpatialWeightMatrix estimate_latent_w(const PanelSeries& y,
                                      Eigen::Index* rank_out = nullptr);

// Classic first-order VAR moment estimator A = sigma1 sigma0^{-1}. Needs
// more periods than locations; throws NotComputable when T <= p or when
// sigma0 is numerically singular.
TransitionMatrix var_yule_walker(const PanelSeries& y);
TransitionMatrix var_yule_walker_from_cov(const LagCovariancePair& cov);

struct TransitionEstimate {
  TransitionMatrix transition;
  SpatialWeightMatrix w_used;
  EstimationResult estimation;
};

// Estimates per-location coefficients and plugs them into build_reduced,
// against the supplied W (known-links variant) or against estimate_latent_w
// of the panel when known_w is null. Locations flagged by the estimator
// enter the plug-in step with coefficient zero.
TransitionEstimate sdpd_transition_estimators(
    const PanelSeries& y, const SpatialWeightMatrix* known_w = nullptr);

struct EigenvalueCluster {
  std::complex<double> value;
  int algebraic = 0;
  int geometric = 0;
};

// Whether a transition matrix admits the S^{-1} diag(lambda1) S form at all:
// it must be diagonalizable with real eigenvalues, and distinct eigenvalues
// pin the representation down uniquely.
struct RepresentabilityReport {
  bool diagonalizable = false;
  bool eigen_real = false;
  bool distinct = false;
  double eigenvector_condition = 0;
  std::vector<EigenvalueCluster> multiplicities;
};

RepresentabilityReport check_representable(const TransitionMatrix& a);

}  // namespace sdpd
