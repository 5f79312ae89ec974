#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sdpd/moments.hpp"
#include "sdpd/spatial_weights.hpp"

namespace sdpd {

// Scalar moments of location i against its neighbour weight vector w_i:
//   a0 = e_i' sigma0 e_i            a1 = e_i' sigma1 e_i
//   a2 = e_i' (sigma1' - sigma1) w_i
//   b0 = -2 e_i' sigma0 w_i         b1 = -e_i' (sigma1 + sigma1') w_i
//   b2 = -2 e_i' sigma1 w_i
//   c0 = w_i' sigma0 w_i            c1 = w_i' sigma1 w_i
// The quadratics a0 + b0 x + c0 x^2 and a1 + b1 x + c1 x^2 are the variance
// and lag-1 autocovariance of the filtered coordinate y_{t,i} - x w_i' y_t.
struct LocationMoments {
  double a0 = 0, a1 = 0, a2 = 0;
  double b0 = 0, b1 = 0, b2 = 0;
  double c0 = 0, c1 = 0;
};

// t0 + t1 x + t2 x^2 = 0, the stationarity condition whose real roots are
// the candidate spatial coefficients of one location.
struct QuadraticCoefficients {
  double t0 = 0, t1 = 0, t2 = 0;
};

enum class LocationFlag { ok, unidentified, no_real_root, degenerate_variance };

// Per-location evidence kept alongside the point estimates; root1/root2 are
// the candidate spatial coefficients in ascending order, residual1/residual2
// the squared norms of the fitting-identity residual at each candidate.
struct LocationDiagnostics {
  LocationFlag flag = LocationFlag::ok;
  double root1, root2;
  double residual1, residual2;
  double discriminant;
  double vertex;  // -t1 / (2 t2); fallback point when both roots are complex
  int selected = -1;  // 0 or 1; -1 when no candidate was usable

  LocationDiagnostics();
};

struct EstimationResult {
  // NaN marks a location whose coefficient could not be estimated; such
  // locations are excluded (and counted) by the error metrics.
  Eigen::VectorXd lambda0_hat;
  Eigen::VectorXd lambda1_hat;
  std::vector<LocationDiagnostics> locations;

  Eigen::Index p() const { return lambda0_hat.size(); }
  Eigen::Index n_degenerate() const;
};

struct RootSelection {
  double lambda0, lambda1;
  int selected;                      // index into the candidate arrays
  double root[2];                    // NaN-padded
  double lambda1_candidate[2];
  double residual_sq[2];
  double denominator[2];             // filtered variance at each candidate
};

LocationMoments location_moments(const LagCovariancePair& cov,
                                 const SpatialWeightMatrix& w, Eigen::Index i);

// Builds the location quadratic from the moments. Throws Unidentified when
// all three coefficients vanish relative to the moment scale, which happens
// exactly when every x solves the system (constant autoregressive profile).
QuadraticCoefficients quadratic_coefficients(const LocationMoments& m);

// Real roots in ascending order. Falls back to the linear root -t0/t1 when
// t2 is negligible; throws NoRealRoot on a negative discriminant.
std::vector<double> solve_quadratic(const QuadraticCoefficients& q);

// Autoregressive coefficient implied by a spatial coefficient: the ratio of
// lag-1 autocovariance to variance of the filtered coordinate. Equals
// (a1 + b1 x + c1 x^2) / (a0 + b0 x + c0 x^2). Throws DegenerateVariance
// when the denominator is numerically zero.
double lambda1_given_lambda0(const LagCovariancePair& cov,
                             const SpatialWeightMatrix& w, Eigen::Index i,
                             double lambda0);

// Evaluates every candidate root and keeps the one whose fitting-identity
// residual is smallest; near-ties go to the candidate of smaller magnitude.
// Candidates with a degenerate filtered variance are skipped; if none is
// usable the DegenerateVariance propagates.
RootSelection select_root(const LagCovariancePair& cov,
                          const SpatialWeightMatrix& w, Eigen::Index i,
                          const std::vector<double>& roots);

// Runs the per-location procedure over all p locations. Location failures
// are recorded as flags, never thrown; see EstimationResult.
EstimationResult estimate(const LagCovariancePair& cov,
                          const SpatialWeightMatrix& w);
EstimationResult estimate(const PanelSeries& y, const SpatialWeightMatrix& w,
                          bool center = false);

struct ProfilePoint {
  double lambda0;
  double lambda1;  // NaN where the filtered variance vanishes
  bool ok;
};

// The map lambda0 -> implied autoregressive coefficient over a grid, with
// its stationary points (roots of the quadratic with the asymmetry moment a2
// removed) and the solution the estimator would select.
struct CorrelationProfile {
  std::vector<ProfilePoint> points;
  std::vector<double> stationary_points;
  double selected_lambda0;
  double selected_lambda1;
  LocationFlag flag = LocationFlag::ok;

  CorrelationProfile();
};

CorrelationProfile correlation_profile(const LagCovariancePair& cov,
                                       const SpatialWeightMatrix& w,
                                       Eigen::Index i,
                                       const std::vector<double>& grid);

}  // namespace sdpd
