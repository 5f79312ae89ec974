#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "sdpd/panel.hpp"
#include "sdpd/spatial_weights.hpp"

namespace sdpd {

enum class CrossMode { independent, common_factor };

// Innovation design. Under common_factor, every location i >= 3 (1-based)
// receives e_i + factor_loading * e_f on top of its own base noise e_i,
// where f = factor_index. The default loading -0.7 gives the usual
// cross-correlated benchmark design; locations 1 and 2 stay untouched.
struct ErrorSpec {
  Eigen::VectorXd sigma;  // per-location standard deviations, all > 0
  CrossMode cross_mode = CrossMode::independent;
  double factor_loading = -0.7;
  int factor_index = 2;  // 1-based location whose base noise is shared
  std::uint64_t seed = 0;

  Eigen::Index p() const { return sigma.size(); }
};

// Construction-time validation level. `full` additionally rejects a constant
// lambda1 vector, which estimation cannot identify; simulation-only
// configurations (white noise, equal autoregressive coefficients) may opt
// out with `stationarity_only`.
enum class ModelChecks { full, stationarity_only };

// Stationary spatial dynamic panel model
//   (I - diag(lambda0) W) y_t = diag(lambda1) (I - diag(lambda0) W) y_{t-1} + eps_t.
// Stationarity needs |lambda1_i| < 1 and I - diag(lambda0) W nonsingular;
// both are checked at construction.
struct SdpdModel {
  SpatialWeightMatrix w;
  Eigen::VectorXd lambda0;
  Eigen::VectorXd lambda1;
  ErrorSpec errors;

  SdpdModel(SpatialWeightMatrix w_in, Eigen::VectorXd lambda0_in,
            Eigen::VectorXd lambda1_in, ErrorSpec errors_in,
            ModelChecks checks = ModelChecks::full);

  Eigen::Index p() const { return lambda0.size(); }

  // I - diag(lambda0) W, the filter that decouples the process into p
  // independent AR(1) coordinates.
  Eigen::MatrixXd spatial_filter() const;
};

// Draws lambda0 and lambda1 i.i.d. uniform on [low, high]. lambda1 is
// redrawn while it is constant to machine precision; when a W is supplied,
// lambda0 is redrawn while I - diag(lambda0) W fails the rank test. Both
// loops are bounded and end in DegenerateModel.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gen_coefficients(
    Eigen::Index p, std::uint64_t seed, double low = -0.7, double high = 0.7,
    const SpatialWeightMatrix* validate_w = nullptr);

// One i.i.d. uniform vector on [low, high]; used for per-location sigma.
Eigen::VectorXd draw_uniform_vector(Eigen::Index p, std::uint64_t seed,
                                    double low, double high);

// T x p innovation draws, row t = eps_t. Deterministic in spec.seed.
Eigen::MatrixXd gen_errors(const ErrorSpec& spec, Eigen::Index T);

// Exact covariance of eps_t implied by an error design; the Monte Carlo
// moments of gen_errors converge to this matrix.
Eigen::MatrixXd population_error_cov(const ErrorSpec& spec);

// Simulates T observations after discarding burn_in steps from y_0 = 0.
// Throws Explosion when a trajectory leaves [-1e12, 1e12], which signals a
// non-stationary configuration that slipped past the model checks.
PanelSeries simulate(const SdpdModel& model, Eigen::Index T,
                     Eigen::Index burn_in = 200);

// Shared engine: iterates y_t = transition * y_{t-1} + innovations_t over
// all innovation rows and returns the rows after burn_in. Same explosion
// guard as simulate().
PanelSeries simulate_var(const Eigen::MatrixXd& transition,
                         const Eigen::MatrixXd& innovations,
                         Eigen::Index burn_in);

}  // namespace sdpd
