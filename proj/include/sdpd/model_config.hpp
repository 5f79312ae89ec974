#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sdpd/monte_carlo.hpp"
#include "sdpd/process_sim.hpp"

namespace sdpd {

// JSON description of a single model for the simulate command. Components
// may be given explicitly (vectors) or as draw settings; omitted sub-seeds
// default to streams derived from the top-level seed with fixed indices
// (w: 0, coefficients: 1, sigma: 2, innovations: 3).
struct ModelDescriptor {
  Eigen::Index p = 0;
  Eigen::Index T = 100;
  Eigen::Index burn_in = 200;
  std::uint64_t seed = 1;

  std::optional<WKind> w_kind;
  std::string w_file;
  Normalization normalization = Normalization::l2_row;
  std::optional<std::uint64_t> w_seed;

  std::optional<Eigen::VectorXd> lambda0;
  std::optional<Eigen::VectorXd> lambda1;
  double lambda_low = -0.7;
  double lambda_high = 0.7;
  std::optional<std::uint64_t> lambda_seed;

  CrossMode cross_mode = CrossMode::common_factor;
  std::optional<Eigen::VectorXd> sigma;
  double sigma_low = 0.5;
  double sigma_high = 1.5;
  std::optional<std::uint64_t> sigma_seed;
  double factor_loading = -0.7;
  int factor_index = 2;
  std::optional<std::uint64_t> error_seed;
};

ModelDescriptor read_model_descriptor(const std::string& path);

// Materializes the descriptor: generates or loads W, draws or adopts the
// coefficient vectors and sigma, and assembles a validated model.
SdpdModel build_model(const ModelDescriptor& d);

McConfig read_mc_config(const std::string& path);

}  // namespace sdpd
