#include "sdpd/process_sim.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include "sdpd/errors.hpp"
#include "sdpd/linalg.hpp"

namespace sdpd {

namespace {

constexpr int kMaxRedraws = 100;
constexpr double kExplosionLimit = 1e12;

bool is_constant(const Eigen::VectorXd& v) {
  if (v.size() == 0) return true;
  const double spread = v.maxCoeff() - v.minCoeff();
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  return spread <= std::numeric_limits<double>::epsilon() * scale;
}

void validate_error_spec(const ErrorSpec& spec) {
  const Eigen::Index p = spec.p();
  if (p < 1) throw BadSpec("ErrorSpec: sigma must be non-empty");
  if (!(spec.sigma.minCoeff() > 0) || !spec.sigma.allFinite()) {
    throw BadSpec("ErrorSpec: all sigma entries must be positive and finite");
  }
  if (spec.cross_mode == CrossMode::common_factor) {
    if (p < 3) {
      throw BadSpec("ErrorSpec: the common-factor design needs p >= 3");
    }
    if (spec.factor_index < 1 || spec.factor_index > p) {
      throw BadSpec("ErrorSpec: factor_index out of range");
    }
    if (!std::isfinite(spec.factor_loading)) {
      throw BadSpec("ErrorSpec: factor_loading must be finite");
    }
  }
}

}  // namespace

SdpdModel::SdpdModel(SpatialWeightMatrix w_in, Eigen::VectorXd lambda0_in,
                     Eigen::VectorXd lambda1_in, ErrorSpec errors_in,
                     ModelChecks checks)
    : w(std::move(w_in)),
      lambda0(std::move(lambda0_in)),
      lambda1(std::move(lambda1_in)),
      errors(std::move(errors_in)) {
  const Eigen::Index n = w.p();
  if (lambda0.size() != n || lambda1.size() != n || errors.p() != n) {
    throw BadSpec("SdpdModel: W, lambda0, lambda1 and sigma sizes disagree");
  }
  validate_spatial_weights(w);
  validate_error_spec(errors);
  if (!lambda0.allFinite() || !lambda1.allFinite()) {
    throw BadSpec("SdpdModel: coefficients must be finite");
  }
  if (lambda1.cwiseAbs().maxCoeff() >= 1.0) {
    throw BadSpec("SdpdModel: stationarity needs |lambda1_i| < 1 for all i");
  }
  if (checks == ModelChecks::full && is_constant(lambda1)) {
    throw BadSpec(
        "SdpdModel: lambda1 is constant across locations; the spatial "
        "coefficients are then not identifiable");
  }
  if (!has_full_rank(spatial_filter())) {
    throw DegenerateModel("SdpdModel: I - diag(lambda0) W is rank deficient");
  }
}

Eigen::MatrixXd SdpdModel::spatial_filter() const {
  const Eigen::Index n = p();
  Eigen::MatrixXd s = -(lambda0.asDiagonal() * w.entries);
  s += Eigen::MatrixXd::Identity(n, n);
  return s;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gen_coefficients(
    Eigen::Index p, std::uint64_t seed, double low, double high,
    const SpatialWeightMatrix* validate_w) {
  if (p < 1) throw BadSpec("gen_coefficients(): p must be positive");
  if (!(low < high)) throw BadSpec("gen_coefficients(): need low < high");
  if (low < -1.0 || high > 1.0) {
    throw BadSpec(
        "gen_coefficients(): bounds must lie in [-1, 1] to keep |lambda1| "
        "below one");
  }
  if (validate_w && validate_w->p() != p) {
    throw BadSpec("gen_coefficients(): W size does not match p");
  }

  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(low, high);
  const auto draw = [&] {
    Eigen::VectorXd v(p);
    for (Eigen::Index i = 0; i < p; ++i) v(i) = u(eng);
    return v;
  };

  Eigen::VectorXd lambda0 = draw();
  if (validate_w) {
    const Eigen::Index n = validate_w->p();
    int redraws = 0;
    for (;;) {
      Eigen::MatrixXd s = -(lambda0.asDiagonal() * validate_w->entries);
      s += Eigen::MatrixXd::Identity(n, n);
      if (has_full_rank(s)) break;
      if (++redraws > kMaxRedraws) {
        throw DegenerateModel(
            "gen_coefficients(): could not draw lambda0 with nonsingular "
            "I - diag(lambda0) W");
      }
      lambda0 = draw();
    }
  }

  Eigen::VectorXd lambda1 = draw();
  int redraws = 0;
  while (is_constant(lambda1)) {
    if (++redraws > kMaxRedraws) {
      throw DegenerateModel(
          "gen_coefficients(): could not draw a non-constant lambda1");
    }
    lambda1 = draw();
  }
  return {std::move(lambda0), std::move(lambda1)};
}

Eigen::VectorXd draw_uniform_vector(Eigen::Index p, std::uint64_t seed,
                                    double low, double high) {
  if (p < 1) throw BadSpec("draw_uniform_vector(): p must be positive");
  if (!(low < high)) throw BadSpec("draw_uniform_vector(): need low < high");
  std::mt19937_64 eng(seed);
  std::uniform_real_distribution<double> u(low, high);
  Eigen::VectorXd v(p);
  for (Eigen::Index i = 0; i < p; ++i) v(i) = u(eng);
  return v;
}

Eigen::MatrixXd gen_errors(const ErrorSpec& spec, Eigen::Index T) {
  validate_error_spec(spec);
  if (T < 1) throw BadSpec("gen_errors(): T must be positive");
  const Eigen::Index p = spec.p();

  std::mt19937_64 eng(spec.seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd base(T, p);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < p; ++i) base(t, i) = spec.sigma(i) * z(eng);
  }
  if (spec.cross_mode == CrossMode::independent) return base;

  Eigen::MatrixXd out = base;
  const Eigen::Index f = spec.factor_index - 1;
  for (Eigen::Index i = 2; i < p; ++i) {
    out.col(i) += spec.factor_loading * base.col(f);
  }
  return out;
}

Eigen::MatrixXd population_error_cov(const ErrorSpec& spec) {
  validate_error_spec(spec);
  const Eigen::Index p = spec.p();
  const Eigen::VectorXd var = spec.sigma.array().square();
  if (spec.cross_mode == CrossMode::independent) {
    return var.asDiagonal();
  }
  // eps = L e with L = I plus the factor column loadings; cov = L D L'.
  Eigen::MatrixXd l = Eigen::MatrixXd::Identity(p, p);
  const Eigen::Index f = spec.factor_index - 1;
  for (Eigen::Index i = 2; i < p; ++i) l(i, f) += spec.factor_loading;
  Eigen::MatrixXd cov = l * var.asDiagonal() * l.transpose();
  return 0.5 * (cov + cov.transpose());
}

PanelSeries simulate(const SdpdModel& model, Eigen::Index T,
                     Eigen::Index burn_in) {
  if (T < 1) throw BadSpec("simulate(): T must be positive");
  if (burn_in < 0) throw BadSpec("simulate(): burn_in must be non-negative");

  const Eigen::MatrixXd s = model.spatial_filter();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(s);
  const Eigen::MatrixXd transition = lu.solve(model.lambda1.asDiagonal() * s);
  const Eigen::MatrixXd eps = gen_errors(model.errors, burn_in + T);
  // Reduced-form innovations S^{-1} eps_t, all periods in one solve.
  const Eigen::MatrixXd innovations = lu.solve(eps.transpose()).transpose();
  return simulate_var(transition, innovations, burn_in);
}

PanelSeries simulate_var(const Eigen::MatrixXd& transition,
                         const Eigen::MatrixXd& innovations,
                         Eigen::Index burn_in) {
  const Eigen::Index p = transition.rows();
  if (transition.cols() != p || innovations.cols() != p) {
    throw BadSpec("simulate_var(): dimension mismatch");
  }
  const Eigen::Index total = innovations.rows();
  if (burn_in < 0 || total - burn_in < 1) {
    throw BadSpec("simulate_var(): need at least one post-burn-in period");
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(p);
  Eigen::MatrixXd out(total - burn_in, p);
  for (Eigen::Index t = 0; t < total; ++t) {
    y = transition * y + innovations.row(t).transpose();
    if (!y.allFinite() || y.cwiseAbs().maxCoeff() > kExplosionLimit) {
      throw Explosion("simulate_var(): trajectory exploded at step " +
                      std::to_string(t + 1) +
                      "; the transition is not a stable one");
    }
    if (t >= burn_in) out.row(t - burn_in) = y.transpose();
  }
  return PanelSeries{std::move(out)};
}

}  // namespace sdpd
