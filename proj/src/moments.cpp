#include "sdpd/moments.hpp"

#include <string>

#include "sdpd/errors.hpp"
#include "sdpd/linalg.hpp"

namespace sdpd {

LagCovariancePair sample_covariances(const PanelSeries& y, bool center) {
  const Eigen::Index T = y.T();
  const Eigen::Index p = y.p();
  if (T < 3) {
    throw TooShort("sample_covariances(): need T >= 3, got T = " +
                   std::to_string(T));
  }
  if (p < 1) throw BadSpec("sample_covariances(): empty panel");
  if (!y.values.allFinite()) {
    throw DataError("sample_covariances(): panel contains non-finite values");
  }

  Eigen::MatrixXd v = y.values;
  if (center) v.rowwise() -= v.colwise().mean();

  Eigen::MatrixXd s0 = v.transpose() * v / static_cast<double>(T - 1);
  s0 = 0.5 * (s0 + s0.transpose()).eval();
  // Row t of sigma1 pairs the current period with the previous one.
  Eigen::MatrixXd s1 = v.bottomRows(T - 1).transpose() * v.topRows(T - 1) /
                       static_cast<double>(T - 2);
  return LagCovariancePair{std::move(s0), std::move(s1), CovSource::sample};
}

LagCovariancePair population_covariances(const SdpdModel& model) {
  const Eigen::MatrixXd s = model.spatial_filter();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(s);
  const Eigen::MatrixXd transition =
      lu.solve(model.lambda1.asDiagonal() * s);

  const Eigen::MatrixXd eps_cov = population_error_cov(model.errors);
  // S^{-1} cov(eps) S^{-T}, built from two solves.
  const Eigen::MatrixXd half = lu.solve(eps_cov);
  Eigen::MatrixXd star = lu.solve(half.transpose());
  star = 0.5 * (star + star.transpose()).eval();

  Eigen::MatrixXd s0 = solve_discrete_lyapunov(transition, star);
  s0 = 0.5 * (s0 + s0.transpose()).eval();
  Eigen::MatrixXd s1 = transition * s0;
  return LagCovariancePair{std::move(s0), std::move(s1),
                           CovSource::population};
}

}  // namespace sdpd
