#include "sdpd/linalg.hpp"

#include <cmath>
#include <limits>

#include "sdpd/errors.hpp"

namespace sdpd {

namespace {
constexpr double kLyapunovTol = 1e-12;
constexpr int kLyapunovMaxIter = 200000;
}  // namespace

bool has_full_rank(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw BadSpec("has_full_rank(): matrix must be square");
  }
  if (m.rows() == 0) return true;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = static_cast<double>(m.rows()) *
                           std::numeric_limits<double>::epsilon() * sv(0);
  return sv(sv.size() - 1) > threshold;
}

double condition_estimate(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw BadSpec("condition_estimate(): matrix must be square");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 0)) return std::numeric_limits<double>::infinity();
  return 1.0 / rcond;
}

Eigen::MatrixXd similarity_transform(const Eigen::MatrixXd& s,
                                     const Eigen::VectorXd& d) {
  if (s.rows() != s.cols() || s.rows() != d.size()) {
    throw BadSpec("similarity_transform(): dimension mismatch");
  }
  return s.partialPivLu().solve(d.asDiagonal() * s);
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixXd& q) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || q.rows() != n || q.cols() != n) {
    throw BadSpec("solve_discrete_lyapunov(): dimension mismatch");
  }
  if (n == 0) return Eigen::MatrixXd();

  if (n <= kLyapunovDenseMaxDim) {
    // Vectorized form: (I - A (x) A) vec(X) = vec(Q), column-major stacking.
    const Eigen::Index nn = n * n;
    Eigen::MatrixXd k = Eigen::MatrixXd::Identity(nn, nn);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        k.block(i * n, j * n, n, n) -= a(i, j) * a;
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);
    const double rcond = lu.rcond();
    if (!(rcond > 0) || 1.0 / rcond > kConditionLimit) {
      throw NearSingular(
          "solve_discrete_lyapunov(): stationary system is numerically "
          "singular; the transition matrix has spectral radius at or above "
          "one");
    }
    const Eigen::VectorXd vec_q =
        Eigen::Map<const Eigen::VectorXd>(q.data(), nn);
    const Eigen::VectorXd vec_x = lu.solve(vec_q);
    Eigen::MatrixXd x = Eigen::Map<const Eigen::MatrixXd>(vec_x.data(), n, n);
    return 0.5 * (x + x.transpose());
  }

  // Large n: iterate X <- A X A' + Q, a contraction whenever the spectral
  // radius of A is below one.
  Eigen::MatrixXd x = q;
  for (int iter = 0; iter < kLyapunovMaxIter; ++iter) {
    Eigen::MatrixXd next = a * x * a.transpose() + q;
    const double change = (next - x).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
    x = std::move(next);
    if (!std::isfinite(scale)) {
      throw NearSingular(
          "solve_discrete_lyapunov(): iteration diverged; the transition "
          "matrix is not a contraction");
    }
    if (change <= kLyapunovTol * scale) {
      return 0.5 * (x + x.transpose());
    }
  }
  throw NearSingular(
      "solve_discrete_lyapunov(): fixed-point iteration did not converge");
}

}  // namespace sdpd
