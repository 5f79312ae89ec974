#pragma once

#include <Eigen/Dense>

namespace sdpd {

// Numerical rank test: true when the smallest singular value exceeds
// n * machine_epsilon * largest singular value. Square matrices only.
bool has_full_rank(const Eigen::MatrixXd& m);

// Reciprocal-condition based estimate of cond_1(m). Returns +inf for a
// numerically singular matrix.
double condition_estimate(const Eigen::MatrixXd& m);

// S^{-1} diag(d) S without forming the inverse. No conditioning check here;
// callers guard with condition_estimate where required.
Eigen::MatrixXd similarity_transform(const Eigen::MatrixXd& s,
                                     const Eigen::VectorXd& d);

// Solves X = A X A^T + Q for the stationary covariance of a first-order
// vector autoregression. Dense vectorized solve up to kLyapunovDenseMaxDim;
// plain fixed-point iteration to tolerance 1e-12 beyond that. Throws
// NearSingular when the vectorized system is ill conditioned (spectral
// radius of A at or above one) or the iteration fails to converge.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a,
                                        const Eigen::MatrixXd& q);

inline constexpr Eigen::Index kLyapunovDenseMaxDim = 60;
inline constexpr double kConditionLimit = 1e12;

}  // namespace sdpd
