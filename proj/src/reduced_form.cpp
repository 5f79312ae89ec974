#include "sdpd/reduced_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdpd/errors.hpp"
#include "sdpd/linalg.hpp"

namespace sdpd {

namespace {

constexpr double kLatentZeroRowTol = 1e-12;

// Flagged locations carry NaN; the plug-in step treats them as zero, i.e.
// no spatial term (lambda0) and no persistence (lambda1) for that row.
Eigen::VectorXd finite_or_zero(const Eigen::VectorXd& v) {
  Eigen::VectorXd out = v;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out(i))) out(i) = 0.0;
  }
  return out;
}

}  // namespace

std::string to_string(TransitionProvenance p) {
  switch (p) {
    case TransitionProvenance::true_model:
      return "true_model";
    case TransitionProvenance::sdpd_known_w:
      return "sdpd_known_w";
    case TransitionProvenance::sdpd_estimated_w:
      return "sdpd_estimated_w";
    case TransitionProvenance::var_yule_walker:
      return "var_yule_walker";
  }
  return "unknown";
}

TransitionMatrix build_reduced(const SpatialWeightMatrix& w,
                               const Eigen::VectorXd& lambda0,
                               const Eigen::VectorXd& lambda1,
                               TransitionProvenance provenance) {
  const Eigen::Index p = w.p();
  if (lambda0.size() != p || lambda1.size() != p) {
    throw BadSpec("build_reduced(): coefficient lengths do not match W");
  }
  if (!lambda0.allFinite() || !lambda1.allFinite()) {
    throw BadSpec("build_reduced(): coefficients must be finite");
  }
  Eigen::MatrixXd s = -(lambda0.asDiagonal() * w.entries);
  s += Eigen::MatrixXd::Identity(p, p);
  if (condition_estimate(s) >= kConditionLimit) {
    throw NearSingular(
        "build_reduced(): I - diag(lambda0) W is too ill conditioned");
  }
  return TransitionMatrix{similarity_transform(s, lambda1), provenance};
}

SpatialWeightMatrix estimate_latent_w(const PanelSeries& y,
                                      Eigen::Index* rank_out) {
  const LagCovariancePair cov = sample_covariances(y);
  const Eigen::Index p = cov.p();
  const Eigen::VectorXd var = cov.sigma0.diagonal();
  if (!(var.minCoeff() > 0)) {
    throw ZeroRow(
        "estimate_latent_w(): some location has zero sample variance");
  }

  const Eigen::VectorXd dinv = var.array().rsqrt();
  Eigen::MatrixXd r = dinv.asDiagonal() * cov.sigma0 * dinv.asDiagonal();
  r.diagonal().setZero();
  for (Eigen::Index i = 0; i < p; ++i) {
    const double norm = r.row(i).norm();
    if (norm < kLatentZeroRowTol) {
      throw ZeroRow("estimate_latent_w(): location " + std::to_string(i + 1) +
                    " is uncorrelated with every other location");
    }
    r.row(i) /= norm;
  }

  if (rank_out) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(r);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double threshold = static_cast<double>(p) *
                             std::numeric_limits<double>::epsilon() * sv(0);
    *rank_out = (sv.array() > threshold).count();
  }
  return SpatialWeightMatrix{std::move(r), Normalization::l2_row};
}

TransitionMatrix var_yule_walker(const PanelSeries& y) {
  if (y.T() <= y.p()) {
    throw NotComputable(
        "var_yule_walker(): needs more periods than locations, got T = " +
        std::to_string(y.T()) + ", p = " + std::to_string(y.p()));
  }
  return var_yule_walker_from_cov(sample_covariances(y));
}

TransitionMatrix var_yule_walker_from_cov(const LagCovariancePair& cov) {
  if (cov.sigma0.rows() != cov.sigma0.cols() ||
      cov.sigma0.rows() != cov.sigma1.rows() ||
      cov.sigma1.rows() != cov.sigma1.cols()) {
    throw BadSpec("var_yule_walker_from_cov(): malformed covariance pair");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(cov.sigma0);
  const double rcond = lu.rcond();
  if (!(rcond > 0) || 1.0 / rcond >= kConditionLimit) {
    throw NotComputable(
        "var_yule_walker_from_cov(): lag-0 covariance is numerically "
        "singular");
  }
  // A solves A sigma0 = sigma1; sigma0 is symmetric.
  Eigen::MatrixXd a = lu.solve(cov.sigma1.transpose()).transpose();
  return TransitionMatrix{std::move(a), TransitionProvenance::var_yule_walker};
}

TransitionEstimate sdpd_transition_estimators(
    const PanelSeries& y, const SpatialWeightMatrix* known_w) {
  TransitionEstimate out;
  out.w_used = known_w ? *known_w : estimate_latent_w(y);
  out.estimation = estimate(y, out.w_used);
  out.transition = build_reduced(
      out.w_used, finite_or_zero(out.estimation.lambda0_hat),
      finite_or_zero(out.estimation.lambda1_hat),
      known_w ? TransitionProvenance::sdpd_known_w
              : TransitionProvenance::sdpd_estimated_w);
  return out;
}

RepresentabilityReport check_representable(const TransitionMatrix& a) {
  const Eigen::Index p = a.p();
  if (a.entries.cols() != p || p < 1) {
    throw BadSpec("check_representable(): matrix must be square, nonempty");
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(a.entries);
  if (es.info() != Eigen::Success) {
    throw NearSingular("check_representable(): eigen decomposition failed");
  }
  const Eigen::VectorXcd values = es.eigenvalues();
  const Eigen::MatrixXcd vectors = es.eigenvectors();

  RepresentabilityReport rep;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(vectors);
  const Eigen::VectorXd& sv = svd.singularValues();
  rep.eigenvector_condition =
      sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                            : std::numeric_limits<double>::infinity();

  const double rho = values.cwiseAbs().maxCoeff();
  rep.eigen_real = values.imag().cwiseAbs().maxCoeff() <= 1e-8 * rho;

  // Cluster numerically equal eigenvalues. The tolerance sits above the
  // sqrt(eps) perturbation a defective pair suffers under rounding.
  const double cluster_tol = 1e-7 * std::max(1.0, rho);
  std::vector<int> cluster(p, -1);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(values(i) - values(j)) <= cluster_tol) {
        cluster[i] = cluster[j];
        break;
      }
    }
    if (cluster[i] < 0) {
      cluster[i] = static_cast<int>(rep.multiplicities.size());
      rep.multiplicities.push_back(EigenvalueCluster{values(i), 0, 0});
    }
    rep.multiplicities[cluster[i]].algebraic += 1;
  }

  int geometric_total = 0;
  for (EigenvalueCluster& c : rep.multiplicities) {
    if (c.algebraic == 1) {
      c.geometric = 1;
    } else {
      Eigen::MatrixXcd shifted = a.entries.cast<std::complex<double>>();
      shifted -= c.value * Eigen::MatrixXcd::Identity(p, p);
      Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(shifted);
      qr.setThreshold(cluster_tol);
      c.geometric = static_cast<int>(p - qr.rank());
    }
    geometric_total += c.geometric;
  }

  rep.distinct = rep.multiplicities.size() == static_cast<std::size_t>(p);
  rep.diagonalizable =
      geometric_total == p && rep.eigenvector_condition < 1e10;
  return rep;
}

}  // namespace sdpd
