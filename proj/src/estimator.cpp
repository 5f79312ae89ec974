#include "sdpd/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "sdpd/errors.hpp"

namespace sdpd {

namespace {

constexpr double kCoefficientTol = 1e-14;   // relative, against moment scale
constexpr double kVarianceTol = 1e-14;      // absolute, filtered variance
constexpr double kResidualTieTol = 1e-12;   // relative, residual near-tie

const double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_location(const LagCovariancePair& cov, const SpatialWeightMatrix& w,
                    Eigen::Index i, const char* where) {
  if (cov.sigma0.rows() != cov.sigma0.cols() ||
      cov.sigma1.rows() != cov.sigma1.cols() ||
      cov.sigma0.rows() != cov.sigma1.rows() || cov.p() != w.p()) {
    throw BadSpec(std::string(where) + ": covariance/weights size mismatch");
  }
  if (i < 0 || i >= cov.p()) {
    throw BadSpec(std::string(where) + ": location index out of range");
  }
}

// e_i - lambda0 * w_i.
Eigen::VectorXd filter_vector(const SpatialWeightMatrix& w, Eigen::Index i,
                              double lambda0) {
  Eigen::VectorXd u = -lambda0 * w.entries.row(i).transpose();
  u(i) += 1.0;
  return u;
}

struct CandidateEval {
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  double residual_sq = std::numeric_limits<double>::quiet_NaN();
  double denominator = std::numeric_limits<double>::quiet_NaN();
  bool usable = false;
};

CandidateEval eval_candidate(const LagCovariancePair& cov,
                             const SpatialWeightMatrix& w, Eigen::Index i,
                             double lambda0) {
  CandidateEval out;
  const Eigen::VectorXd u = filter_vector(w, i, lambda0);
  const Eigen::VectorXd s0u = cov.sigma0 * u;
  const double den = u.dot(s0u);
  out.denominator = den;
  if (std::abs(den) <= kVarianceTol) return out;
  const Eigen::VectorXd s1tu = cov.sigma1.transpose() * u;
  const double num = u.dot(cov.sigma1 * u);
  out.lambda1 = num / den;
  // Fitting identity: u' sigma1 should equal lambda1 * u' sigma0 row-wise.
  out.residual_sq = (s1tu - out.lambda1 * s0u).squaredNorm();
  out.usable = true;
  return out;
}

}  // namespace

LocationDiagnostics::LocationDiagnostics()
    : root1(kNaN),
      root2(kNaN),
      residual1(kNaN),
      residual2(kNaN),
      discriminant(kNaN),
      vertex(kNaN) {}

CorrelationProfile::CorrelationProfile()
    : selected_lambda0(kNaN), selected_lambda1(kNaN) {}

Eigen::Index EstimationResult::n_degenerate() const {
  Eigen::Index n = 0;
  for (const auto& d : locations) {
    if (d.flag != LocationFlag::ok) ++n;
  }
  return n;
}

LocationMoments location_moments(const LagCovariancePair& cov,
                                 const SpatialWeightMatrix& w,
                                 Eigen::Index i) {
  check_location(cov, w, i, "location_moments()");
  const Eigen::VectorXd wi = w.entries.row(i).transpose();
  const Eigen::VectorXd s0w = cov.sigma0 * wi;
  const Eigen::VectorXd s1w = cov.sigma1 * wi;
  const Eigen::VectorXd s1tw = cov.sigma1.transpose() * wi;

  LocationMoments m;
  m.a0 = cov.sigma0(i, i);
  m.a1 = cov.sigma1(i, i);
  m.a2 = s1tw(i) - s1w(i);
  m.b0 = -2.0 * s0w(i);
  m.b1 = -(s1w(i) + s1tw(i));
  m.b2 = -2.0 * s1w(i);
  m.c0 = wi.dot(s0w);
  m.c1 = wi.dot(s1w);
  return m;
}

QuadraticCoefficients quadratic_coefficients(const LocationMoments& m) {
  QuadraticCoefficients q;
  q.t0 = m.b1 * m.a0 - m.b0 * m.a1 + m.a0 * m.a2;
  q.t1 = 2.0 * (m.a0 * m.c1 - m.c0 * m.a1) + m.a2 * m.b0;
  q.t2 = m.c1 * m.b0 - m.c0 * m.b1 + m.a2 * m.c0;

  const double scale = std::max(
      {std::abs(m.a0), std::abs(m.a1), std::abs(m.a2), std::abs(m.b0),
       std::abs(m.b1), std::abs(m.b2), std::abs(m.c0), std::abs(m.c1)});
  const double t_max =
      std::max({std::abs(q.t0), std::abs(q.t1), std::abs(q.t2)});
  if (t_max < kCoefficientTol * scale) {
    throw Unidentified(
        "quadratic_coefficients(): all coefficients vanish; every spatial "
        "coefficient fits these moments equally well");
  }
  return q;
}

std::vector<double> solve_quadratic(const QuadraticCoefficients& q) {
  const double scale =
      std::max({std::abs(q.t0), std::abs(q.t1), std::abs(q.t2)});
  if (scale <= 0.0) {
    throw Unidentified("solve_quadratic(): zero polynomial");
  }
  if (std::abs(q.t2) < kCoefficientTol * scale) {
    if (std::abs(q.t1) < kCoefficientTol * scale) {
      throw NoRealRoot("solve_quadratic(): nonzero constant polynomial");
    }
    return {-q.t0 / q.t1};
  }

  const double disc = q.t1 * q.t1 - 4.0 * q.t2 * q.t0;
  if (disc < 0.0) {
    throw NoRealRoot("solve_quadratic(): complex-conjugate roots");
  }
  if (disc == 0.0) {
    return {-q.t1 / (2.0 * q.t2)};
  }
  // Citardauq-stable split: never subtracts nearly equal quantities.
  const double sq = std::sqrt(disc);
  const double qq = -0.5 * (q.t1 >= 0.0 ? q.t1 + sq : q.t1 - sq);
  std::vector<double> roots{qq / q.t2, q.t0 / qq};
  std::sort(roots.begin(), roots.end());
  return roots;
}

double lambda1_given_lambda0(const LagCovariancePair& cov,
                             const SpatialWeightMatrix& w, Eigen::Index i,
                             double lambda0) {
  check_location(cov, w, i, "lambda1_given_lambda0()");
  if (!std::isfinite(lambda0)) {
    throw BadSpec("lambda1_given_lambda0(): lambda0 must be finite");
  }
  const CandidateEval e = eval_candidate(cov, w, i, lambda0);
  if (!e.usable) {
    throw DegenerateVariance(
        "lambda1_given_lambda0(): filtered variance is numerically zero at "
        "lambda0 = " +
        std::to_string(lambda0));
  }
  return e.lambda1;
}

RootSelection select_root(const LagCovariancePair& cov,
                          const SpatialWeightMatrix& w, Eigen::Index i,
                          const std::vector<double>& roots) {
  check_location(cov, w, i, "select_root()");
  if (roots.empty() || roots.size() > 2) {
    throw BadSpec("select_root(): expected one or two candidate roots");
  }

  RootSelection sel;
  sel.lambda0 = kNaN;
  sel.lambda1 = kNaN;
  sel.selected = -1;
  for (int j = 0; j < 2; ++j) {
    sel.root[j] = kNaN;
    sel.lambda1_candidate[j] = kNaN;
    sel.residual_sq[j] = kNaN;
    sel.denominator[j] = kNaN;
  }

  int best = -1;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    sel.root[j] = roots[j];
    const CandidateEval e = eval_candidate(cov, w, i, roots[j]);
    sel.lambda1_candidate[j] = e.lambda1;
    sel.residual_sq[j] = e.residual_sq;
    sel.denominator[j] = e.denominator;
    if (!e.usable) continue;
    if (best < 0) {
      best = static_cast<int>(j);
      continue;
    }
    const double ra = sel.residual_sq[best];
    const double rb = e.residual_sq;
    const double tie = kResidualTieTol * std::max(ra, rb);
    if (std::abs(ra - rb) <= tie) {
      // Near-tie: prefer the candidate of smaller magnitude.
      if (std::abs(roots[j]) < std::abs(roots[best])) {
        best = static_cast<int>(j);
      }
    } else if (rb < ra) {
      best = static_cast<int>(j);
    }
  }
  if (best < 0) {
    throw DegenerateVariance(
        "select_root(): every candidate root leaves a numerically zero "
        "filtered variance");
  }
  sel.selected = best;
  sel.lambda0 = sel.root[best];
  sel.lambda1 = sel.lambda1_candidate[best];
  return sel;
}

EstimationResult estimate(const LagCovariancePair& cov,
                          const SpatialWeightMatrix& w) {
  check_location(cov, w, 0, "estimate()");
  const Eigen::Index p = cov.p();

  EstimationResult out;
  out.lambda0_hat = Eigen::VectorXd::Constant(p, kNaN);
  out.lambda1_hat = Eigen::VectorXd::Constant(p, kNaN);
  out.locations.resize(p);

  for (Eigen::Index i = 0; i < p; ++i) {
    LocationDiagnostics& d = out.locations[i];
    std::optional<QuadraticCoefficients> q;
    try {
      q = quadratic_coefficients(location_moments(cov, w, i));
      if (std::abs(q->t2) > 0) {
        d.discriminant = q->t1 * q->t1 - 4.0 * q->t2 * q->t0;
        d.vertex = -q->t1 / (2.0 * q->t2);
      }
      const std::vector<double> roots = solve_quadratic(*q);
      d.root1 = roots[0];
      if (roots.size() > 1) d.root2 = roots[1];

      const RootSelection sel = select_root(cov, w, i, roots);
      d.residual1 = sel.residual_sq[0];
      d.residual2 = sel.residual_sq[1];
      d.selected = sel.selected;
      d.flag = LocationFlag::ok;
      out.lambda0_hat(i) = sel.lambda0;
      out.lambda1_hat(i) = sel.lambda1;
    } catch (const Unidentified&) {
      d.flag = LocationFlag::unidentified;
    } catch (const NoRealRoot&) {
      // Keep the vertex of the parabola, the real part of the conjugate
      // pair, as the fallback point and still report the autoregressive
      // coefficient there when the variance allows it.
      d.flag = LocationFlag::no_real_root;
      if (q && std::isfinite(d.vertex)) {
        const CandidateEval e = eval_candidate(cov, w, i, d.vertex);
        if (e.usable) out.lambda1_hat(i) = e.lambda1;
      }
    } catch (const DegenerateVariance&) {
      d.flag = LocationFlag::degenerate_variance;
    }
  }
  return out;
}

EstimationResult estimate(const PanelSeries& y, const SpatialWeightMatrix& w,
                          bool center) {
  if (y.p() != w.p()) {
    throw BadSpec("estimate(): panel and weights disagree on p");
  }
  return estimate(sample_covariances(y, center), w);
}

CorrelationProfile correlation_profile(const LagCovariancePair& cov,
                                       const SpatialWeightMatrix& w,
                                       Eigen::Index i,
                                       const std::vector<double>& grid) {
  check_location(cov, w, i, "correlation_profile()");
  for (double g : grid) {
    if (!std::isfinite(g)) {
      throw BadSpec("correlation_profile(): grid points must be finite");
    }
  }

  CorrelationProfile prof;
  prof.points.reserve(grid.size());
  for (double g : grid) {
    const CandidateEval e = eval_candidate(cov, w, i, g);
    prof.points.push_back(ProfilePoint{g, e.lambda1, e.usable});
  }

  const LocationMoments m = location_moments(cov, w, i);
  // Stationary points of the profile: same quadratic with the asymmetry
  // moment removed.
  try {
    LocationMoments sym = m;
    sym.a2 = 0.0;
    prof.stationary_points = solve_quadratic(quadratic_coefficients(sym));
  } catch (const NumericalError&) {
    prof.stationary_points.clear();
  }

  try {
    const RootSelection sel =
        select_root(cov, w, i, solve_quadratic(quadratic_coefficients(m)));
    prof.selected_lambda0 = sel.lambda0;
    prof.selected_lambda1 = sel.lambda1;
    prof.flag = LocationFlag::ok;
  } catch (const Unidentified&) {
    prof.flag = LocationFlag::unidentified;
  } catch (const NoRealRoot&) {
    prof.flag = LocationFlag::no_real_root;
  } catch (const DegenerateVariance&) {
    prof.flag = LocationFlag::degenerate_variance;
  }
  return prof;
}

}  // namespace sdpd
