#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sdpd/errors.hpp"
#include "sdpd/linalg.hpp"
#include "sdpd/moments.hpp"
#include "sdpd/process_sim.hpp"
#include "sdpd/spatial_weights.hpp"

using namespace sdpd;

namespace {

SdpdModel make_model(Eigen::Index p, std::uint64_t seed, CrossMode mode) {
  auto w = gen_spatial_matrix(WKind::w1, p, seed);
  auto [l0, l1] = gen_coefficients(p, seed + 1, -0.7, 0.7, &w);
  ErrorSpec err;
  err.sigma = draw_uniform_vector(p, seed + 2, 0.5, 1.5);
  err.cross_mode = mode;
  err.seed = seed + 3;
  return SdpdModel(std::move(w), std::move(l0), std::move(l1),
                   std::move(err));
}

// The reduced-form transition and innovation covariance computed with plain
// inverses, as an independent route to the population quantities.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> reduced_by_inverse(
    const SdpdModel& model) {
  const Eigen::MatrixXd s = model.spatial_filter();
  const Eigen::MatrixXd s_inv = s.inverse();
  const Eigen::MatrixXd a =
      s_inv * model.lambda1.asDiagonal() * s;
  const Eigen::MatrixXd q =
      s_inv * population_error_cov(model.errors) * s_inv.transpose();
  return {a, q};
}

}  // namespace

TEST_CASE("sample moments of the all-ones scalar panel") {
  PanelSeries y;
  y.values = Eigen::MatrixXd::Ones(4, 1);
  const auto cov = sample_covariances(y);
  // sum of squares 4 over T-1 = 3; three lagged products over T-2 = 2.
  CHECK(cov.sigma0(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(cov.sigma1(0, 0) == doctest::Approx(3.0 / 2.0).epsilon(1e-15));
  CHECK(cov.source == CovSource::sample);
}

TEST_CASE("sample moments of a zero panel vanish") {
  PanelSeries y;
  y.values = Eigen::MatrixXd::Zero(10, 3);
  const auto cov = sample_covariances(y);
  CHECK(cov.sigma0.isZero(0.0));
  CHECK(cov.sigma1.isZero(0.0));
}

TEST_CASE("sample lag-0 moment is exactly symmetric") {
  ErrorSpec spec;
  spec.sigma = Eigen::VectorXd::Ones(5);
  spec.seed = 17;
  PanelSeries y;
  y.values = gen_errors(spec, 50);
  const auto cov = sample_covariances(y);
  CHECK(cov.sigma0 == cov.sigma0.transpose().eval());
}

TEST_CASE("sample moments reject unusable panels") {
  PanelSeries y;
  y.values = Eigen::MatrixXd::Ones(2, 3);
  CHECK_THROWS_AS(sample_covariances(y), TooShort);

  y.values = Eigen::MatrixXd::Ones(5, 2);
  y.values(3, 1) = std::nan("");
  CHECK_THROWS_AS(sample_covariances(y), DataError);
}

TEST_CASE("centering subtracts the column means first") {
  PanelSeries y;
  y.values = Eigen::MatrixXd::Zero(6, 1);
  y.values << 9.0, 11.0, 9.0, 11.0, 9.0, 11.0;
  const auto raw = sample_covariances(y);
  const auto centered = sample_covariances(y, true);
  // Raw second moment is dominated by the mean of 10.
  CHECK(raw.sigma0(0, 0) > 100.0);
  // Centered values are +-1, so the second moment is 6/5.
  CHECK(centered.sigma0(0, 0) == doctest::Approx(6.0 / 5.0).epsilon(1e-14));
  CHECK(centered.sigma1(0, 0) == doctest::Approx(-5.0 / 4.0).epsilon(1e-14));
}

TEST_CASE("stationary equation solver reproduces the scalar AR(1) values") {
  Eigen::MatrixXd a(1, 1), q(1, 1);
  a << 0.5;
  q << 1.0;
  const Eigen::MatrixXd x = solve_discrete_lyapunov(a, q);
  CHECK(x(0, 0) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK((a * x)(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("stationary equation solver satisfies its equation on both routes") {
  // Below the dense-solve size cutoff.
  const auto small = make_model(10, 300, CrossMode::common_factor);
  const auto [a_s, q_s] = reduced_by_inverse(small);
  const Eigen::MatrixXd x_s = solve_discrete_lyapunov(a_s, q_s);
  CHECK((x_s - a_s * x_s * a_s.transpose() - q_s).cwiseAbs().maxCoeff() <
        1e-10 * x_s.cwiseAbs().maxCoeff());
  CHECK(x_s == x_s.transpose().eval());

  // Above the cutoff the solver switches to fixed-point iteration.
  const auto big = make_model(70, 301, CrossMode::common_factor);
  const auto [a_b, q_b] = reduced_by_inverse(big);
  const Eigen::MatrixXd x_b = solve_discrete_lyapunov(a_b, q_b);
  CHECK((x_b - a_b * x_b * a_b.transpose() - q_b).cwiseAbs().maxCoeff() <
        1e-9 * x_b.cwiseAbs().maxCoeff());
}

TEST_CASE("both solver routes agree on the same input") {
  const auto model = make_model(12, 302, CrossMode::common_factor);
  const auto [a, q] = reduced_by_inverse(model);
  const Eigen::MatrixXd dense = solve_discrete_lyapunov(a, q);

  // Reference fixed-point iteration written out locally.
  Eigen::MatrixXd x = q;
  for (int k = 0; k < 20000; ++k) {
    const Eigen::MatrixXd next = a * x * a.transpose() + q;
    if ((next - x).cwiseAbs().maxCoeff() < 1e-14 * x.cwiseAbs().maxCoeff()) {
      x = next;
      break;
    }
    x = next;
  }
  CHECK((dense - x).cwiseAbs().maxCoeff() < 1e-9 * x.cwiseAbs().maxCoeff());
}

TEST_CASE("population covariances solve the stationary equation") {
  const auto model = make_model(9, 303, CrossMode::common_factor);
  const auto cov = population_covariances(model);
  const auto [a, q] = reduced_by_inverse(model);
  CHECK(cov.source == CovSource::population);
  CHECK((cov.sigma0 - a * cov.sigma0 * a.transpose() - q)
            .cwiseAbs()
            .maxCoeff() < 1e-10 * cov.sigma0.cwiseAbs().maxCoeff());
  CHECK((cov.sigma1 - a * cov.sigma0).cwiseAbs().maxCoeff() <
        1e-10 * cov.sigma0.cwiseAbs().maxCoeff());
}

TEST_CASE("a root on the unit circle is rejected") {
  auto w = gen_spatial_matrix(WKind::w1, 6, 304);
  ErrorSpec err;
  err.sigma = Eigen::VectorXd::Ones(6);
  err.seed = 1;
  Eigen::VectorXd l1(6);
  l1 << 1.0 - 1e-14, 0.3, -0.2, 0.1, 0.5, -0.4;
  SdpdModel model(w, Eigen::VectorXd::Zero(6), l1, err);
  CHECK_THROWS_AS(population_covariances(model), NearSingular);
}

TEST_CASE("lag-1 moment symmetry tracks the innovation design") {
  // With uncorrelated innovations the filtered coordinates are independent
  // AR(1) processes, which makes sigma1 symmetric for any coefficients. The
  // factor coupling correlates them and breaks the symmetry.
  for (std::uint64_t seed = 305; seed < 309; ++seed) {
    const auto sym_model = make_model(8, seed, CrossMode::independent);
    const auto sym = population_covariances(sym_model);
    CHECK((sym.sigma1 - sym.sigma1.transpose()).cwiseAbs().maxCoeff() < 1e-8);

    SdpdModel coupled = sym_model;
    coupled.errors.cross_mode = CrossMode::common_factor;
    const auto asym = population_covariances(coupled);
    CHECK((asym.sigma1 - asym.sigma1.transpose()).cwiseAbs().maxCoeff() >
          1e-6);
  }
}

TEST_CASE("per-location quadratic moments are non-degenerate in population") {
  for (std::uint64_t seed = 400; seed < 404; ++seed) {
    const auto model = make_model(8, seed, CrossMode::common_factor);
    const auto cov = population_covariances(model);
    for (Eigen::Index i = 0; i < model.p(); ++i) {
      const Eigen::VectorXd wi = model.w.entries.row(i).transpose();
      const double c0 = wi.dot(cov.sigma0 * wi);
      const double c1 = wi.dot(cov.sigma1 * wi);
      CHECK(c0 > 1e-10);
      CHECK(std::abs(c1) > 1e-12);
      const double gap =
          std::abs(wi.dot((cov.sigma1 - model.lambda1(i) * cov.sigma0) * wi));
      CHECK(gap > 1e-10);
    }
  }
}

TEST_CASE("sample moments converge to the population ones") {
  const auto model = make_model(5, 306, CrossMode::common_factor);
  const auto pop = population_covariances(model);
  const double scale = pop.sigma0.cwiseAbs().maxCoeff();

  auto err_at = [&](Eigen::Index horizon) {
    SdpdModel copy = model;
    copy.errors.seed = 9000 + std::uint64_t(horizon);
    const auto hat = sample_covariances(simulate(copy, horizon, 300));
    return (hat.sigma0 - pop.sigma0).cwiseAbs().maxCoeff() / scale;
  };

  const double coarse = err_at(1000);
  const double fine = err_at(100000);
  // Root-T rate: 100x the sample should shrink the error by about 10x.
  CHECK(fine < coarse);
  CHECK(coarse / fine > 3.0);
  CHECK(coarse / fine < 40.0);
}
