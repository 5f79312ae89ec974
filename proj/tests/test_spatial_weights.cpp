#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sdpd/errors.hpp"
#include "sdpd/linalg.hpp"
#include "sdpd/spatial_weights.hpp"

using namespace sdpd;

namespace {

Eigen::Index nonzeros_in_row(const Eigen::MatrixXd& m, Eigen::Index i) {
  Eigen::Index n = 0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m(i, j) != 0.0) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("four-neighbour design: 4 entries of 1/2 per row under l2") {
  const auto w = gen_spatial_matrix(WKind::w2, 10, 7);
  REQUIRE(w.p() == 10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    CHECK(nonzeros_in_row(w.entries, i) == 4);
    for (Eigen::Index j = 0; j < 10; ++j) {
      if (w.entries(i, j) != 0.0) {
        CHECK(w.entries(i, j) == doctest::Approx(0.5).epsilon(1e-12));
      }
    }
  }
  CHECK(w.normalization == Normalization::l2_row);
  CHECK(has_full_rank(w.entries));
}

TEST_CASE("sqrt-p design: ceil(2*sqrt(100)) = 20 entries of 1/sqrt(20)") {
  const auto w = gen_spatial_matrix(WKind::w3, 100, 3);
  const double expected = 1.0 / std::sqrt(20.0);
  for (Eigen::Index i = 0; i < 100; ++i) {
    CHECK(nonzeros_in_row(w.entries, i) == 20);
    for (Eigen::Index j = 0; j < 100; ++j) {
      if (w.entries(i, j) != 0.0) {
        CHECK(w.entries(i, j) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("dense design: zero diagonal, unit rows, full rank") {
  const auto w = gen_spatial_matrix(WKind::w1, 12, 99);
  CHECK(w.entries.diagonal().cwiseAbs().maxCoeff() == 0.0);
  for (Eigen::Index i = 0; i < 12; ++i) {
    CHECK(w.entries.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(has_full_rank(w.entries));
  CHECK_NOTHROW(validate_spatial_weights(w));
}

TEST_CASE("dense design is symmetric before normalization") {
  const auto w = gen_spatial_matrix(WKind::w1, 9, 4, Normalization::none);
  CHECK((w.entries - w.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("l1 normalization gives unit absolute row sums") {
  const auto w =
      gen_spatial_matrix(WKind::w1, 8, 11, Normalization::l1_row);
  for (Eigen::Index i = 0; i < 8; ++i) {
    CHECK(w.entries.row(i).lpNorm<1>() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const auto a = gen_spatial_matrix(WKind::w1, 10, 42);
  const auto b = gen_spatial_matrix(WKind::w1, 10, 42);
  const auto c = gen_spatial_matrix(WKind::w1, 10, 43);
  CHECK(a.entries == b.entries);
  CHECK(a.entries != c.entries);
}

TEST_CASE("size preconditions") {
  CHECK_THROWS_AS(gen_spatial_matrix(WKind::w1, 4, 1), BadSpec);
  CHECK_THROWS_AS(gen_spatial_matrix(WKind::w2, 4, 1), BadSpec);
  // p = 5 leaves only 4 off-diagonal slots but ceil(2*sqrt(5)) = 5 are needed.
  CHECK_THROWS_AS(gen_spatial_matrix(WKind::w3, 5, 1), BadSpec);
  CHECK_NOTHROW(gen_spatial_matrix(WKind::w3, 10, 1));
}

TEST_CASE("renormalize: all-ones rows become 1/2 under l2, 1/4 under l1") {
  SpatialWeightMatrix w;
  w.entries = Eigen::MatrixXd::Ones(5, 5);
  w.entries.diagonal().setZero();
  w.normalization = Normalization::none;

  const auto [w2, d2] = renormalize(w, Normalization::l2_row);
  CHECK(d2.isApproxToConstant(2.0, 1e-15));
  for (Eigen::Index i = 0; i < 5; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double expected = i == j ? 0.0 : 0.5;
      CHECK(w2.entries(i, j) == doctest::Approx(expected).epsilon(1e-15));
    }
  }

  const auto [w1, d1] = renormalize(w, Normalization::l1_row);
  CHECK(d1.isApproxToConstant(4.0, 1e-15));
  CHECK(w1.entries(0, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(w1.normalization == Normalization::l1_row);
}

TEST_CASE("renormalize keeps the spatial filter unchanged") {
  const auto w = gen_spatial_matrix(WKind::w1, 10, 5);
  Eigen::VectorXd lambda0(10);
  for (Eigen::Index i = 0; i < 10; ++i) lambda0(i) = -0.6 + 0.11 * double(i);

  const auto [wl1, delta] = renormalize(w, Normalization::l1_row);
  const Eigen::MatrixXd before =
      Eigen::MatrixXd::Identity(10, 10) - lambda0.asDiagonal() * w.entries;
  const Eigen::VectorXd scaled = lambda0.cwiseProduct(delta);
  const Eigen::MatrixXd after =
      Eigen::MatrixXd::Identity(10, 10) - scaled.asDiagonal() * wl1.entries;
  CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("renormalize composes: l1 then l2 equals l2 directly") {
  const auto w = gen_spatial_matrix(WKind::w1, 7, 21);
  const auto via_l1 =
      renormalize(renormalize(w, Normalization::l1_row).first,
                  Normalization::l2_row)
          .first;
  const auto direct = renormalize(w, Normalization::l2_row).first;
  CHECK((via_l1.entries - direct.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("renormalize rejects a zero row and a 'none' target") {
  SpatialWeightMatrix w;
  w.entries = Eigen::MatrixXd::Zero(5, 5);
  w.entries(0, 1) = 1.0;  // rows 2..5 stay zero
  CHECK_THROWS_AS(renormalize(w, Normalization::l2_row), ZeroRow);
  CHECK_THROWS_AS(renormalize(w, Normalization::none), BadSpec);
}

TEST_CASE("invariant validation catches each violation") {
  auto w = gen_spatial_matrix(WKind::w2, 8, 13);

  SpatialWeightMatrix bad_diag = w;
  bad_diag.entries(2, 2) = 1e-6;
  CHECK_THROWS_AS(validate_spatial_weights(bad_diag), DataError);

  SpatialWeightMatrix bad_row = w;
  bad_row.entries.row(3).setZero();
  CHECK_THROWS_AS(validate_spatial_weights(bad_row), DataError);

  SpatialWeightMatrix bad_norm = w;
  bad_norm.entries.row(1) *= 1.5;  // declared l2 but no longer unit
  CHECK_THROWS_AS(validate_spatial_weights(bad_norm), DataError);

  SpatialWeightMatrix not_square;
  not_square.entries = Eigen::MatrixXd::Zero(3, 4);
  CHECK_THROWS_AS(validate_spatial_weights(not_square), DataError);
}

TEST_CASE("rank utility distinguishes singular from regular") {
  CHECK(has_full_rank(Eigen::MatrixXd::Identity(6, 6)));
  CHECK_FALSE(has_full_rank(Eigen::MatrixXd::Ones(6, 6)));
  Eigen::MatrixXd nearly = Eigen::MatrixXd::Identity(4, 4);
  nearly(3, 3) = 1e-17;
  CHECK_FALSE(has_full_rank(nearly));
  CHECK_THROWS_AS(has_full_rank(Eigen::MatrixXd::Zero(2, 3)), BadSpec);
}
