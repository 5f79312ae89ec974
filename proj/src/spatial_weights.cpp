#include "sdpd/spatial_weights.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "sdpd/errors.hpp"
#include "sdpd/linalg.hpp"
#include "sdpd/rng.hpp"

namespace sdpd {

namespace {

constexpr int kMaxGenerationAttempts = 100;
constexpr double kZeroRowTol = 1e-14;
constexpr double kInvariantTol = 1e-12;

Eigen::MatrixXd raw_w1(Eigen::Index p, std::mt19937_64& eng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = z(eng);
  }
  // m * m' is symmetric; zeroing the diagonal keeps it so.
  Eigen::MatrixXd w = m * m.transpose();
  w.diagonal().setZero();
  return w;
}

// k unit entries per row, columns drawn without replacement among the
// off-diagonal positions.
Eigen::MatrixXd raw_sparse(Eigen::Index p, Eigen::Index k,
                           std::mt19937_64& eng) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(p, p);
  std::vector<Eigen::Index> candidates(p - 1);
  for (Eigen::Index i = 0; i < p; ++i) {
    Eigen::Index n = 0;
    for (Eigen::Index j = 0; j < p; ++j) {
      if (j != i) candidates[n++] = j;
    }
    // Partial Fisher-Yates: the first k slots end up as the chosen columns.
    for (Eigen::Index s = 0; s < k; ++s) {
      std::uniform_int_distribution<Eigen::Index> pick(s, p - 2);
      std::swap(candidates[s], candidates[pick(eng)]);
      w(i, candidates[s]) = 1.0;
    }
  }
  return w;
}

double row_norm(const Eigen::RowVectorXd& row, Normalization mode) {
  return mode == Normalization::l1_row ? row.lpNorm<1>() : row.norm();
}

void normalize_rows(Eigen::MatrixXd& w, Normalization mode) {
  if (mode == Normalization::none) return;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    const double norm = row_norm(w.row(i), mode);
    if (norm < kZeroRowTol) {
      throw ZeroRow("gen_spatial_matrix(): row " + std::to_string(i + 1) +
                    " is numerically zero, cannot normalize");
    }
    w.row(i) /= norm;
  }
}

}  // namespace

SpatialWeightMatrix gen_spatial_matrix(WKind kind, Eigen::Index p,
                                       std::uint64_t seed,
                                       Normalization normalization) {
  if (p < 5) {
    throw BadSpec("gen_spatial_matrix(): p must be at least 5, got " +
                  std::to_string(p));
  }
  const Eigen::Index k_w3 =
      static_cast<Eigen::Index>(std::ceil(2.0 * std::sqrt(double(p))));
  if (kind == WKind::w3 && p <= k_w3) {
    throw BadSpec(
        "gen_spatial_matrix(): w3 needs p > ceil(2*sqrt(p)) off-diagonal "
        "slots per row, got p = " +
        std::to_string(p));
  }

  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    std::mt19937_64 eng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    Eigen::MatrixXd w;
    switch (kind) {
      case WKind::w1:
        w = raw_w1(p, eng);
        break;
      case WKind::w2:
        w = raw_sparse(p, 4, eng);
        break;
      case WKind::w3:
        w = raw_sparse(p, k_w3, eng);
        break;
    }
    try {
      normalize_rows(w, normalization);
    } catch (const ZeroRow&) {
      continue;  // treat like a failed draw and retry
    }
    if (has_full_rank(w)) {
      return SpatialWeightMatrix{std::move(w), normalization};
    }
  }
  throw DegenerateMatrix(
      "gen_spatial_matrix(): no full-rank draw after " +
      std::to_string(kMaxGenerationAttempts) + " attempts");
}

std::pair<SpatialWeightMatrix, Eigen::VectorXd> renormalize(
    const SpatialWeightMatrix& w, Normalization target) {
  if (target == Normalization::none) {
    throw BadSpec("renormalize(): target must be l1_row or l2_row");
  }
  const Eigen::Index p = w.p();
  SpatialWeightMatrix out;
  out.entries = w.entries;
  out.normalization = target;
  Eigen::VectorXd delta(p);
  for (Eigen::Index i = 0; i < p; ++i) {
    const double norm = row_norm(out.entries.row(i), target);
    if (norm < kZeroRowTol) {
      throw ZeroRow("renormalize(): row " + std::to_string(i + 1) +
                    " is numerically zero");
    }
    delta(i) = norm;
    out.entries.row(i) /= norm;
  }
  return {std::move(out), std::move(delta)};
}

void validate_spatial_weights(const SpatialWeightMatrix& w) {
  if (w.entries.rows() != w.entries.cols()) {
    throw DataError("spatial weights must be square, got " +
                    std::to_string(w.entries.rows()) + "x" +
                    std::to_string(w.entries.cols()));
  }
  if (!w.entries.allFinite()) {
    throw DataError("spatial weights contain non-finite entries");
  }
  const Eigen::Index p = w.p();
  for (Eigen::Index i = 0; i < p; ++i) {
    if (std::abs(w.entries(i, i)) > kInvariantTol) {
      throw DataError("spatial weights: diagonal entry " +
                      std::to_string(i + 1) + " is not zero");
    }
    const double l2 = w.entries.row(i).norm();
    if (l2 < kZeroRowTol) {
      throw DataError("spatial weights: row " + std::to_string(i + 1) +
                      " is the zero vector");
    }
    if (w.normalization != Normalization::none) {
      const double norm = row_norm(w.entries.row(i), w.normalization);
      if (std::abs(norm - 1.0) > kInvariantTol) {
        throw DataError("spatial weights: row " + std::to_string(i + 1) +
                        " is not unit-norm under the declared normalization");
      }
    }
  }
}

}  // namespace sdpd
