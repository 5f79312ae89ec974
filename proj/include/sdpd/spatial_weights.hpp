#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

namespace sdpd {

enum class Normalization { none, l1_row, l2_row };

// The three stock designs: w1 is a dense symmetric random matrix (a standard
// normal matrix times its transpose), w2 places four unit entries per row,
// w3 places ceil(2*sqrt(p)) unit entries per row. In every case the main
// diagonal is zeroed before row normalization.
enum class WKind { w1, w2, w3 };

// Row-normalized spatial link matrix with zero main diagonal. Row i collects
// the weights location i puts on its neighbours.
struct SpatialWeightMatrix {
  Eigen::MatrixXd entries;
  Normalization normalization = Normalization::none;

  Eigen::Index p() const { return entries.rows(); }
  // Neighbour weights of location i as a column vector.
  Eigen::VectorXd row_vector(Eigen::Index i) const {
    return entries.row(i).transpose();
  }
};

// Draws a matrix of the requested kind and keeps redrawing (bounded number
// of attempts, each with a seed derived from `seed`) until the normalized
// zero-diagonal matrix has full numerical rank. Throws BadSpec when p is too
// small for the requested kind and DegenerateMatrix when no attempt reaches
// rank p.
SpatialWeightMatrix gen_spatial_matrix(
    WKind kind, Eigen::Index p, std::uint64_t seed,
    Normalization normalization = Normalization::l2_row);

// Rescales each row to unit norm under `target` and returns the per-row
// factors delta, new_row_i = old_row_i / delta_i. Multiplying lambda0_i by
// delta_i leaves I - diag(lambda0) W unchanged, so a model can be carried
// across normalizations without re-estimation.
std::pair<SpatialWeightMatrix, Eigen::VectorXd> renormalize(
    const SpatialWeightMatrix& w, Normalization target);

// Checks the structural invariants (square, finite, zero diagonal, no zero
// row, unit row norms when a normalization is declared) and throws DataError
// on the first violation.
void validate_spatial_weights(const SpatialWeightMatrix& w);

}  // namespace sdpd
