#ifndef MLNF_NETSTRUCT_HPP_
#define MLNF_NETSTRUCT_HPP_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mlnf/matcore.hpp"

namespace mlnf {

/// Raised when a horizontal network violates symmetry, zero diagonal, or nonnegativity.
class NetworkError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the symmetric eigensolver does not converge or leaves large residuals.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Undirected weighted network between nodes of the same kind. The weight matrix is
/// validated on construction: square, symmetric, zero diagonal, finite and nonnegative.
/// Asymmetric input is rejected, not averaged.
class HorizontalNetwork {
 public:
  explicit HorizontalNetwork(DenseMatrix weights);

  /// An n-node network with no edges.
  static HorizontalNetwork edgeless(std::size_t n);

  std::size_t size() const { return weights_.rows(); }
  const DenseMatrix& weights() const { return weights_; }
  double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }

 private:
  DenseMatrix weights_;
};

/// Edge indicator of a maximum spanning forest (mask) and of every other off-diagonal
/// position (complement). Both are symmetric 0/1 matrices with zero diagonal.
struct TreeMask {
  DenseMatrix mask;
  DenseMatrix complement;
  std::size_t edge_count = 0;
  std::size_t components = 0;

  std::size_t size() const { return mask.rows(); }
};

/// The k eigenpairs of the Laplacian with the smallest eigenvalues, ascending.
/// Each column is sign-canonicalized so that its largest-magnitude entry is positive.
struct CommunityBasis {
  DenseMatrix basis;
  Vector eigenvalues;
};

/// L = D - H with D the diagonal weighted-degree matrix.
DenseMatrix laplacian(const HorizontalNetwork& h);

CommunityBasis community_basis(const HorizontalNetwork& h, std::size_t k);

/// Kruskal over edges sorted by descending weight; equal weights are taken in
/// ascending (row, col) order. Disconnected inputs yield a spanning forest.
TreeMask max_spanning_tree(const HorizontalNetwork& h);

/// Same as max_spanning_tree but over an arbitrary symmetric score matrix whose
/// diagonal is ignored and whose entries need not be sparse (e.g. a reconstruction A A^T).
/// Only strictly positive entries count as edges.
TreeMask max_spanning_tree_of_scores(const DenseMatrix& scores);

Vector degree_sequence(const HorizontalNetwork& h);

/// Number of undirected edges present in both masks.
std::size_t tree_overlap(const TreeMask& t1, const TreeMask& t2);

/// Total weight of the mask's edges under h (each undirected edge counted once).
double tree_weight(const TreeMask& t, const HorizontalNetwork& h);

}  // namespace mlnf

#endif  // MLNF_NETSTRUCT_HPP_
