#include "mlnf/netstruct.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mlnf {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

struct WeightedEdge {
  double weight;
  std::size_t row;
  std::size_t col;
};

}  // namespace

HorizontalNetwork::HorizontalNetwork(DenseMatrix weights) : weights_(std::move(weights)) {
  const std::size_t n = weights_.rows();
  if (weights_.cols() != n) {
    throw DimensionError("HorizontalNetwork: weight matrix must be square, got " +
                         weights_.shape_string());
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (weights_(i, i) != 0.0) {
      throw NetworkError("HorizontalNetwork: nonzero diagonal at node " + std::to_string(i));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = weights_(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw NetworkError("HorizontalNetwork: weight (" + std::to_string(i) + ", " +
                           std::to_string(j) + ") is negative or not finite");
      }
      if (w != weights_(j, i)) {
        throw NetworkError("HorizontalNetwork: asymmetric weights at (" + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
      }
    }
  }
}

HorizontalNetwork HorizontalNetwork::edgeless(std::size_t n) {
  return HorizontalNetwork(DenseMatrix(n, n));
}

DenseMatrix laplacian(const HorizontalNetwork& h) {
  const std::size_t n = h.size();
  DenseMatrix l(n, n);
  const Vector deg = row_sums(h.weights());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) l(i, j) = -h.weight(i, j);
    l(i, i) = deg[i];
  }
  return l;
}

CommunityBasis community_basis(const HorizontalNetwork& h, std::size_t k) {
  const std::size_t n = h.size();
  if (k < 1 || k > n) {
    throw DimensionError("community_basis: k=" + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
  }
  const DenseMatrix l = laplacian(h);
  Eigen::MatrixXd lm(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) lm(i, j) = l(i, j);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lm);
  if (solver.info() != Eigen::Success) {
    throw SolverError("community_basis: symmetric eigensolver did not converge");
  }
  // Eigen returns eigenvalues in ascending order.
  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();

  CommunityBasis out{DenseMatrix(n, k), Vector(k)};
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(l(i, i)));

  for (std::size_t c = 0; c < k; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    std::size_t arg = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(vectors(static_cast<Eigen::Index>(i), col)) >
          std::abs(vectors(static_cast<Eigen::Index>(arg), col))) {
        arg = i;
      }
    }
    const double sign = vectors(static_cast<Eigen::Index>(arg), col) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.basis(i, c) = sign * vectors(static_cast<Eigen::Index>(i), col);
    }
    out.eigenvalues[c] = values(col);

    const Eigen::VectorXd residual =
        lm * vectors.col(col) - values(col) * vectors.col(col);
    if (!(residual.norm() <= 1e-8 * scale)) {
      throw SolverError("community_basis: eigenpair " + std::to_string(c) +
                        " residual " + std::to_string(residual.norm()) + " exceeds tolerance");
    }
  }
  return out;
}

TreeMask max_spanning_tree_of_scores(const DenseMatrix& scores) {
  const std::size_t n = scores.rows();
  if (scores.cols() != n) {
    throw DimensionError("max_spanning_tree: score matrix must be square, got " +
                         scores.shape_string());
  }
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (scores(i, j) > 0.0) edges.push_back({scores(i, j), i, j});

  // Stable sort keeps ascending (row, col) order among equal weights.
  std::stable_sort(edges.begin(), edges.end(),
                   [](const WeightedEdge& a, const WeightedEdge& b) { return a.weight > b.weight; });

  TreeMask t{DenseMatrix(n, n), DenseMatrix(n, n), 0, n};
  UnionFind uf(n);
  for (const auto& e : edges) {
    if (t.edge_count + 1 == n) break;
    if (uf.unite(e.row, e.col)) {
      t.mask(e.row, e.col) = 1.0;
      t.mask(e.col, e.row) = 1.0;
      ++t.edge_count;
    }
  }
  t.components = n - t.edge_count;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) t.complement(i, j) = 1.0 - t.mask(i, j);
  return t;
}

TreeMask max_spanning_tree(const HorizontalNetwork& h) {
  return max_spanning_tree_of_scores(h.weights());
}

Vector degree_sequence(const HorizontalNetwork& h) { return row_sums(h.weights()); }

std::size_t tree_overlap(const TreeMask& t1, const TreeMask& t2) {
  if (t1.size() != t2.size()) {
    throw DimensionError("tree_overlap: masks over " + std::to_string(t1.size()) + " and " +
                         std::to_string(t2.size()) + " nodes");
  }
  std::size_t shared = 0;
  const std::size_t n = t1.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (t1.mask(i, j) != 0.0 && t2.mask(i, j) != 0.0) ++shared;
  return shared;
}

double tree_weight(const TreeMask& t, const HorizontalNetwork& h) {
  if (t.size() != h.size()) throw DimensionError("tree_weight: size mismatch");
  double w = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t.mask(i, j) != 0.0) w += h.weight(i, j);
  return w;
}

}  // namespace mlnf
