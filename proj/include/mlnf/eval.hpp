#ifndef MLNF_EVAL_HPP_
#define MLNF_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mlnf/factor.hpp"
#include "mlnf/matcore.hpp"
#include "mlnf/netstruct.hpp"

namespace mlnf {

/// Cluster ids per point. Ids are arbitrary; every metric is invariant under relabeling.
using LabelVector = std::vector<int>;

/// Pair counts over all unordered point pairs:
///   a  same cluster in truth and in prediction
///   b  same cluster in truth, different in prediction
///   c  different in truth, same in prediction
struct PairCounts {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t c = 0;
};

PairCounts pair_counts(std::span<const int> truth, std::span<const int> pred);

// All three return 0 when their denominator vanishes.
double jaccard(const PairCounts& pc);          // a / (a + b + c)
double fowlkes_mallows(const PairCounts& pc);  // sqrt(a/(a+b) * a/(a+c))
double f1(const PairCounts& pc);               // 2a^2 / (2a^2 + ac + ab)

struct ClusterScores {
  double jc = 0.0;
  double fm = 0.0;
  double f1 = 0.0;
};

ClusterScores cluster_scores(std::span<const int> truth, std::span<const int> pred);

struct KMeansResult {
  LabelVector labels;
  double wcss = 0.0;
  /// WCSS after each Lloyd iteration of the winning restart.
  std::vector<double> history;
};

/// Lloyd's algorithm with greedy farthest-point seeding (first center drawn from the
/// seeded generator) and best-of-restarts selection by within-cluster sum of squares.
KMeansResult kmeans_detailed(const DenseMatrix& points, std::size_t clusters,
                             std::uint64_t seed, std::size_t restarts = 10);
LabelVector kmeans(const DenseMatrix& points, std::size_t clusters, std::uint64_t seed,
                   std::size_t restarts = 10);

double within_cluster_ss(const DenseMatrix& points, std::span<const int> labels);

/// Mean absolute error. Throws InputError on empty input.
double mae(std::span<const double> pred, std::span<const double> actual);

/// Pearson correlation; 0 when either side has zero variance or fewer than two points.
double pearson(std::span<const double> x, std::span<const double> y);

/// pearson(degree_sequence(h), row_sums(A A^T))
double degree_correlation(const HorizontalNetwork& h, const DenseMatrix& a);

struct StructureScoreOptions {
  /// Number of communities; 0 means A.cols().
  std::size_t clusters = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
};

struct StructureReport {
  ClusterScores community;
  double degree_correlation = 0.0;
  std::size_t tree_overlap = 0;
  std::size_t tree_edges = 0;
};

/// Benchmark communities of H come from k-means on its smallest Laplacian eigenvectors;
/// the reconstruction's communities from k-means on the rows of A. Tree overlap compares
/// the max spanning tree of A A^T with that of H.
StructureReport structure_scores(const HorizontalNetwork& h, const DenseMatrix& a,
                                 const StructureScoreOptions& opts = {});
StructureReport structure_scores(const HorizontalNetwork& h, const FactorResult& result,
                                 const StructureScoreOptions& opts = {});

/// Mean scores of `permutations` random shuffles of pred against truth.
ClusterScores permutation_baseline(std::span<const int> truth, std::span<const int> pred,
                                   std::size_t permutations, std::uint64_t seed);

}  // namespace mlnf

#endif  // MLNF_EVAL_HPP_
