#include "mlnf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>

namespace mlnf {

namespace {

std::uint64_t choose2(std::uint64_t m) { return m * (m - (m > 0 ? 1 : 0)) / 2; }

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct LloydRun {
  LabelVector labels;
  double wcss;
  std::vector<double> history;
};

LloydRun lloyd(const DenseMatrix& points, std::size_t clusters, std::size_t first_center) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();

  // Greedy farthest-point seeding.
  std::vector<std::size_t> chosen{first_center};
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(n, false);
  taken[first_center] = true;
  while (chosen.size() < clusters) {
    const auto last = points.row(chosen.back());
    std::size_t best = n;
    double best_dist = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), last));
      if (!taken[i] && nearest[i] > best_dist) {
        best_dist = nearest[i];
        best = i;
      }
    }
    taken[best] = true;
    chosen.push_back(best);
  }

  DenseMatrix centers(clusters, d);
  for (std::size_t c = 0; c < clusters; ++c)
    std::copy_n(points.row(chosen[c]).begin(), d, centers.row(c).begin());

  LloydRun run{LabelVector(n, -1), 0.0, {}};
  constexpr std::size_t kMaxLloyd = 300;
  for (std::size_t iter = 0; iter < kMaxLloyd; ++iter) {
    bool changed = false;
    std::vector<double> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(points.row(i), centers.row(0));
      for (std::size_t c = 1; c < clusters; ++c) {
        const double dc = squared_distance(points.row(i), centers.row(c));
        if (dc < best_d) {
          best_d = dc;
          best = static_cast<int>(c);
        }
      }
      dist[i] = best_d;
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }

    // Re-seed empty clusters with the point farthest from its center among clusters
    // that can spare one.
    std::vector<std::size_t> counts(clusters, 0);
    for (int l : run.labels) ++counts[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < clusters; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(run.labels[i])] > 1 && dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      if (far == n) break;
      --counts[static_cast<std::size_t>(run.labels[far])];
      run.labels[far] = static_cast<int>(c);
      counts[c] = 1;
      dist[far] = 0.0;
      changed = true;
    }

    centers = DenseMatrix(clusters, d);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = centers.row(static_cast<std::size_t>(run.labels[i]));
      const auto p = points.row(i);
      for (std::size_t j = 0; j < d; ++j) row[j] += p[j];
    }
    for (std::size_t c = 0; c < clusters; ++c)
      if (counts[c] > 0)
        for (double& v : centers.row(c)) v /= static_cast<double>(counts[c]);

    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      wcss += squared_distance(points.row(i),
                               centers.row(static_cast<std::size_t>(run.labels[i])));
    run.wcss = wcss;
    run.history.push_back(wcss);
    if (!changed) break;
  }
  return run;
}

}  // namespace

PairCounts pair_counts(std::span<const int> truth, std::span<const int> pred) {
  if (truth.size() != pred.size()) {
    throw DimensionError("pair_counts: label vectors of length " + std::to_string(truth.size()) +
                         " and " + std::to_string(pred.size()));
  }
  std::map<std::pair<int, int>, std::uint64_t> joint;
  std::map<int, std::uint64_t> by_truth;
  std::map<int, std::uint64_t> by_pred;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++joint[{truth[i], pred[i]}];
    ++by_truth[truth[i]];
    ++by_pred[pred[i]];
  }
  std::uint64_t same_both = 0;
  for (const auto& [key, count] : joint) same_both += choose2(count);
  std::uint64_t same_truth = 0;
  for (const auto& [key, count] : by_truth) same_truth += choose2(count);
  std::uint64_t same_pred = 0;
  for (const auto& [key, count] : by_pred) same_pred += choose2(count);
  return {same_both, same_truth - same_both, same_pred - same_both};
}

double jaccard(const PairCounts& pc) {
  const double denom = static_cast<double>(pc.a + pc.b + pc.c);
  return denom > 0.0 ? static_cast<double>(pc.a) / denom : 0.0;
}

double fowlkes_mallows(const PairCounts& pc) {
  if (pc.a == 0) return 0.0;
  const double a = static_cast<double>(pc.a);
  return std::sqrt(a / (a + static_cast<double>(pc.b)) * (a / (a + static_cast<double>(pc.c))));
}

double f1(const PairCounts& pc) {
  if (pc.a == 0) return 0.0;
  const double a = static_cast<double>(pc.a);
  return 2.0 * a * a /
         (2.0 * a * a + a * static_cast<double>(pc.c) + a * static_cast<double>(pc.b));
}

ClusterScores cluster_scores(std::span<const int> truth, std::span<const int> pred) {
  const PairCounts pc = pair_counts(truth, pred);
  return {jaccard(pc), fowlkes_mallows(pc), f1(pc)};
}

double within_cluster_ss(const DenseMatrix& points, std::span<const int> labels) {
  if (labels.size() != points.rows()) throw DimensionError("within_cluster_ss: label length");
  std::map<int, std::pair<std::vector<double>, std::size_t>> sums;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    auto& [sum, count] = sums[labels[i]];
    if (sum.empty()) sum.assign(points.cols(), 0.0);
    for (std::size_t j = 0; j < points.cols(); ++j) sum[j] += points(i, j);
    ++count;
  }
  double wcss = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    const auto& [sum, count] = sums[labels[i]];
    for (std::size_t j = 0; j < points.cols(); ++j) {
      const double d = points(i, j) - sum[j] / static_cast<double>(count);
      wcss += d * d;
    }
  }
  return wcss;
}

KMeansResult kmeans_detailed(const DenseMatrix& points, std::size_t clusters,
                             std::uint64_t seed, std::size_t restarts) {
  const std::size_t n = points.rows();
  if (clusters < 1 || clusters > n) {
    throw InputError("kmeans: clusters=" + std::to_string(clusters) + " must be in [1, " +
                     std::to_string(n) + "]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    LloydRun run = lloyd(points, clusters, pick(rng));
    if (run.wcss < best.wcss) {
      best.labels = std::move(run.labels);
      best.wcss = run.wcss;
      best.history = std::move(run.history);
    }
  }
  return best;
}

LabelVector kmeans(const DenseMatrix& points, std::size_t clusters, std::uint64_t seed,
                   std::size_t restarts) {
  return kmeans_detailed(points, clusters, seed, restarts).labels;
}

double mae(std::span<const double> pred, std::span<const double> actual) {
  if (pred.size() != actual.size()) {
    throw DimensionError("mae: lengths " + std::to_string(pred.size()) + " and " +
                         std::to_string(actual.size()));
  }
  if (pred.empty()) throw InputError("mae: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - actual[i]);
  return s / static_cast<double>(pred.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DimensionError("pearson: lengths " + std::to_string(x.size()) + " and " +
                         std::to_string(y.size()));
  }
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double degree_correlation(const HorizontalNetwork& h, const DenseMatrix& a) {
  if (a.rows() != h.size()) {
    throw DimensionError("degree_correlation: A is " + a.shape_string() + " but H has " +
                         std::to_string(h.size()) + " nodes");
  }
  const Vector reconstructed = matvec(a, col_sums(a));  // row sums of A A^T
  return pearson(degree_sequence(h), reconstructed);
}

StructureReport structure_scores(const HorizontalNetwork& h, const DenseMatrix& a,
                                 const StructureScoreOptions& opts) {
  if (a.rows() != h.size()) {
    throw DimensionError("structure_scores: A is " + a.shape_string() + " but H has " +
                         std::to_string(h.size()) + " nodes");
  }
  const std::size_t clusters = opts.clusters == 0 ? a.cols() : opts.clusters;
  StructureReport report;

  const CommunityBasis basis = community_basis(h, clusters);
  const LabelVector truth = kmeans(basis.basis, clusters, opts.seed, opts.restarts);
  const LabelVector pred = kmeans(a, clusters, opts.seed, opts.restarts);
  report.community = cluster_scores(truth, pred);

  report.degree_correlation = degree_correlation(h, a);

  const TreeMask original = max_spanning_tree(h);
  const TreeMask rebuilt = max_spanning_tree_of_scores(matmul_nt(a, a));
  report.tree_overlap = tree_overlap(original, rebuilt);
  report.tree_edges = original.edge_count;
  return report;
}

StructureReport structure_scores(const HorizontalNetwork& h, const FactorResult& result,
                                 const StructureScoreOptions& opts) {
  return structure_scores(h, result.a, opts);
}

ClusterScores permutation_baseline(std::span<const int> truth, std::span<const int> pred,
                                   std::size_t permutations, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabelVector shuffled(pred.begin(), pred.end());
  ClusterScores mean;
  for (std::size_t r = 0; r < permutations; ++r) {
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const ClusterScores s = cluster_scores(truth, shuffled);
    mean.jc += s.jc;
    mean.fm += s.fm;
    mean.f1 += s.f1;
  }
  if (permutations > 0) {
    const double m = static_cast<double>(permutations);
    mean.jc /= m;
    mean.fm /= m;
    mean.f1 /= m;
  }
  return mean;
}

}  // namespace mlnf
