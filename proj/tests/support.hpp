// Independent reference implementations used by the unit and acceptance tests.
// Nothing here calls into the library's numeric kernels.
#ifndef MLNF_TESTS_SUPPORT_HPP_
#define MLNF_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

#include "mlnf/matcore.hpp"
#include "mlnf/netstruct.hpp"

namespace oracle {

using mlnf::DenseMatrix;

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng,
                                 double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  DenseMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
  return m;
}

/// Symmetric, zero-diagonal, nonnegative weights with the given edge probability.
inline DenseMatrix random_network_weights(std::size_t n, double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DenseMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (u(rng) < density) {
        const double x = 0.05 + u(rng);
        w(i, j) = x;
        w(j, i) = x;
      }
  return w;
}

inline DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < a.cols(); ++l) s += a(i, l) * b(l, j);
      c(i, j) = s;
    }
  return c;
}

inline DenseMatrix naive_transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double frob(const DenseMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

inline double relative_error(const DenseMatrix& got, const DenseMatrix& want) {
  double num = 0.0;
  for (std::size_t i = 0; i < got.rows(); ++i)
    for (std::size_t j = 0; j < got.cols(); ++j)
      num += (got(i, j) - want(i, j)) * (got(i, j) - want(i, j));
  const double den = frob(want);
  return std::sqrt(num) / (den > 0.0 ? den : 1.0);
}

/// Central differences of f at m, step h, one entry at a time.
inline DenseMatrix central_difference(const std::function<double(const DenseMatrix&)>& f,
                                      const DenseMatrix& m, double h = 1e-6) {
  DenseMatrix g(m.rows(), m.cols());
  DenseMatrix probe = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double keep = probe(i, j);
      probe(i, j) = keep + h;
      const double up = f(probe);
      probe(i, j) = keep - h;
      const double down = f(probe);
      probe(i, j) = keep;
      g(i, j) = (up - down) / (2.0 * h);
    }
  return g;
}

/// Cyclic Jacobi eigensolver for a small symmetric matrix. Returns eigenvalues in
/// ascending order and the matching eigenvectors as columns.
inline std::pair<std::vector<double>, DenseMatrix> jacobi_eigen(DenseMatrix a) {
  const std::size_t n = a.rows();
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  std::vector<double> values(n);
  DenseMatrix vectors(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) vectors(r, c) = v(r, order[c]);
  }
  return {values, vectors};
}

/// Weight of the heaviest spanning forest, by enumerating every edge subset of the
/// right size and keeping the acyclic ones. Only practical for n <= 6.
inline double brute_force_max_forest_weight(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (w(i, j) > 0.0) edges.emplace_back(i, j);

  auto find = [](std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  // Forest size n - components, with components counted by a plain DFS over all edges.
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [i, j] : edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  std::vector<bool> seen(n, false);
  std::size_t components = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++components;
    std::vector<std::size_t> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t x : adj[u])
        if (!seen[x]) {
          seen[x] = true;
          stack.push_back(x);
        }
    }
  }
  const std::size_t want = n - components;

  double best = 0.0;
  const std::size_t m = edges.size();
  for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
    if (static_cast<std::size_t>(__builtin_popcount(subset)) != want) continue;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    bool acyclic = true;
    double total = 0.0;
    for (std::size_t e = 0; e < m && acyclic; ++e) {
      if (!(subset & (1u << e))) continue;
      const std::size_t ri = find(parent, edges[e].first);
      const std::size_t rj = find(parent, edges[e].second);
      if (ri == rj) acyclic = false;
      parent[ri] = rj;
      total += w(edges[e].first, edges[e].second);
    }
    if (acyclic) best = std::max(best, total);
  }
  return best;
}

struct BrutePairs {
  std::uint64_t a = 0, b = 0, c = 0;
};

/// a: same in both; b: same in truth only; c: same in pred only.
inline BrutePairs brute_pairs(const std::vector<int>& truth, const std::vector<int>& pred) {
  BrutePairs r;
  for (std::size_t i = 0; i < truth.size(); ++i)
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      const bool t = truth[i] == truth[j];
      const bool p = pred[i] == pred[j];
      if (t && p) ++r.a;
      else if (t) ++r.b;
      else if (p) ++r.c;
    }
  return r;
}

inline double two_pass_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle

#endif  // MLNF_TESTS_SUPPORT_HPP_
