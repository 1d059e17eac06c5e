#include "mlnf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace mlnf {

SyntheticPair generate_synthetic_pair(std::size_t n, std::size_t p, double density,
                                      std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) {
    throw InputError("generate_synthetic_pair: density must be in (0, 1], got " +
                     std::to_string(density));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DenseMatrix v(n, p);
  for (double& x : v.data()) x = unit(rng);
  DenseMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Two draws per pair regardless of density keeps the stream aligned across densities.
      const double coin = unit(rng);
      const double weight = unit(rng);
      if (coin < density && weight > 0.0) {
        w(i, j) = weight;
        w(j, i) = weight;
      }
    }
  }
  return {std::move(v), HorizontalNetwork(std::move(w))};
}

PlantedInstance generate_planted_instance(std::size_t n, std::size_t p, std::uint64_t seed,
                                          const PlantedOptions& opts) {
  if (opts.classes < 1 || opts.classes > n || opts.classes > p) {
    throw InputError("generate_planted_instance: classes must be in [1, min(n, p)]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  LabelVector labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % opts.classes);
  std::shuffle(labels.begin(), labels.end(), rng);

  // Word j belongs to topic j % classes.
  DenseMatrix v(n, p);
  std::poisson_distribution<int> topic_count(opts.topic_rate);
  std::poisson_distribution<int> background_count(opts.background_rate);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const bool on_topic = static_cast<int>(j % opts.classes) == labels[i];
      v(i, j) = on_topic ? topic_count(rng) : background_count(rng);
    }
  }

  std::vector<std::size_t> class_size(opts.classes, 0);
  for (int l : labels) ++class_size[static_cast<std::size_t>(l)];
  DenseMatrix w(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = labels[i] == labels[j];
      const double peers = same ? static_cast<double>(class_size[static_cast<std::size_t>(labels[i])] - 1)
                                : static_cast<double>(n - class_size[static_cast<std::size_t>(labels[i])]);
      const double rate = same ? opts.within_degree : opts.across_degree;
      const double prob = peers > 0.0 ? std::min(1.0, rate / peers) : 0.0;
      if (unit(rng) < prob) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  }
  return {std::move(v), HorizontalNetwork(std::move(w)), std::move(labels)};
}

RatingInstance generate_rating_instance(std::size_t n, std::size_t p, std::size_t rank,
                                        double density, std::uint64_t seed) {
  if (rank < 1) throw InputError("generate_rating_instance: rank must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) {
    throw InputError("generate_rating_instance: density must be in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 0.25);

  DenseMatrix users(n, rank);
  DenseMatrix items(rank, p);
  for (double& x : users.data()) x = unit(rng);
  for (double& x : items.data()) x = unit(rng);
  DenseMatrix v = matmul(users, items);
  const double scale = 5.0 / static_cast<double>(rank) * 2.0;
  for (double& x : v.data()) x = std::clamp(x * scale + noise(rng), 0.0, 5.0);

  // Link the `density` fraction of pairs with the most similar tastes.
  const DenseMatrix sim = matmul_nt(users, users);
  std::vector<double> upper;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) upper.push_back(sim(i, j));
  DenseMatrix w(n, n);
  if (!upper.empty()) {
    std::vector<double> sorted = upper;
    std::sort(sorted.begin(), sorted.end());
    const auto cut_index = static_cast<std::size_t>(
        std::floor((1.0 - density) * static_cast<double>(sorted.size() - 1)));
    const double cut = sorted[cut_index];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (sim(i, j) >= cut) {
          w(i, j) = sim(i, j);
          w(j, i) = sim(i, j);
        }
  }
  return {std::move(v), HorizontalNetwork(std::move(w))};
}

}  // namespace mlnf
