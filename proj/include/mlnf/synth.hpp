#ifndef MLNF_SYNTH_HPP_
#define MLNF_SYNTH_HPP_

#include <cstddef>
#include <cstdint>

#include "mlnf/eval.hpp"
#include "mlnf/matcore.hpp"
#include "mlnf/netstruct.hpp"

namespace mlnf {

struct SyntheticPair {
  DenseMatrix v;
  HorizontalNetwork h;
};

/// V (n x p) with i.i.d. uniform(0,1) entries; H an n-node network in which each
/// unordered pair is present with probability `density` and carries a uniform(0,1)
/// weight. Deterministic per seed.
SyntheticPair generate_synthetic_pair(std::size_t n, std::size_t p, double density,
                                      std::uint64_t seed);

/// Documents x words with a planted class per document and a citation network that
/// mostly links documents of the same class.
struct PlantedInstance {
  DenseMatrix v;
  HorizontalNetwork h;
  LabelVector labels;
};

struct PlantedOptions {
  std::size_t classes = 4;
  /// Expected number of same-class citations per document.
  double within_degree = 6.0;
  /// Expected number of cross-class citations per document.
  double across_degree = 1.0;
  /// Mean count of a topic word in a document of that topic, and of any other word.
  double topic_rate = 2.0;
  double background_rate = 0.3;
};

PlantedInstance generate_planted_instance(std::size_t n, std::size_t p, std::uint64_t seed,
                                          const PlantedOptions& opts = {});

/// Rating-like data V = U W + noise on [0, 5] with a user network linking users whose
/// latent tastes are close, used by the recommendation protocol.
struct RatingInstance {
  DenseMatrix v;
  HorizontalNetwork h;
};

RatingInstance generate_rating_instance(std::size_t n, std::size_t p, std::size_t rank,
                                        double density, std::uint64_t seed);

}  // namespace mlnf

#endif  // MLNF_SYNTH_HPP_
