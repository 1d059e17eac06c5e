#ifndef MLNF_EXPERIMENT_HPP_
#define MLNF_EXPERIMENT_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mlnf/factor.hpp"

namespace mlnf {

enum class Protocol { convergence, community, degree, tree, clustering, recommendation };

std::string_view protocol_name(Protocol p);
Protocol parse_protocol(std::string_view name);

struct ExperimentSpec {
  Protocol protocol = Protocol::degree;
  std::size_t trials = 100;
  std::size_t n = 100;
  std::size_t p = 0;  // 0 means p = n
  FactorConfig cfg;
  /// Empty means the protocol's default comparison (e.g. nnmf vs dnmf for degree).
  std::vector<Variant> variants;
  std::filesystem::path output_path;

  /// Edge probability of the synthetic horizontal network.
  double density = 0.1;
  /// Latent dimensions swept by the convergence protocol; cfg.k is used otherwise.
  std::vector<std::size_t> ks;
  /// Planted classes for the clustering protocol.
  std::size_t classes = 4;
  std::size_t kmeans_restarts = 10;
  /// Fraction of entries held out by the recommendation protocol.
  double holdout = 0.1;

  std::size_t cols() const { return p == 0 ? n : p; }
  std::vector<Variant> effective_variants() const;
  std::vector<std::size_t> effective_ks() const;
  void validate() const;
};

/// Flat `key = value` document; '#' starts a comment. Keys: protocol, trials, n, p, k,
/// alpha, alpha2, max_iter, sigma, delta, tol, seed, eta_cap, variants (comma list),
/// ks (comma list), density, classes, restarts, holdout, out.
ExperimentSpec parse_experiment_config(std::istream& in, const std::string& source = "<config>");
ExperimentSpec load_experiment_config(const std::filesystem::path& path);

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::whole;
  std::size_t k = 0;
  std::vector<double> metrics;  // aligned with ExperimentReport::metric_names
};

struct CostTrace {
  std::size_t trial = 0;
  Variant variant = Variant::whole;
  std::size_t k = 0;
  std::vector<double> costs;
};

struct Aggregate {
  Variant variant = Variant::whole;
  std::size_t k = 0;
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single trial
  std::size_t count = 0;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<std::string> metric_names;
  std::vector<TrialRow> rows;
  std::vector<CostTrace> traces;  // convergence protocol only

  std::vector<Aggregate> aggregates() const;
  /// Aggregate for one (variant, metric) cell at the spec's first k.
  Aggregate aggregate(Variant variant, std::string_view metric) const;
};

/// Runs every trial in index order. Trial t uses seed cfg.seed + t for both the data and
/// the factor initialization, so every variant sees the same instance and starting point.
ExperimentReport run_trials(const ExperimentSpec& spec);

/// Writes trials.csv, summary.csv, summary.txt (and traces/*.csv for the convergence
/// protocol) under report.spec.output_path. Throws IoError when the directory is unusable.
void write_report(const ExperimentReport& report);

/// run_trials followed by write_report.
ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace mlnf

#endif  // MLNF_EXPERIMENT_HPP_
