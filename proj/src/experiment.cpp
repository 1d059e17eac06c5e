#include "mlnf/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "mlnf/eval.hpp"
#include "mlnf/matrix_io.hpp"
#include "mlnf/synth.hpp"

namespace mlnf {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    std::string item = trim(s.substr(start, end - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<std::string> metric_names_for(Protocol p) {
  switch (p) {
    case Protocol::convergence: return {"final_cost", "iterations", "max_rel_increase"};
    case Protocol::community: return {"jc", "fm", "f1"};
    case Protocol::degree: return {"degree_corr"};
    case Protocol::tree: return {"overlap", "max_edges", "diverged"};
    case Protocol::clustering: return {"jc", "fm", "f1"};
    case Protocol::recommendation: return {"mae", "rho"};
  }
  return {};
}

double max_relative_increase(const std::vector<double>& trace) {
  double worst = 0.0;
  for (std::size_t t = 1; t < trace.size(); ++t) {
    worst = std::max(worst, (trace[t] - trace[t - 1]) / (1.0 + std::abs(trace[t - 1])));
  }
  return worst;
}

FactorConfig trial_config(const ExperimentSpec& spec, std::uint64_t seed, std::size_t k) {
  FactorConfig cfg = spec.cfg;
  cfg.seed = seed;
  cfg.k = k;
  return cfg;
}

void run_one_trial(const ExperimentSpec& spec, std::size_t trial, ExperimentReport& report) {
  const std::uint64_t seed = spec.cfg.seed + trial;
  const std::size_t n = spec.n;
  const std::size_t p = spec.cols();
  const auto variants = spec.effective_variants();

  auto push = [&](Variant v, std::size_t k, std::vector<double> metrics) {
    report.rows.push_back(TrialRow{trial, seed, v, k, std::move(metrics)});
  };

  switch (spec.protocol) {
    case Protocol::convergence: {
      const SyntheticPair data = generate_synthetic_pair(n, p, spec.density, seed);
      for (std::size_t k : spec.effective_ks()) {
        for (Variant v : variants) {
          const FactorResult r = factorize(data.v, data.h, nullptr, v, trial_config(spec, seed, k));
          push(v, k,
               {r.trace.back(), static_cast<double>(r.iterations), max_relative_increase(r.trace)});
          report.traces.push_back(CostTrace{trial, v, k, r.trace});
        }
      }
      break;
    }
    case Protocol::community:
    case Protocol::degree:
    case Protocol::tree: {
      const SyntheticPair data = generate_synthetic_pair(n, p, spec.density, seed);
      const std::size_t k = spec.cfg.k;
      for (Variant v : variants) {
        const FactorResult r = factorize(data.v, data.h, nullptr, v, trial_config(spec, seed, k));
        if (spec.protocol == Protocol::degree) {
          push(v, k, {degree_correlation(data.h, r.a)});
        } else if (spec.protocol == Protocol::tree) {
          const TreeMask original = max_spanning_tree(data.h);
          const TreeMask rebuilt = max_spanning_tree_of_scores(matmul_nt(r.a, r.a));
          push(v, k,
               {static_cast<double>(tree_overlap(original, rebuilt)),
                static_cast<double>(original.edge_count),
                r.terminated == Termination::diverged ? 1.0 : 0.0});
        } else {
          const StructureReport s =
              structure_scores(data.h, r.a, {k, seed, spec.kmeans_restarts});
          push(v, k, {s.community.jc, s.community.fm, s.community.f1});
        }
      }
      break;
    }
    case Protocol::clustering: {
      PlantedOptions opts;
      opts.classes = spec.classes;
      const PlantedInstance data = generate_planted_instance(n, p, seed, opts);
      const std::size_t k = spec.cfg.k;
      for (Variant v : variants) {
        const FactorResult r = factorize(data.v, data.h, nullptr, v, trial_config(spec, seed, k));
        const LabelVector pred = kmeans(r.a, spec.classes, seed, spec.kmeans_restarts);
        const ClusterScores s = cluster_scores(data.labels, pred);
        push(v, k, {s.jc, s.fm, s.f1});
      }
      break;
    }
    case Protocol::recommendation: {
      const std::size_t k = spec.cfg.k;
      const RatingInstance data = generate_rating_instance(n, p, k, spec.density, seed);
      std::mt19937_64 rng(seed ^ 0x686f6c64ULL);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      DenseMatrix train = data.v;
      std::vector<std::pair<std::size_t, std::size_t>> held;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
          if (unit(rng) < spec.holdout) {
            held.emplace_back(i, j);
            train(i, j) = 0.0;
          }
      for (Variant v : variants) {
        const FactorResult r = factorize(train, data.h, nullptr, v, trial_config(spec, seed, k));
        const DenseMatrix pred = matmul(r.a, r.x);
        Vector predicted;
        Vector actual;
        for (const auto& [i, j] : held) {
          predicted.push_back(pred(i, j));
          actual.push_back(data.v(i, j));
        }
        if (predicted.empty()) {
          push(v, k, {0.0, 0.0});
        } else {
          push(v, k, {mae(predicted, actual), pearson(predicted, actual)});
        }
      }
      break;
    }
  }
}

std::ofstream open_report_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report file '" + path.string() + "'");
  return out;
}

}  // namespace

std::string_view protocol_name(Protocol p) {
  switch (p) {
    case Protocol::convergence: return "convergence";
    case Protocol::community: return "community";
    case Protocol::degree: return "degree";
    case Protocol::tree: return "tree";
    case Protocol::clustering: return "clustering";
    case Protocol::recommendation: return "recommendation";
  }
  return "unknown";
}

Protocol parse_protocol(std::string_view name) {
  for (Protocol p : {Protocol::convergence, Protocol::community, Protocol::degree, Protocol::tree,
                     Protocol::clustering, Protocol::recommendation}) {
    if (protocol_name(p) == name) return p;
  }
  throw InputError("unknown protocol '" + std::string(name) + "'");
}

std::vector<Variant> ExperimentSpec::effective_variants() const {
  if (!variants.empty()) return variants;
  switch (protocol) {
    case Protocol::community: return {Variant::whole, Variant::community};
    case Protocol::degree: return {Variant::whole, Variant::degree};
    case Protocol::tree: return {Variant::whole, Variant::tree};
    default: return {std::begin(kAllVariants), std::end(kAllVariants)};
  }
}

std::vector<std::size_t> ExperimentSpec::effective_ks() const {
  if (protocol == Protocol::convergence) {
    return ks.empty() ? std::vector<std::size_t>{10, 100, 1000} : ks;
  }
  return {cfg.k};
}

void ExperimentSpec::validate() const {
  cfg.validate();
  if (trials < 1) throw InputError("experiment: trials must be >= 1");
  if (n < 1) throw InputError("experiment: n must be >= 1");
  if (!(density > 0.0 && density <= 1.0)) throw InputError("experiment: density must be in (0, 1]");
  for (std::size_t k : effective_ks()) {
    if (k < 1 || k > n) {
      throw InputError("experiment: latent dimension " + std::to_string(k) +
                       " must be in [1, n=" + std::to_string(n) + "]");
    }
  }
  if (protocol == Protocol::clustering && (classes < 1 || classes > n || classes > cols())) {
    throw InputError("experiment: classes must be in [1, min(n, p)]");
  }
  if (protocol == Protocol::recommendation && !(holdout > 0.0 && holdout < 1.0)) {
    throw InputError("experiment: holdout must be in (0, 1)");
  }
}

ExperimentSpec parse_experiment_config(std::istream& in, const std::string& source) {
  ExperimentSpec spec;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    try {
      if (key == "protocol") spec.protocol = parse_protocol(value);
      else if (key == "trials") spec.trials = std::stoull(value);
      else if (key == "n") spec.n = std::stoull(value);
      else if (key == "p") spec.p = std::stoull(value);
      else if (key == "k") spec.cfg.k = std::stoull(value);
      else if (key == "alpha") spec.cfg.alpha = std::stod(value);
      else if (key == "alpha2") spec.cfg.alpha2 = std::stod(value);
      else if (key == "max_iter") spec.cfg.max_iter = std::stoull(value);
      else if (key == "sigma") spec.cfg.sigma = std::stod(value);
      else if (key == "delta") spec.cfg.delta = std::stod(value);
      else if (key == "tol") spec.cfg.stop_tol = std::stod(value);
      else if (key == "seed") spec.cfg.seed = std::stoull(value);
      else if (key == "eta_cap") spec.cfg.eta_cap = std::stod(value);
      else if (key == "density") spec.density = std::stod(value);
      else if (key == "classes") spec.classes = std::stoull(value);
      else if (key == "restarts") spec.kmeans_restarts = std::stoull(value);
      else if (key == "holdout") spec.holdout = std::stod(value);
      else if (key == "out") spec.output_path = value;
      else if (key == "variants") {
        spec.variants.clear();
        for (const auto& v : split_list(value)) spec.variants.push_back(parse_variant(v));
      } else if (key == "ks") {
        spec.ks.clear();
        for (const auto& v : split_list(value)) spec.ks.push_back(std::stoull(v));
      } else {
        throw ParseError(source, lineno, "unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      if (dynamic_cast<const ParseError*>(&e) != nullptr) throw;
      throw ParseError(source, lineno, "bad value for '" + key + "': " + e.what());
    } catch (const std::out_of_range&) {
      throw ParseError(source, lineno, "value out of range for '" + key + "'");
    }
  }
  return spec;
}

ExperimentSpec load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_experiment_config(in, path.string());
}

std::vector<Aggregate> ExperimentReport::aggregates() const {
  // Keyed by (variant order, k, metric index) to keep the output order stable.
  std::vector<Aggregate> out;
  const auto variants = spec.effective_variants();
  for (std::size_t k : spec.effective_ks()) {
    for (Variant v : variants) {
      for (std::size_t m = 0; m < metric_names.size(); ++m) {
        std::vector<double> values;
        for (const auto& row : rows)
          if (row.variant == v && row.k == k) values.push_back(row.metrics[m]);
        Aggregate agg{v, k, metric_names[m], 0.0, 0.0, values.size()};
        if (!values.empty()) {
          agg.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                     static_cast<double>(values.size());
          if (values.size() > 1) {
            double ss = 0.0;
            for (double x : values) ss += (x - agg.mean) * (x - agg.mean);
            agg.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
          }
        }
        out.push_back(std::move(agg));
      }
    }
  }
  return out;
}

Aggregate ExperimentReport::aggregate(Variant variant, std::string_view metric) const {
  const std::size_t k = spec.effective_ks().front();
  for (const auto& a : aggregates())
    if (a.variant == variant && a.k == k && a.metric == metric) return a;
  throw InputError("no aggregate for " + std::string(variant_name(variant)) + "/" +
                   std::string(metric));
}

ExperimentReport run_trials(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentReport report;
  report.spec = spec;
  report.metric_names = metric_names_for(spec.protocol);
  for (std::size_t t = 0; t < spec.trials; ++t) run_one_trial(spec, t, report);
  return report;
}

void write_report(const ExperimentReport& report) {
  const auto& dir = report.spec.output_path;
  if (dir.empty()) throw InputError("experiment: output path (out) is required");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }

  {
    auto out = open_report_file(dir / "trials.csv");
    out << "trial,seed,variant,k";
    for (const auto& m : report.metric_names) out << ',' << m;
    out << '\n';
    for (const auto& row : report.rows) {
      out << row.trial << ',' << row.seed << ',' << variant_name(row.variant) << ',' << row.k;
      for (double v : row.metrics) out << ',' << fmt17(v);
      out << '\n';
    }
  }

  const auto aggs = report.aggregates();
  {
    auto out = open_report_file(dir / "summary.csv");
    out << "variant,k,metric,mean,stddev,count\n";
    for (const auto& a : aggs) {
      out << variant_name(a.variant) << ',' << a.k << ',' << a.metric << ',' << fmt17(a.mean)
          << ',' << fmt17(a.stddev) << ',' << a.count << '\n';
    }
  }

  {
    const auto& s = report.spec;
    auto out = open_report_file(dir / "summary.txt");
    out << "protocol " << protocol_name(s.protocol) << '\n'
        << "trials " << s.trials << "  n " << s.n << "  p " << s.cols() << "  density "
        << fmt17(s.density) << '\n'
        << "alpha " << fmt17(s.cfg.alpha) << "  max_iter " << s.cfg.max_iter << "  seed "
        << s.cfg.seed << "\n\n";
    out << "variant  k";
    for (const auto& m : report.metric_names) out << "  " << m;
    out << '\n';
    for (std::size_t k : s.effective_ks()) {
      for (Variant v : s.effective_variants()) {
        out << variant_name(v) << "  " << k;
        for (const auto& a : aggs)
          if (a.variant == v && a.k == k) out << "  " << fmt4(a.mean) << " +/- " << fmt4(a.stddev);
        out << '\n';
      }
    }
  }

  if (!report.traces.empty()) {
    const auto trace_dir = dir / "traces";
    std::filesystem::create_directories(trace_dir, ec);
    if (ec) throw IoError("cannot create trace directory '" + trace_dir.string() + "'");
    for (const auto& t : report.traces) {
      const std::string name = "trace_" + std::string(variant_name(t.variant)) + "_k" +
                               std::to_string(t.k) + "_trial" + std::to_string(t.trial) + ".csv";
      auto out = open_report_file(trace_dir / name);
      out << "iteration,cost\n";
      for (std::size_t i = 0; i < t.costs.size(); ++i) out << i << ',' << fmt17(t.costs[i]) << '\n';
    }
  }
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
  ExperimentReport report = run_trials(spec);
  write_report(report);
  return report;
}

}  // namespace mlnf
