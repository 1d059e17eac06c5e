#include "mlnf/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>

#include "mlnf/eval.hpp"
#include "mlnf/experiment.hpp"
#include "mlnf/factor.hpp"
#include "mlnf/matrix_io.hpp"
#include "mlnf/synth.hpp"

namespace mlnf {

namespace {

namespace fs = std::filesystem;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::stationary: return "stationary";
    case Termination::diverged: return "diverged";
    case Termination::max_iter_reached: break;
  }
  return "max_iter";
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

struct FactorFlags {
  std::string variant = "nnmf";
  FactorConfig cfg;
  double alpha2 = 0.0;
  CLI::Option* alpha2_opt = nullptr;

  void add_to(CLI::App& app) {
    app.add_option("--variant", variant, "nnmf | cnmf | dnmf | tnmf");
    app.add_option("--k", cfg.k, "latent dimension");
    app.add_option("--alpha", cfg.alpha, "structure weight");
    alpha2_opt = app.add_option("--alpha2", alpha2, "second-network weight (default alpha)");
    app.add_option("--max-iter", cfg.max_iter, "iteration cap");
    app.add_option("--sigma", cfg.sigma, "clipping floor");
    app.add_option("--delta", cfg.delta, "step-size regularizer");
    app.add_option("--tol", cfg.stop_tol, "stationarity threshold on cost change");
    app.add_option("--seed", cfg.seed, "initialization seed");
  }

  FactorConfig config() const {
    FactorConfig c = cfg;
    if (alpha2_opt != nullptr && alpha2_opt->count() > 0) c.alpha2 = alpha2;
    return c;
  }
};

int run_factorize(const std::string& v_path, const std::string& h_path, const std::string& h2_path,
                  const FactorFlags& flags, const std::string& out_dir, std::ostream& out) {
  const DenseMatrix v = load_matrix(v_path);
  const HorizontalNetwork h = load_network(h_path);
  std::optional<HorizontalNetwork> h2;
  if (!h2_path.empty()) h2 = load_network(h2_path);
  const Variant variant = parse_variant(flags.variant);
  const FactorConfig cfg = flags.config();

  const FactorResult r = factorize(v, h, h2 ? &*h2 : nullptr, variant, cfg);

  const fs::path dir(out_dir);
  ensure_directory(dir);
  save_matrix(r.a, dir / "A.mtx");
  save_matrix(r.x, dir / "X.mtx");
  std::ofstream trace(dir / "trace.csv", std::ios::binary | std::ios::trunc);
  if (!trace) throw IoError("cannot write '" + (dir / "trace.csv").string() + "'");
  trace << "iteration,cost\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i) trace << i << ',' << fmt17(r.trace[i]) << '\n';

  out << "variant " << variant_name(variant) << "\n"
      << "iterations " << r.iterations << "\n"
      << "terminated " << termination_name(r.terminated) << "\n"
      << "final_cost " << fmt17(r.trace.back()) << "\n";
  return 0;
}

struct EvalFlags {
  std::string a_path, h_path, labels_path, v_path, x_path, test_path;
  std::size_t clusters = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
  std::size_t permutations = 0;
};

int run_eval(const EvalFlags& f, std::ostream& out) {
  const DenseMatrix a = load_matrix(f.a_path);
  if (!f.labels_path.empty()) {
    const LabelVector truth = load_labels(f.labels_path);
    if (truth.size() != a.rows()) {
      throw DimensionError("labels file has " + std::to_string(truth.size()) + " entries, A has " +
                           std::to_string(a.rows()) + " rows");
    }
    const std::size_t clusters =
        f.clusters > 0 ? f.clusters
                       : static_cast<std::size_t>(*std::max_element(truth.begin(), truth.end()) + 1);
    const LabelVector pred = kmeans(a, clusters, f.seed, f.restarts);
    const ClusterScores s = cluster_scores(truth, pred);
    out << "jc " << fmt17(s.jc) << "\nfm " << fmt17(s.fm) << "\nf1 " << fmt17(s.f1) << "\n";
    if (f.permutations > 0) {
      const ClusterScores b = permutation_baseline(truth, pred, f.permutations, f.seed);
      out << "baseline_jc " << fmt17(b.jc) << "\nbaseline_fm " << fmt17(b.fm) << "\nbaseline_f1 "
          << fmt17(b.f1) << "\n";
    }
  }
  if (!f.h_path.empty()) {
    const HorizontalNetwork h = load_network(f.h_path);
    StructureScoreOptions opts;
    opts.clusters = f.clusters;
    opts.seed = f.seed;
    opts.restarts = f.restarts;
    const StructureReport s = structure_scores(h, a, opts);
    out << "community_jc " << fmt17(s.community.jc) << "\ncommunity_fm " << fmt17(s.community.fm)
        << "\ncommunity_f1 " << fmt17(s.community.f1) << "\ndegree_corr "
        << fmt17(s.degree_correlation) << "\ntree_overlap " << s.tree_overlap << "\ntree_edges "
        << s.tree_edges << "\n";
  }
  if (!f.test_path.empty()) {
    if (f.x_path.empty()) throw InputError("eval: --test requires --x");
    const DenseMatrix x = load_matrix(f.x_path);
    const DenseMatrix test = load_matrix(f.test_path);
    const DenseMatrix pred = matmul(a, x);
    require_same_shape(pred, test, "eval: A*X vs test matrix");
    Vector predicted, actual;
    for (std::size_t i = 0; i < test.rows(); ++i)
      for (std::size_t j = 0; j < test.cols(); ++j)
        if (test(i, j) != 0.0) {
          predicted.push_back(pred(i, j));
          actual.push_back(test(i, j));
        }
    out << "mae " << fmt17(mae(predicted, actual)) << "\nrho " << fmt17(pearson(predicted, actual))
        << "\n";
  } else if (!f.v_path.empty() && !f.x_path.empty()) {
    const DenseMatrix v = load_matrix(f.v_path);
    const DenseMatrix x = load_matrix(f.x_path);
    const DenseMatrix pred = matmul(a, x);
    require_same_shape(pred, v, "eval: A*X vs V");
    out << "relative_error " << fmt17(std::sqrt(frobenius_sq_diff(v, pred) / frobenius_sq(v)))
        << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structure-preserving nonnegative matrix factorization", "mlnf"};
  app.set_help_flag("--help", "print usage");
  app.require_subcommand(1);

  auto* fac = app.add_subcommand("factorize", "factorize V with horizontal network(s)");
  std::string v_path, h_path, h2_path, out_dir = ".";
  FactorFlags fflags;
  fac->add_option("--v", v_path, "vertical matrix V")->required();
  fac->add_option("--h", h_path, "horizontal network on the rows of V")->required();
  fac->add_option("--h2", h2_path, "horizontal network on the columns of V");
  fac->add_option("--out", out_dir, "output directory");
  fflags.add_to(*fac);

  auto* syn = app.add_subcommand("synth", "generate a synthetic instance");
  std::size_t n = 100, p = 0, classes = 0;
  double density = 0.1;
  std::uint64_t synth_seed = 0;
  std::string synth_out = ".";
  syn->add_option("--n", n, "rows of V / nodes of H");
  syn->add_option("--p", p, "columns of V (default n)");
  syn->add_option("--density", density, "edge probability of H");
  syn->add_option("--seed", synth_seed, "generator seed");
  syn->add_option("--classes", classes, "plant this many classes (writes labels.txt)");
  syn->add_option("--out", synth_out, "output directory");

  auto* exp = app.add_subcommand("experiment", "run an experiment from a config file");
  std::string config_path, exp_out;
  std::size_t trials = 0;
  exp->add_option("--config", config_path, "flat key = value config")->required();
  exp->add_option("--trials", trials, "override the trial count");
  exp->add_option("--out", exp_out, "override the output directory");

  auto* ev = app.add_subcommand("eval", "score factors against truth files");
  EvalFlags eflags;
  ev->add_option("--a", eflags.a_path, "factor A")->required();
  ev->add_option("--h", eflags.h_path, "horizontal network for structure scores");
  ev->add_option("--labels", eflags.labels_path, "true labels, one integer per line");
  ev->add_option("--clusters", eflags.clusters, "k-means clusters (default from labels or k)");
  ev->add_option("--seed", eflags.seed, "k-means seed");
  ev->add_option("--restarts", eflags.restarts, "k-means restarts");
  ev->add_option("--permutations", eflags.permutations, "random-permutation baselines");
  ev->add_option("--v", eflags.v_path, "data matrix for reconstruction error");
  ev->add_option("--x", eflags.x_path, "factor X");
  ev->add_option("--test", eflags.test_path, "held-out entries (nonzeros are scored)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*fac) return run_factorize(v_path, h_path, h2_path, fflags, out_dir, out);
    if (*syn) {
      const std::size_t cols = p == 0 ? n : p;
      const fs::path dir(synth_out);
      ensure_directory(dir);
      if (classes > 0) {
        PlantedOptions opts;
        opts.classes = classes;
        const PlantedInstance inst = generate_planted_instance(n, cols, synth_seed, opts);
        save_matrix(inst.v, dir / "V.mtx");
        save_matrix(inst.h.weights(), dir / "H.mtx");
        save_labels(inst.labels, dir / "labels.txt");
      } else {
        const SyntheticPair pair = generate_synthetic_pair(n, cols, density, synth_seed);
        save_matrix(pair.v, dir / "V.mtx");
        save_matrix(pair.h.weights(), dir / "H.mtx");
      }
      out << "wrote " << dir.string() << "\n";
      return 0;
    }
    if (*exp) {
      ExperimentSpec spec = load_experiment_config(config_path);
      if (trials > 0) spec.trials = trials;
      if (!exp_out.empty()) spec.output_path = exp_out;
      const ExperimentReport report = run_experiment(spec);
      for (const auto& a : report.aggregates()) {
        out << variant_name(a.variant) << " k=" << a.k << " " << a.metric << " " << fmt17(a.mean)
            << " +/- " << fmt17(a.stddev) << "\n";
      }
      return 0;
    }
    if (*ev) return run_eval(eflags, out);
  } catch (const std::exception& e) {
    err << "mlnf: error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace mlnf
