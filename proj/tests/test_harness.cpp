#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "mlnf/cli.hpp"
#include "mlnf/experiment.hpp"
#include "mlnf/matrix_io.hpp"
#include "mlnf/synth.hpp"
#include "support.hpp"

using namespace mlnf;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mlnf_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

}  // namespace

TEST_CASE("generate_synthetic_pair") {
  const SyntheticPair full = generate_synthetic_pair(4, 3, 1.0, 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK((i == j) == (full.h.weight(i, j) == 0.0));
  const SyntheticPair again = generate_synthetic_pair(4, 3, 1.0, 1);
  CHECK(again.v == full.v);
  CHECK(again.h.weights() == full.h.weights());
  for (double x : full.v.data()) CHECK((x >= 0.0 && x < 1.0));
  CHECK_THROWS_AS(generate_synthetic_pair(4, 3, 0.0, 1), InputError);
  CHECK_THROWS_AS(generate_synthetic_pair(4, 3, 1.5, 1), InputError);
}

TEST_CASE("generate_synthetic_pair edge count follows the binomial expectation") {
  const double pairs = 100.0 * 99.0 / 2.0;
  const double density = 0.1;
  double total = 0.0;
  const int seeds = 1000;
  for (int s = 0; s < seeds; ++s) {
    const SyntheticPair sp = generate_synthetic_pair(100, 1, density, static_cast<std::uint64_t>(s));
    std::size_t edges = 0;
    for (std::size_t i = 0; i < 100; ++i)
      for (std::size_t j = i + 1; j < 100; ++j) edges += sp.h.weight(i, j) > 0.0 ? 1 : 0;
    total += static_cast<double>(edges);
  }
  const double mean = total / seeds;
  const double sigma_of_mean = std::sqrt(pairs * density * (1 - density) / seeds);
  CHECK(std::abs(mean - density * pairs) < 3.0 * sigma_of_mean);
}

TEST_CASE("planted and rating generators") {
  const PlantedInstance pi = generate_planted_instance(40, 20, 3);
  CHECK(pi.labels.size() == 40);
  CHECK(pi.v.nonnegative());
  const RatingInstance ri = generate_rating_instance(30, 20, 4, 0.1, 3);
  for (double x : ri.v.data()) CHECK((x >= 0.0 && x <= 5.0));
  CHECK_THROWS_AS(generate_planted_instance(3, 20, 1, {5}), InputError);
}

TEST_CASE("matrix files round-trip exactly") {
  std::mt19937_64 rng(51);
  const DenseMatrix m = oracle::random_matrix(5, 7, rng, -1e3, 1e3);
  const fs::path dir = scratch_dir("io");
  save_matrix(m, dir / "m.mtx");
  CHECK(load_matrix(dir / "m.mtx") == m);

  std::istringstream empty("3 4 0\n");
  CHECK(read_matrix(empty) == DenseMatrix(3, 4));
}

TEST_CASE("matrix parse errors name the line") {
  std::istringstream bad_index("% comment\n2 2 1\n2 0 1.0\n");
  try {
    read_matrix(bad_index, "bad.mtx");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("bad.mtx:3") != std::string::npos);
  }
  std::istringstream bad_header("2 x 1\n");
  CHECK_THROWS_AS(read_matrix(bad_header), ParseError);
  std::istringstream short_count("2 2 2\n0 0 1\n");
  CHECK_THROWS_AS(read_matrix(short_count), ParseError);
  std::istringstream dup("2 2 2\n0 0 1\n0 0 2\n");
  CHECK_THROWS_AS(read_matrix(dup), ParseError);
  std::istringstream nan("1 1 1\n0 0 nan\n");
  CHECK_THROWS_AS(read_matrix(nan), ParseError);
  CHECK_THROWS_AS(load_matrix("/nonexistent/m.mtx"), IoError);
}

TEST_CASE("load_network mirrors one-sided entries") {
  const fs::path dir = scratch_dir("net");
  std::ofstream(dir / "h.mtx") << "3 3 2\n0 1 0.5\n2 1 0.25\n";
  const HorizontalNetwork h = load_network(dir / "h.mtx");
  CHECK(h.weight(1, 0) == 0.5);
  CHECK(h.weight(1, 2) == 0.25);
  std::ofstream(dir / "bad.mtx") << "2 2 2\n0 1 0.5\n1 0 0.25\n";
  CHECK_THROWS_AS(load_network(dir / "bad.mtx"), ParseError);
}

TEST_CASE("experiment config parsing") {
  std::istringstream in(
      "# degree run\nprotocol = degree\ntrials = 3\nn = 10\nk = 3\nalpha = 0.5\n"
      "variants = nnmf, dnmf\nks = 2,4\nout = /tmp/x\n");
  const ExperimentSpec s = parse_experiment_config(in);
  CHECK(s.protocol == Protocol::degree);
  CHECK(s.trials == 3);
  CHECK(s.cfg.k == 3);
  CHECK(s.cfg.alpha == 0.5);
  CHECK(s.variants == std::vector<Variant>{Variant::whole, Variant::degree});
  CHECK(s.ks == std::vector<std::size_t>{2, 4});
  std::istringstream bad("protocol = degree\nfrobnicate = 1\n");
  CHECK_THROWS_AS(parse_experiment_config(bad), ParseError);
  std::istringstream bad_value("trials = many\n");
  CHECK_THROWS_AS(parse_experiment_config(bad_value), ParseError);
}

TEST_CASE("experiment report aggregates equal recomputation from the trial rows") {
  ExperimentSpec spec;
  spec.protocol = Protocol::degree;
  spec.trials = 4;
  spec.n = 12;
  spec.cfg.k = 3;
  spec.cfg.max_iter = 50;
  spec.density = 0.5;
  spec.output_path = scratch_dir("agg");
  const ExperimentReport report = run_experiment(spec);

  std::ifstream rows(spec.output_path / "trials.csv");
  std::string line;
  std::getline(rows, line);
  CHECK(line == "trial,seed,variant,k,degree_corr");
  std::map<std::string, std::vector<double>> by_variant;
  while (std::getline(rows, line)) {
    std::stringstream ss(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(ss, field, ',')) f.push_back(field);
    by_variant[f[2]].push_back(std::stod(f[4]));
  }
  for (const auto& [name, values] : by_variant) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    const Aggregate a = report.aggregate(parse_variant(name), "degree_corr");
    CHECK(std::abs(a.mean - mean) < 1e-12);
    CHECK(std::abs(a.stddev - sd) < 1e-12);
    CHECK(a.count == 4);
  }
  CHECK(fs::exists(spec.output_path / "summary.txt"));
  CHECK(fs::exists(spec.output_path / "summary.csv"));
}

TEST_CASE("convergence protocol writes non-increasing traces") {
  ExperimentSpec spec;
  spec.protocol = Protocol::convergence;
  spec.trials = 1;
  spec.n = 15;
  spec.ks = {2, 5};
  spec.cfg.max_iter = 100;
  spec.density = 0.3;
  spec.output_path = scratch_dir("conv");
  run_experiment(spec);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(spec.output_path / "traces")) {
    ++files;
    std::ifstream in(entry.path());
    std::string line;
    std::getline(in, line);
    double prev = INFINITY;
    while (std::getline(in, line)) {
      const double cost = std::stod(line.substr(line.find(',') + 1));
      CHECK(cost <= prev + 1e-9 * std::abs(prev == INFINITY ? 0.0 : prev));
      prev = cost;
    }
  }
  CHECK(files == 8);
}

TEST_CASE("experiment rejects an unwritable output path") {
  ExperimentSpec spec;
  spec.trials = 1;
  spec.n = 5;
  spec.cfg.k = 2;
  spec.cfg.max_iter = 5;
  const fs::path dir = scratch_dir("unwritable");
  std::ofstream(dir / "file") << "x";
  spec.output_path = dir / "file" / "sub";
  CHECK_THROWS_AS(run_experiment(spec), IoError);
}

TEST_CASE("cli: synth, factorize, eval") {
  const fs::path dir = scratch_dir("cli");
  CHECK(run_cli({"synth", "--n", "30", "--p", "20", "--classes", "3", "--seed", "4", "--out",
                 (dir / "data").string()}) == 0);
  std::string out;
  CHECK(run_cli({"factorize", "--v", (dir / "data" / "V.mtx").string(), "--h",
                 (dir / "data" / "H.mtx").string(), "--variant", "tree", "--k", "10", "--alpha",
                 "10", "--seed", "7", "--max-iter", "50", "--out", (dir / "fit").string()},
                &out) == 0);
  CHECK(fs::exists(dir / "fit" / "A.mtx"));
  CHECK(fs::exists(dir / "fit" / "X.mtx"));
  CHECK(fs::exists(dir / "fit" / "trace.csv"));
  CHECK(run_cli({"eval", "--a", (dir / "fit" / "A.mtx").string(), "--labels",
                 (dir / "data" / "labels.txt").string(), "--h", (dir / "data" / "H.mtx").string(),
                 "--v", (dir / "data" / "V.mtx").string(), "--x", (dir / "fit" / "X.mtx").string()},
                &out) == 0);
  CHECK(out.find("jc ") != std::string::npos);
  CHECK(out.find("tree_overlap ") != std::string::npos);
  CHECK(out.find("relative_error ") != std::string::npos);
}

TEST_CASE("cli: errors") {
  std::string err;
  CHECK(run_cli({"frobnicate"}, nullptr, &err) == 2);
  CHECK(run_cli({"factorize", "--bogus"}, nullptr, &err) == 2);
  CHECK(run_cli({}, nullptr, &err) == 2);
  CHECK(run_cli({"factorize", "--v", "/nonexistent/V.mtx", "--h", "/nonexistent/H.mtx"}, nullptr,
                &err) == 1);
  CHECK(err.find("/nonexistent/V.mtx") != std::string::npos);
  CHECK(run_cli({"--help"}) == 0);
}
