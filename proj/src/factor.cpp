#include "mlnf/factor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace mlnf {

namespace {

// Coefficients of the per-entry majorizer at a point F:
//   gradient = quadratic + quartic - numerator
// with quadratic, quartic and numerator all entrywise nonnegative. The descent step
// below solves  quartic*u^4 + quadratic*u^2 - numerator = 0  for the multiplicative
// factor u and expresses it as a gradient step with size eta.
struct StepParts {
  DenseMatrix quadratic;
  DenseMatrix quartic;  // empty when the structure term has no quartic part
  DenseMatrix numerator;
};

DenseMatrix gradient_of(const StepParts& parts) {
  DenseMatrix g = parts.quadratic;
  if (!parts.quartic.empty()) g += parts.quartic;
  g -= parts.numerator;
  return g;
}

// Adds alpha * (structure contributions) for factor f (rows = network nodes).
void add_structure_parts(const StructureTarget& target, const DenseMatrix& f, double alpha,
                         StepParts& parts) {
  const std::size_t m = f.rows();
  const std::size_t k = f.cols();
  if (const auto* anchor = std::get_if<AnchorTarget>(&target.payload)) {
    // alpha (F - P) = alpha (F + P-) - alpha P+
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        parts.quadratic(i, j) += alpha * (f(i, j) + anchor->split.minus(i, j));
        parts.numerator(i, j) += alpha * anchor->split.plus(i, j);
      }
    }
  } else if (const auto* deg = std::get_if<DegreeTarget>(&target.payload)) {
    // gradient of 1/2 ||d - F F^T 1||^2 is e s^T + 1 (F^T e)^T with s = F^T 1, e = F s - d.
    const Vector ones(m, 1.0);
    const Vector s = matvec_t(f, ones);
    const Vector r = matvec(f, s);
    const Vector ftr = matvec_t(f, r);
    const Vector ftd = matvec_t(f, deg->degrees);
    parts.quartic = DenseMatrix(m, k);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        parts.quartic(i, j) = alpha * (r[i] * s[j] + ftr[j]);
        parts.numerator(i, j) += alpha * (deg->degrees[i] * s[j] + ftd[j]);
      }
    }
  } else if (const auto* tree = std::get_if<TreeTarget>(&target.payload)) {
    const DenseMatrix ffT = matmul_nt(f, f);
    const DenseMatrix off_tree = matmul(hadamard(tree->tree.complement, ffT), f);
    const DenseMatrix on_tree = matmul(hadamard(tree->tree.mask, ffT), f);
    parts.quartic = alpha * off_tree;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k; ++j) parts.numerator(i, j) += alpha * on_tree(i, j);
  }
}

// Parts for 1/2 ||D - F G||^2 + alpha * S(F), given gram = G G^T and cross = D G^T.
StepParts parts_at(const DenseMatrix& f, const DenseMatrix& gram, const DenseMatrix& cross,
                   const StructureTarget* target, double alpha) {
  StepParts parts{matmul(f, gram), DenseMatrix(), cross};
  if (target != nullptr) add_structure_parts(*target, f, alpha, parts);
  return parts;
}

DenseMatrix factor_step(const DenseMatrix& f, const DenseMatrix& gram, const DenseMatrix& cross,
                        const StructureTarget* target, double alpha, const FactorConfig& cfg) {
  StepParts here = parts_at(f, gram, cross, target, alpha);
  const DenseMatrix grad = gradient_of(here);

  // F-bar: lift entries below sigma where the gradient would push them up.
  DenseMatrix fbar = f;
  bool clipped = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (grad.data()[i] < 0.0 && f.data()[i] < cfg.sigma) {
      fbar.data()[i] = cfg.sigma;
      clipped = true;
    }
  }
  const StepParts bar = clipped ? parts_at(fbar, gram, cross, target, alpha) : std::move(here);

  DenseMatrix out(f.rows(), f.cols());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double c = bar.quadratic.data()[i];
    const double beta = bar.quartic.empty() ? 0.0 : bar.quartic.data()[i];
    const double num = std::max(bar.numerator.data()[i], 0.0);
    const double s = std::sqrt(c * c + 4.0 * beta * num);
    const double denom_half = 0.5 * (2.0 * beta + c + s);
    const double cs = c + s;
    const double u = cs > 0.0 ? std::sqrt(2.0 * num / cs) : 0.0;
    double eta = fbar.data()[i] / (denom_half * (1.0 + u) + cfg.delta);
    if (!(eta >= 0.0)) eta = 0.0;
    eta = std::min(eta, cfg.eta_cap);
    out.data()[i] = std::max(f.data()[i] - eta * grad.data()[i], 0.0);
  }
  return out;
}

void require_conformable(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                         const char* what) {
  if (a.rows() != v.rows() || x.cols() != v.cols() || a.cols() != x.rows()) {
    throw DimensionError(std::string(what) + ": V " + v.shape_string() + ", A " +
                         a.shape_string() + ", X " + x.shape_string() + " do not conform");
  }
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t tag) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(tag)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double draw_positive(std::mt19937_64& rng, double sigma) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // (sigma, 1]
  return 1.0 - unit(rng) * (1.0 - sigma);
}

}  // namespace

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::whole: return "nnmf";
    case Variant::community: return "cnmf";
    case Variant::degree: return "dnmf";
    case Variant::tree: return "tnmf";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants)
    if (variant_name(v) == name) return v;
  if (name == "whole") return Variant::whole;
  if (name == "community") return Variant::community;
  if (name == "degree") return Variant::degree;
  if (name == "tree") return Variant::tree;
  throw InputError("unknown variant '" + std::string(name) + "' (expected nnmf, cnmf, dnmf, tnmf)");
}

void FactorConfig::validate() const {
  if (k < 1) throw InputError("FactorConfig: k must be >= 1");
  if (!(sigma > 0.0)) throw InputError("FactorConfig: sigma must be > 0");
  if (!(delta > 0.0)) throw InputError("FactorConfig: delta must be > 0");
  if (!(stop_tol > 0.0)) throw InputError("FactorConfig: stop_tol must be > 0");
  if (!(alpha >= 0.0)) throw InputError("FactorConfig: alpha must be >= 0");
  if (alpha2 && !(*alpha2 >= 0.0)) throw InputError("FactorConfig: alpha2 must be >= 0");
  if (!(eta_cap > 0.0)) throw InputError("FactorConfig: eta_cap must be > 0");
}

std::size_t StructureTarget::nodes() const {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, AnchorTarget>) return p.anchor.rows();
        else if constexpr (std::is_same_v<T, DegreeTarget>) return p.degrees.size();
        else return p.tree.size();
      },
      payload);
}

StructureTarget make_anchor_target(Variant variant, DenseMatrix anchor) {
  if (variant != Variant::whole && variant != Variant::community) {
    throw InputError("make_anchor_target: only nnmf/cnmf use an anchor matrix");
  }
  SplitPair split = pos_neg_split(anchor);
  return StructureTarget{variant, AnchorTarget{std::move(anchor), std::move(split)}};
}

StructureTarget make_structure_target(Variant variant, const HorizontalNetwork& h,
                                      const FactorConfig& cfg) {
  switch (variant) {
    case Variant::whole:
      return make_anchor_target(variant, symmetric_nmf(h, cfg.k, cfg));
    case Variant::community:
      return make_anchor_target(variant, community_basis(h, cfg.k).basis);
    case Variant::degree:
      return StructureTarget{variant, DegreeTarget{degree_sequence(h)}};
    case Variant::tree:
      return StructureTarget{variant, TreeTarget{max_spanning_tree(h)}};
  }
  throw InputError("make_structure_target: unknown variant");
}

double structure_cost(const StructureTarget& target, const DenseMatrix& f) {
  if (target.nodes() != f.rows()) {
    throw DimensionError("structure_cost: target over " + std::to_string(target.nodes()) +
                         " nodes, factor " + f.shape_string());
  }
  if (const auto* anchor = std::get_if<AnchorTarget>(&target.payload)) {
    return 0.5 * frobenius_sq_diff(anchor->anchor, f);
  }
  if (const auto* deg = std::get_if<DegreeTarget>(&target.payload)) {
    const Vector s = col_sums(f);
    const Vector r = matvec(f, s);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double e = deg->degrees[i] - r[i];
      acc += e * e;
    }
    return 0.5 * acc;
  }
  const auto& tree = std::get<TreeTarget>(target.payload).tree;
  const DenseMatrix ffT = matmul_nt(f, f);
  double off = 0.0;
  double on = 0.0;
  for (std::size_t i = 0; i < ffT.size(); ++i) {
    const double v = ffT.data()[i];
    off += tree.complement.data()[i] * v * v;
    on += tree.mask.data()[i] * v * v;
  }
  return 0.25 * (off - on);
}

double data_cost(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x) {
  require_conformable(v, a, x, "data_cost");
  return 0.5 * frobenius_sq_diff(v, matmul(a, x));
}

double objective(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                 const StructureTarget& first, double alpha, const StructureTarget* second,
                 double alpha2) {
  double j = data_cost(v, a, x) + alpha * structure_cost(first, a);
  if (second != nullptr) j += alpha2 * structure_cost(*second, x.transpose());
  return j;
}

double symmetric_nmf_objective(const HorizontalNetwork& h, const DenseMatrix& p) {
  return 0.5 * frobenius_sq_diff(h.weights(), matmul_nt(p, p));
}

DenseMatrix symmetric_nmf(const HorizontalNetwork& h, std::size_t k, const FactorConfig& cfg) {
  cfg.validate();
  const std::size_t n = h.size();
  if (k < 1 || k > n) {
    throw DimensionError("symmetric_nmf: k=" + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
  }
  std::mt19937_64 rng(derived_seed(cfg.seed, 0x53594d));
  DenseMatrix p(n, k);
  for (double& v : p.data()) v = draw_positive(rng, cfg.sigma);

  DenseMatrix best = p;
  double best_obj = symmetric_nmf_objective(h, p);
  double prev = best_obj;
  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    const DenseMatrix hp = matmul(h.weights(), p);
    const DenseMatrix pptp = matmul(p, matmul_tn(p, p));
    for (std::size_t i = 0; i < p.size(); ++i) {
      // The undamped ratio oscillates and can diverge; its cube root is monotone.
      p.data()[i] *= std::cbrt(hp.data()[i] / (pptp.data()[i] + cfg.delta));
    }
    const double obj = symmetric_nmf_objective(h, p);
    if (obj < best_obj) {
      best_obj = obj;
      best = p;
    }
    if (std::abs(prev - obj) < cfg.stop_tol) break;
    prev = obj;
  }
  return best;
}

DenseMatrix nnmf_a_gradient(const DenseMatrix& v, const DenseMatrix& p, const DenseMatrix& a,
                            const DenseMatrix& x, double alpha) {
  require_conformable(v, a, x, "nnmf_a_gradient");
  require_same_shape(p, a, "nnmf_a_gradient");
  DenseMatrix xxt = matmul_nt(x, x);
  for (std::size_t i = 0; i < xxt.rows(); ++i) xxt(i, i) += alpha;
  return matmul(a, xxt) - (matmul_nt(v, x) + alpha * p);
}

DenseMatrix dnmf_a_gradient(const DenseMatrix& v, std::span<const double> degrees,
                            const DenseMatrix& a, const DenseMatrix& x, double alpha) {
  require_conformable(v, a, x, "dnmf_a_gradient");
  if (degrees.size() != a.rows()) throw DimensionError("dnmf_a_gradient: degree length");
  const Vector s = col_sums(a);        // 1^T A
  const Vector r = matvec(a, s);       // A A^T 1
  DenseMatrix g = matmul(a, matmul_nt(x, x)) - matmul_nt(v, x);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      g(i, j) += -alpha * degrees[i] * s[j] + 2.0 * alpha * r[i] * s[j];
  return g;
}

DenseMatrix dnmf_cost_gradient(const DenseMatrix& v, std::span<const double> degrees,
                               const DenseMatrix& a, const DenseMatrix& x, double alpha) {
  require_conformable(v, a, x, "dnmf_cost_gradient");
  if (degrees.size() != a.rows()) throw DimensionError("dnmf_cost_gradient: degree length");
  const Vector s = col_sums(a);
  Vector e = matvec(a, s);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] -= degrees[i];
  const Vector ate = matvec_t(a, e);
  DenseMatrix g = matmul(a, matmul_nt(x, x)) - matmul_nt(v, x);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) g(i, j) += alpha * (e[i] * s[j] + ate[j]);
  return g;
}

DenseMatrix tnmf_a_gradient(const DenseMatrix& v, const TreeMask& t, const DenseMatrix& a,
                            const DenseMatrix& x, double alpha) {
  require_conformable(v, a, x, "tnmf_a_gradient");
  if (t.size() != a.rows()) throw DimensionError("tnmf_a_gradient: mask size");
  const DenseMatrix signed_mask = t.complement - t.mask;
  const DenseMatrix structure = matmul(hadamard(signed_mask, matmul_nt(a, a)), a);
  return (matmul(a, matmul_nt(x, x)) - matmul_nt(v, x)) + alpha * structure;
}

DenseMatrix x_gradient(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x) {
  require_conformable(v, a, x, "x_gradient");
  return matmul(matmul_tn(a, a), x) - matmul_tn(a, v);
}

DenseMatrix structured_a_step(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                              const StructureTarget* target, double alpha,
                              const FactorConfig& cfg) {
  require_conformable(v, a, x, "structured_a_step");
  if (target != nullptr && target->nodes() != a.rows()) {
    throw DimensionError("structured_a_step: structure target size does not match A");
  }
  return factor_step(a, matmul_nt(x, x), matmul_nt(v, x), target, alpha, cfg);
}

DenseMatrix nnmf_a_step(const DenseMatrix& v, const DenseMatrix& p, const DenseMatrix& a,
                        const DenseMatrix& x, const FactorConfig& cfg) {
  require_same_shape(p, a, "nnmf_a_step");
  const StructureTarget target = make_anchor_target(Variant::whole, p);
  return structured_a_step(v, a, x, &target, cfg.alpha, cfg);
}

DenseMatrix dnmf_a_step(const DenseMatrix& v, std::span<const double> degrees,
                        const DenseMatrix& a, const DenseMatrix& x, const FactorConfig& cfg) {
  const StructureTarget target{Variant::degree,
                               DegreeTarget{Vector(degrees.begin(), degrees.end())}};
  return structured_a_step(v, a, x, &target, cfg.alpha, cfg);
}

DenseMatrix tnmf_a_step(const DenseMatrix& v, const TreeMask& t, const DenseMatrix& a,
                        const DenseMatrix& x, const FactorConfig& cfg) {
  const StructureTarget target{Variant::tree, TreeTarget{t}};
  return structured_a_step(v, a, x, &target, cfg.alpha, cfg);
}

DenseMatrix update_x_step(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                          const FactorConfig& cfg) {
  require_conformable(v, a, x, "update_x_step");
  return factor_step(x.transpose(), matmul_tn(a, a), matmul_tn(v, a), nullptr, 0.0, cfg)
      .transpose();
}

DenseMatrix nnmf_multiplicative_update(const DenseMatrix& v, const DenseMatrix& p,
                                       const DenseMatrix& a, const DenseMatrix& x,
                                       double alpha) {
  require_conformable(v, a, x, "nnmf_multiplicative_update");
  const SplitPair split = pos_neg_split(p);
  const DenseMatrix num = matmul_nt(v, x) + alpha * split.plus;
  const DenseMatrix den = matmul(a, matmul_nt(x, x)) + alpha * a + alpha * split.minus;
  DenseMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] *= std::sqrt(num.data()[i] / den.data()[i]);
  return out;
}

void initialize_factors(std::size_t n, std::size_t p, const FactorConfig& cfg, DenseMatrix& a,
                        DenseMatrix& x) {
  std::mt19937_64 rng(cfg.seed);
  a = DenseMatrix(n, cfg.k);
  x = DenseMatrix(cfg.k, p);
  for (double& v : a.data()) v = draw_positive(rng, cfg.sigma);
  for (double& v : x.data()) v = draw_positive(rng, cfg.sigma);
}

FactorResult factorize(const DenseMatrix& v, const HorizontalNetwork& h1,
                       const HorizontalNetwork* h2, Variant variant, const FactorConfig& cfg) {
  cfg.validate();
  const std::size_t n = v.rows();
  const std::size_t p = v.cols();
  if (!v.all_finite() || !v.nonnegative()) {
    throw InputError("factorize: V must be finite and entrywise nonnegative");
  }
  if (h1.size() != n) {
    throw DimensionError("factorize: V is " + v.shape_string() + " but H has " +
                         std::to_string(h1.size()) + " nodes");
  }
  if (h2 != nullptr && h2->size() != p) {
    throw DimensionError("factorize: V is " + v.shape_string() + " but H2 has " +
                         std::to_string(h2->size()) + " nodes");
  }

  FactorResult result;
  initialize_factors(n, p, cfg, result.a, result.x);

  const StructureTarget first = make_structure_target(variant, h1, cfg);
  std::optional<StructureTarget> second;
  if (h2 != nullptr) second = make_structure_target(variant, *h2, cfg);
  const double alpha = cfg.alpha;
  const double alpha2 = cfg.second_alpha();
  const StructureTarget* second_ptr = second ? &*second : nullptr;

  DenseMatrix& a = result.a;
  DenseMatrix& x = result.x;
  double prev = objective(v, a, x, first, alpha, second_ptr, alpha2);
  result.trace.push_back(prev);

  for (std::size_t it = 0; it < cfg.max_iter; ++it) {
    DenseMatrix a_next = factor_step(a, matmul_nt(x, x), matmul_nt(v, x), &first, alpha, cfg);
    DenseMatrix x_next = factor_step(x.transpose(), matmul_tn(a_next, a_next),
                                     matmul_tn(v, a_next), second_ptr, alpha2, cfg)
                             .transpose();
    const double cost = objective(v, a_next, x_next, first, alpha, second_ptr, alpha2);
    // The tree objective is unbounded below; keep the last finite iterate if it runs away.
    if (!std::isfinite(cost) || !a_next.all_finite() || !x_next.all_finite()) {
      result.terminated = Termination::diverged;
      break;
    }
    a = std::move(a_next);
    x = std::move(x_next);
    result.trace.push_back(cost);
    result.iterations = it + 1;
    if (std::abs(prev - cost) < cfg.stop_tol) {
      result.terminated = Termination::stationary;
      break;
    }
    prev = cost;
  }
  return result;
}

}  // namespace mlnf
