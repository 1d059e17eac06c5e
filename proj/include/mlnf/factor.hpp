#ifndef MLNF_FACTOR_HPP_
#define MLNF_FACTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "mlnf/matcore.hpp"
#include "mlnf/netstruct.hpp"

namespace mlnf {

/// Which horizontal-network structure the factorization preserves.
///   whole     - NNMF, anchors A to a symmetric NMF factor of H
///   community - CNMF, anchors A to the smallest Laplacian eigenvectors of H
///   degree    - DNMF, matches A A^T 1 to the degree vector H 1
///   tree      - TNMF, rewards A A^T on max-spanning-tree edges, penalizes it elsewhere
enum class Variant { whole, community, degree, tree };

std::string_view variant_name(Variant v);  // "nnmf", "cnmf", "dnmf", "tnmf"
Variant parse_variant(std::string_view name);
inline constexpr Variant kAllVariants[] = {Variant::whole, Variant::community, Variant::degree,
                                           Variant::tree};

struct FactorConfig {
  std::size_t k = 10;
  double alpha = 0.1;
  std::size_t max_iter = 10000;
  double sigma = 1e-9;
  double delta = 1e-9;
  double stop_tol = 1e-10;
  std::uint64_t seed = 0;
  /// Weight of the second-level (X side) structure term; defaults to alpha.
  std::optional<double> alpha2;
  /// Upper clamp on every computed step size.
  double eta_cap = 1e6;

  double second_alpha() const { return alpha2.value_or(alpha); }
  /// Throws InputError when an invariant (k >= 1, sigma/delta/stop_tol > 0, alpha >= 0) fails.
  void validate() const;
};

/// diverged: the next iterate had a non-finite cost or entry (possible for the tree
/// objective, which is unbounded below); the result holds the last finite iterate.
enum class Termination { max_iter_reached, stationary, diverged };

struct FactorResult {
  DenseMatrix a;  // n x k
  DenseMatrix x;  // k x p
  /// trace[0] is the cost at initialization, trace[t] the cost after iteration t.
  std::vector<double> trace;
  Termination terminated = Termination::max_iter_reached;
  std::size_t iterations = 0;
};

/// Anchor matrix for the whole/community variants together with its sign split.
struct AnchorTarget {
  DenseMatrix anchor;
  SplitPair split;
};

struct DegreeTarget {
  Vector degrees;
};

struct TreeTarget {
  TreeMask tree;
};

/// Per-variant precomputation for one horizontal network. The factor it constrains
/// always has one row per network node.
struct StructureTarget {
  Variant variant = Variant::whole;
  std::variant<AnchorTarget, DegreeTarget, TreeTarget> payload;

  std::size_t nodes() const;
};

StructureTarget make_structure_target(Variant variant, const HorizontalNetwork& h,
                                      const FactorConfig& cfg);
StructureTarget make_anchor_target(Variant variant, DenseMatrix anchor);

/// Unweighted structure term for a factor F whose rows are the network's nodes:
///   anchor: 1/2 ||P - F||^2
///   degree: 1/2 ||H1 - F F^T 1||^2
///   tree:   1/4 (||Tc (.) F F^T||^2 - ||T (.) F F^T||^2)
double structure_cost(const StructureTarget& target, const DenseMatrix& f);

/// 1/2 ||V - A X||^2
double data_cost(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x);

/// Full objective: data_cost + alpha * structure(A) [+ alpha2 * structure(X^T)].
double objective(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                 const StructureTarget& first, double alpha,
                 const StructureTarget* second = nullptr, double alpha2 = 0.0);

/// Symmetric NMF pre-solve, argmin_{P >= 0} 1/2 ||H - P P^T||^2, via
/// P <- P (.) ((H P) / (P P^T P + delta))^(1/3). Returns the best iterate seen.
DenseMatrix symmetric_nmf(const HorizontalNetwork& h, std::size_t k, const FactorConfig& cfg);
double symmetric_nmf_objective(const HorizontalNetwork& h, const DenseMatrix& p);

// ---------------------------------------------------------------------------
// Gradients, exactly as the update rules are written.

/// A (X X^T + alpha I) - (V X^T + alpha P)
DenseMatrix nnmf_a_gradient(const DenseMatrix& v, const DenseMatrix& p, const DenseMatrix& a,
                            const DenseMatrix& x, double alpha);

/// -V X^T + A X X^T - alpha (H1) 1^T A + 2 alpha (A A^T 1) 1^T A.
/// This is the published degree-preserving gradient; it is not the exact gradient of
/// the degree cost (see dnmf_cost_gradient).
DenseMatrix dnmf_a_gradient(const DenseMatrix& v, std::span<const double> degrees,
                            const DenseMatrix& a, const DenseMatrix& x, double alpha);

/// Exact gradient of 1/2 ||V - AX||^2 + alpha/2 ||d - A A^T 1||^2:
///   A X X^T - V X^T + alpha [ e (1^T A) + 1 (e^T A) ],  e = A A^T 1 - d.
DenseMatrix dnmf_cost_gradient(const DenseMatrix& v, std::span<const double> degrees,
                               const DenseMatrix& a, const DenseMatrix& x, double alpha);

/// (-V X^T + A X X^T) + alpha ((Tc - T) (.) A A^T) A
DenseMatrix tnmf_a_gradient(const DenseMatrix& v, const TreeMask& t, const DenseMatrix& a,
                            const DenseMatrix& x, double alpha);

/// -A^T V + A^T A X
DenseMatrix x_gradient(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x);

// ---------------------------------------------------------------------------
// Clipped-step-size gradient steps. Each returns the updated factor, entrywise >= 0.

DenseMatrix nnmf_a_step(const DenseMatrix& v, const DenseMatrix& p, const DenseMatrix& a,
                        const DenseMatrix& x, const FactorConfig& cfg);
DenseMatrix dnmf_a_step(const DenseMatrix& v, std::span<const double> degrees,
                        const DenseMatrix& a, const DenseMatrix& x, const FactorConfig& cfg);
DenseMatrix tnmf_a_step(const DenseMatrix& v, const TreeMask& t, const DenseMatrix& a,
                        const DenseMatrix& x, const FactorConfig& cfg);
DenseMatrix update_x_step(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                          const FactorConfig& cfg);

/// One A step for any structure target (h may be absent: plain NMF step).
DenseMatrix structured_a_step(const DenseMatrix& v, const DenseMatrix& a, const DenseMatrix& x,
                              const StructureTarget* target, double alpha,
                              const FactorConfig& cfg);

/// Closed-form multiplicative form of the whole/community A update,
/// A (.) sqrt((V X^T + alpha P+) / (A X X^T + alpha A + alpha P-)). Cross-check only.
DenseMatrix nnmf_multiplicative_update(const DenseMatrix& v, const DenseMatrix& p,
                                       const DenseMatrix& a, const DenseMatrix& x,
                                       double alpha);

/// Runs the chosen algorithm. h2, when given, is a p x p network on the columns of V
/// and receives the same kind of structure term on X^T, weighted by cfg.second_alpha().
FactorResult factorize(const DenseMatrix& v, const HorizontalNetwork& h1,
                       const HorizontalNetwork* h2, Variant variant, const FactorConfig& cfg);

/// A, X ~ uniform(sigma, 1] drawn (A first, row-major) from the seeded generator.
void initialize_factors(std::size_t n, std::size_t p, const FactorConfig& cfg, DenseMatrix& a,
                        DenseMatrix& x);

}  // namespace mlnf

#endif  // MLNF_FACTOR_HPP_
