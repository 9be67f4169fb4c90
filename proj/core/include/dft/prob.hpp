#pragma once

/// @file prob.hpp
/// Analytic failure probabilities: gate integrals, inclusion-exclusion over
/// the top-level union, and pattern matching of intersections onto atoms.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dft/distribution.hpp"
#include "dft/expr.hpp"
#include "dft/model.hpp"
#include "dft/quadrature.hpp"

namespace dft {

struct QuadratureConfig {
  double tol = 1e-10;
  int max_depth = 60;
  /// Integration ranges stop where the survival of the integrated density
  /// drops below this.
  double tail_eps = 1e-14;
};

enum class IntersectionMode {
  /// Conjoin the subset, re-simplify and factor by shared support.
  kExact,
  /// Multiply the individual term probabilities.
  kPaper,
};

enum class Method { kAnalytic, kMonteCarlo, kBoth };

std::string to_string(IntersectionMode mode);
std::string to_string(Method method);

struct ProbResult {
  double value = 0.0;
  Method method = Method::kAnalytic;
  double quad_error = 0.0;
  std::optional<double> mc_half_width;
  IntersectionMode mode = IntersectionMode::kExact;
  /// Signed inclusion-exclusion terms summed: 2^n - 1 for n union terms.
  std::size_t terms = 0;
};

/// Union size cap: `DFT_MAX_PIE_TERMS` when set to a positive integer,
/// else 20.
std::size_t default_max_terms();

struct EvalOptions {
  QuadratureConfig quad;
  IntersectionMode mode = IntersectionMode::kExact;
  std::size_t max_terms = default_max_terms();
  unsigned workers = 1;
};

/// Pr(X < Y, Y <= t) = int_0^t f_Y(y) F_X(y) dy.
QuadResult after_prob(const Distribution& x, const Distribution& y, double t,
                      const QuadratureConfig& cfg = {});
/// Pr(X < Y, X <= t) = int_0^t f_X(x) (1 - F_Y(x)) dx.
QuadResult before_prob(const Distribution& x, const Distribution& y, double t,
                       const QuadratureConfig& cfg = {});
/// Pr(main < dormant, spare active state fails by t):
/// int_0^t f_Y(v) S_d(v) int_v^t f(u | v) du dv, with S_d = 1 when there is
/// no dormant state. The inner integral runs at tol / 10.
QuadResult spare_prob(const Distribution& main, const ConditionalLaw& spare,
                      const Distribution* dormant, double t,
                      const QuadratureConfig& cfg = {});
/// Cold spare: spare_prob without a dormant state.
QuadResult csp_prob(const Distribution& main, const ConditionalLaw& spare,
                    double t, const QuadratureConfig& cfg = {});
/// Warm spare: failure after activation plus failure of the dormant spare
/// before the main (two disjoint scenarios).
QuadResult wsp_prob(const Distribution& main, const ConditionalLaw& spare,
                    const Distribution& dormant, double t,
                    const QuadratureConfig& cfg = {});

struct SignedTerm {
  /// Bit i set when union term i belongs to the subset.
  std::uint64_t mask;
  int sign;
};

/// All 2^n - 1 nonempty subsets in bitmask order, signed (-1)^(|S|+1).
/// Throws TermExplosion when n > max_terms.
std::vector<SignedTerm> pie_expand(std::size_t n, std::size_t max_terms = 20);

/// Pr(expr <= t) for an expression over the model's variables. Or nodes
/// expand by inclusion-exclusion, And nodes factor by shared support.
/// Throws UnmatchedPattern.
QuadResult event_prob(const Expr& e, const DftModel& m, double t,
                      const EvalOptions& opts = {});

/// Probability that every term fails by t.
QuadResult intersect_prob(const std::vector<Expr>& terms, const DftModel& m,
                          double t, const EvalOptions& opts = {});

/// Per-subset record of a top-level inclusion-exclusion run.
struct PieBreakdown {
  /// Union terms of the simplified top event.
  std::vector<Expr> terms;
  std::vector<SignedTerm> subsets;
  /// Unsigned intersection probability per subset.
  std::vector<QuadResult> values;
};

/// Simplifies the top event, splits it into its union terms and evaluates
/// every intersection in `opts.mode`.
PieBreakdown pie_breakdown(const DftModel& m, double t,
                           const EvalOptions& opts = {});

/// Pr(top <= t). Throws UnmatchedPattern, TermExplosion, QuadratureFailure.
ProbResult dft_event_prob(const DftModel& m, double t,
                          const EvalOptions& opts = {});

}  // namespace dft
