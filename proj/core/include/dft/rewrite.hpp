#pragma once

/// @file rewrite.hpp
/// Rule-based simplification of failure expressions and sampling-based
/// equivalence checking.
///
/// Rules are data: `name: LHS => RHS [where cond(X, Y), ...]` in the
/// expression grammar, where every identifier is a metavariable. And/Or
/// patterns match modulo associativity and commutativity: at the root of a
/// rule, the pattern may match any sub-multiset of the operands (the rest
/// is kept alongside the instantiated right-hand side); below the root, one
/// metavariable operand may absorb several operands.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dft/error.hpp"
#include "dft/eval.hpp"
#include "dft/expr.hpp"

namespace dft {

enum class ConditionKind {
  /// Both metavariables bind distinct basic events with continuous laws.
  kDistinctBasics,
  /// Both bind the two states of one warm spare; at most one is finite.
  kSparePair,
};

struct SideCondition {
  ConditionKind kind;
  std::string first;
  std::string second;

  friend bool operator==(const SideCondition&, const SideCondition&) = default;
};

struct RewriteRule {
  std::string name;
  Expr lhs;
  Expr rhs;
  std::vector<SideCondition> conditions;
};

enum class Strategy { kInnermostFixpoint };

struct RuleSet {
  std::vector<RewriteRule> rules;
  Strategy strategy = Strategy::kInnermostFixpoint;
  std::size_t step_cap = 10000;

  const RewriteRule* find(std::string_view name) const;
};

/// What the rewriter may assume about basic events.
struct RewriteContext {
  /// Canonical operand order.
  NameOrder order;
  /// Names with continuous laws; empty means "every basic event".
  std::set<std::string> continuous;
  /// Unordered (active, dormant) state pairs of warm spares.
  std::set<std::pair<std::string, std::string>> spare_pairs;

  bool is_continuous(const std::string& name) const;
  bool is_spare_pair(const std::string& a, const std::string& b) const;
};

class StepCapExceeded : public Error {
 public:
  StepCapExceeded(std::size_t cap, Expr partial)
      : Error("rewrite step cap of " + std::to_string(cap) + " reached"),
        partial_(std::move(partial)) {}
  const Expr& partial() const { return partial_; }

 private:
  Expr partial_;
};

struct SimplifyStats {
  std::size_t steps = 0;
  std::map<std::string, std::size_t> fired;
};

/// Innermost-first rewriting to a fixed point of `rules`, with operands of
/// And/Or kept flattened and sorted. Throws StepCapExceeded.
Expr simplify(const Expr& e, const RuleSet& rules,
              const RewriteContext& ctx = {}, SimplifyStats* stats = nullptr);

/// Identity elements, idempotence, absorption, factoring, the temporal
/// operator laws, gate-equivalence rewrites (FDEP, HSP, PAND, CSP) and the
/// WSP/shared-spare expansions.
const RuleSet& default_rules();

/// One rule per line; blank lines and `//` comments are skipped.
/// Throws SyntaxError (also for right-hand-side metavariables that do not
/// occur on the left).
std::vector<RewriteRule> parse_rules(std::string_view text);

std::string to_string(const RewriteRule& rule);

/// Restrictions on sampled assignments.
struct SamplingConstraints {
  /// Pairwise distinct whenever finite.
  std::set<std::string> distinct;
  /// Never assigned Infinity.
  std::set<std::string> finite;
  /// At most one of each pair is finite.
  std::vector<std::pair<std::string, std::string>> exclusive;
};

struct EquivVerdict {
  bool equivalent = true;
  std::size_t trials = 0;
  std::optional<Assignment> counterexample;
  ExtTime lhs_value;
  ExtTime rhs_value;
};

/// Compares eval(e1) and eval(e2) on `trials` seeded assignments mixing
/// continuous draws, deliberate ties, zeros and Infinity. Stops at the first
/// counterexample.
EquivVerdict check_equiv(const Expr& e1, const Expr& e2, std::size_t trials,
                         std::uint64_t seed,
                         const SamplingConstraints& constraints = {});

/// Constraints implied by a rule's side conditions.
SamplingConstraints constraints_for(const RewriteRule& rule);

/// Soundness of one rule by sampling its instantiation with metavariables
/// read as basic events.
EquivVerdict check_rule(const RewriteRule& rule, std::size_t trials,
                        std::uint64_t seed);

}  // namespace dft
