#pragma once

/// @file model.hpp
/// DFT models: basic events with failure laws, named gate definitions,
/// spare metadata, and the Galileo-style text format.
///
/// Model file grammar (`;`-terminated statements, `//` comments):
///
///     top NAME;
///     NAME = EXPR;
///     NAME = fdep(TRIGGER; DEP1, DEP2, ...);
///     NAME : exp(lambda=R);
///     NAME : weibull(shape=R, scale=R);
///
/// Inside expressions the spare gates take a physical spare name:
/// `wsp(main, spare[, dormancy=A])`, `csp(main, spare)`,
/// `sharedspare(main, other_main, spare[, dormancy=A])`. A warm spare gets
/// two state variables, `spare_a` (active, conditional on activation) and
/// `spare_d` (dormant). A cold spare is a single conditional variable named
/// after the spare. A shared spare without dormancy, or with dormancy 1, is
/// hot: one plain variable serves as both states.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dft/distribution.hpp"
#include "dft/expr.hpp"
#include "dft/rewrite.hpp"

namespace dft {

enum class SpareKind { kCold, kWarm, kShared };

/// One physical spare and the variables that stand for it.
struct SpareInfo {
  SpareKind kind;
  /// Declared basic event carrying the spare's active law.
  std::string physical;
  /// Conditional active-state variable; equals `physical` for cold spares.
  std::string active;
  /// Dormant-state variable; empty for cold spares.
  std::string dormant;
  double dormancy = 1.0;
  /// The spare is activated by the earliest failure among these mains.
  std::vector<Expr> activators;
};

/// Marginal role of an evaluation variable.
enum class EventRole {
  /// Independent, with its own law.
  kPlain,
  /// Dormant state of a warm spare; independent of everything except its
  /// active partner.
  kDormant,
  /// Active state of a spare; drawn from a conditional law at activation.
  kConditional,
};

class DftModel {
 public:
  void set_top(std::string name);
  const std::string& top_name() const { return top_; }

  /// `NAME = expr;`. Throws Redefined.
  void define(const std::string& name, Expr expr);
  /// `NAME = fdep(trigger; deps...);`: every other reference to a dependent
  /// resolves to Fdep(dep, trigger); NAME itself resolves to the trigger.
  void define_fdep(const std::string& name, Expr trigger,
                   std::vector<std::string> dependents);
  /// `NAME : law;`. Throws Redefined.
  void declare_basic(const std::string& name, Distribution law);
  /// Replaces the law of a declared basic. Throws Undefined.
  void set_law(const std::string& name, Distribution law);
  /// Replaces the memoryless activation law of a spare. Throws Undefined.
  void set_conditional_law(const std::string& physical, ConditionalLaw law);

  /// Registers a spare gate and returns its state variables. Warm and
  /// cold spares may serve one gate; shared spares may serve several
  /// sharedspare gates with the same dormancy. Throws Redefined otherwise.
  const SpareInfo& add_spare(SpareKind kind, const std::string& physical,
                             double dormancy, const Expr& activator);

  /// Checks that the top resolves, every referenced name is defined exactly
  /// once and the definition graph is acyclic. Throws Undefined,
  /// CycleDetected.
  void validate() const;

  /// The structure function with definitions inlined. With `desugar`,
  /// Hsp becomes And and Fdep becomes Or.
  Expr top_expr(bool desugar = false) const;
  /// Inlines definitions in an arbitrary expression over model names.
  Expr resolve(const Expr& e, bool desugar = false) const;

  /// Evaluation variables: declared basics (except cold spares' physical
  /// names, which are their own conditional variable) plus warm-spare
  /// states, in declaration order.
  std::vector<std::string> variables() const;
  EventRole role(const std::string& var) const;
  /// Marginal law of a plain or dormant variable, or the active law of a
  /// conditional one. Throws MissingDistribution.
  Distribution law(const std::string& var) const;
  /// Spare owning a conditional or dormant variable, else nullptr.
  const SpareInfo* spare_of(const std::string& var) const;
  /// Activation law of a conditional variable. Throws MissingConditionalLaw.
  ConditionalLaw conditional_law(const std::string& var) const;
  const std::vector<SpareInfo>& spares() const { return spares_; }

  /// Declaration-order ranks for canonical operand order.
  NameOrder name_order() const;
  /// Order, continuity and spare-state pairs for the rewriter.
  RewriteContext rewrite_context() const;
  /// Distinct continuous variables and exclusive spare states, for
  /// sampling-based equivalence checks on this model.
  SamplingConstraints sampling_constraints() const;

  const std::map<std::string, Distribution>& laws() const { return laws_; }

 private:
  friend std::string to_model_text(const DftModel& m);

  struct FdepDef {
    Expr trigger;
    std::vector<std::string> dependents;
  };
  enum class StmtKind { kDefine, kFdep, kBasic };

  void claim(const std::string& name, StmtKind kind);
  Expr resolve_name(const std::string& name, bool desugar,
                    std::vector<std::string>& path,
                    std::map<std::string, Expr>& memo) const;
  Expr resolve_expr(const Expr& e, bool desugar,
                    std::vector<std::string>& path,
                    std::map<std::string, Expr>& memo) const;
  const SpareInfo* spare_by_physical(const std::string& physical) const;

  std::string top_;
  std::vector<std::pair<StmtKind, std::string>> statements_;
  std::map<std::string, Expr> definitions_;
  std::map<std::string, FdepDef> fdeps_;
  std::map<std::string, Distribution> laws_;
  std::map<std::string, ConditionalLaw> custom_laws_;
  /// dependent -> fdep definitions that trigger it, in statement order
  std::map<std::string, std::vector<std::string>> triggered_by_;
  std::vector<SpareInfo> spares_;
};

/// Parses the model format. Throws SyntaxError, CycleDetected, Undefined,
/// Redefined.
DftModel parse_model(std::string_view text);

/// Pretty-prints a model; parse_model(to_model_text(m)) reproduces m.
std::string to_model_text(const DftModel& m);

/// FNV-1a 64 of the printed model, as 16 hex digits.
std::string model_digest(const DftModel& m);

/// Model-file rendering of an expression, with spare gates in source form.
std::string to_source(const Expr& e, const DftModel& m);

/// The Cardiac Assist System: pumps with a shared hot spare, motors behind
/// a PAND and a hot spare, CPUs functionally dependent on the crossbar
/// switch and system supervisor. Rates are placeholders.
std::string_view cas_model_text();
DftModel cas_model();

}  // namespace dft
