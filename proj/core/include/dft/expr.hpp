#pragma once

/// @file expr.hpp
/// Failure-time expressions: the AST of a DFT structure function.
///
/// Nodes are immutable and shared; copying an Expr is a reference-count bump.
/// And/Or are n-ary (at least two operands once built through And()/Or()),
/// every other gate has a fixed arity.

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dft {

enum class Op {
  kAlways,
  kNever,
  kBasic,
  kAnd,
  kOr,
  kPand,         // (x, y)
  kFdep,         // (dependent, trigger)
  kBefore,       // (x, y)
  kSimult,       // (x, y)
  kInclBefore,   // (x, y)
  kHsp,          // (main, spare)
  kCsp,          // (main, spare)
  kWsp,          // (main, spare_active, spare_dormant)
  kSharedSpare,  // (main, other_main, spare_active, spare_dormant)
};

/// Grammar keyword of an operator ("and", "ibefore", ...).
std::string_view keyword(Op op);
/// Fixed arity, or 0 for the n-ary And/Or and for leaves.
std::size_t arity(Op op);
bool is_leaf(Op op);
bool is_associative(Op op);

class Expr {
 public:
  /// NEVER.
  Expr();

  Op op() const { return node_->op; }
  /// Basic-event name; empty for every other node.
  const std::string& name() const { return node_->name; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i) const { return node_->args.at(i); }

  bool is_basic() const { return op() == Op::kBasic; }
  /// Number of nodes in the tree.
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  /// Builds a node without any normalization. And/Or keep their operand
  /// list as given (any length >= 1).
  static Expr Make(Op op, std::vector<Expr> args, std::string name = {});

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<Expr> args;
    std::size_t size;
    std::size_t hash;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

Expr Always();
Expr Never();
Expr Basic(std::string name);
/// And/Or with a single operand collapse to that operand.
Expr And(std::vector<Expr> args);
Expr And(Expr a, Expr b);
Expr Or(std::vector<Expr> args);
Expr Or(Expr a, Expr b);
Expr Pand(Expr x, Expr y);
Expr Fdep(Expr dependent, Expr trigger);
Expr Before(Expr x, Expr y);
Expr Simult(Expr x, Expr y);
Expr InclBefore(Expr x, Expr y);
Expr Hsp(Expr main, Expr spare);
Expr Csp(Expr main, Expr spare);
Expr Wsp(Expr main, Expr spare_active, Expr spare_dormant);
Expr SharedSpare(Expr main, Expr other_main, Expr spare_active,
                 Expr spare_dormant);

/// Names of the basic events occurring in `e`.
std::set<std::string> basics_of(const Expr& e);

/// Renders `e` in the model-file expression grammar, e.g. `and(A, B)`.
std::string to_string(const Expr& e);

/// Ranking of basic-event names used for canonical operand order.
/// Ranked names come first in rank order; unranked names follow,
/// ordered lexicographically.
class NameOrder {
 public:
  NameOrder() = default;
  explicit NameOrder(const std::vector<std::string>& ranked);

  void add(const std::string& name);
  /// Negative when `a` sorts before `b`.
  int compare(const std::string& a, const std::string& b) const;

 private:
  std::unordered_map<std::string, int> rank_;
};

/// Total order on expressions: by the depth-first sequence of basic-event
/// ranks, then by structure. Returns <0, 0, >0.
int compare(const Expr& a, const Expr& b, const NameOrder& order);

/// Flattens nested And/Or into their parent and sorts their operands;
/// one-operand And/Or collapse. Only touches the root node.
Expr canonical_node(const Expr& e, const NameOrder& order);

/// Applies canonical_node bottom-up over the whole tree.
Expr canonicalize(const Expr& e, const NameOrder& order);

}  // namespace dft
