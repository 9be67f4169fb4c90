#include "dft/expr.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <stdexcept>

namespace dft {

namespace {

std::size_t mix_hash(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

std::string_view keyword(Op op) {
  switch (op) {
    case Op::kAlways: return "always";
    case Op::kNever: return "never";
    case Op::kBasic: return "basic";
    case Op::kAnd: return "and";
    case Op::kOr: return "or";
    case Op::kPand: return "pand";
    case Op::kFdep: return "fdep";
    case Op::kBefore: return "before";
    case Op::kSimult: return "simult";
    case Op::kInclBefore: return "ibefore";
    case Op::kHsp: return "hsp";
    case Op::kCsp: return "csp";
    case Op::kWsp: return "wsp";
    case Op::kSharedSpare: return "sharedspare";
  }
  return "?";
}

std::size_t arity(Op op) {
  switch (op) {
    case Op::kAlways:
    case Op::kNever:
    case Op::kBasic:
    case Op::kAnd:
    case Op::kOr:
      return 0;
    case Op::kWsp: return 3;
    case Op::kSharedSpare: return 4;
    default: return 2;
  }
}

bool is_leaf(Op op) {
  return op == Op::kAlways || op == Op::kNever || op == Op::kBasic;
}

bool is_associative(Op op) { return op == Op::kAnd || op == Op::kOr; }

Expr::Expr() : Expr(Make(Op::kNever, {})) {}

Expr Expr::Make(Op op, std::vector<Expr> args, std::string name) {
  if (is_leaf(op)) {
    if (!args.empty()) throw std::invalid_argument("leaf with operands");
    if (op == Op::kBasic && name.empty()) {
      throw std::invalid_argument("basic event without a name");
    }
  } else if (is_associative(op)) {
    if (args.empty()) throw std::invalid_argument("empty and/or");
  } else if (args.size() != arity(op)) {
    throw std::invalid_argument(std::string(keyword(op)) + " expects " +
                                std::to_string(arity(op)) + " operands");
  }
  std::size_t size = 1;
  std::size_t h = std::hash<int>{}(static_cast<int>(op));
  if (op == Op::kBasic) h = mix_hash(h, std::hash<std::string>{}(name));
  for (const Expr& a : args) {
    size += a.size();
    h = mix_hash(h, a.hash());
  }
  return Expr(std::make_shared<const Node>(
      Node{op, std::move(name), std::move(args), size, h}));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.op() != b.op() ||
      a.name() != b.name() || a.args().size() != b.args().size()) {
    return false;
  }
  return std::equal(a.args().begin(), a.args().end(), b.args().begin());
}

Expr Always() {
  static const Expr e = Expr::Make(Op::kAlways, {});
  return e;
}
Expr Never() {
  static const Expr e = Expr::Make(Op::kNever, {});
  return e;
}
Expr Basic(std::string name) {
  return Expr::Make(Op::kBasic, {}, std::move(name));
}
Expr And(std::vector<Expr> args) {
  if (args.size() == 1) return args.front();
  return Expr::Make(Op::kAnd, std::move(args));
}
Expr And(Expr a, Expr b) { return And(std::vector<Expr>{a, b}); }
Expr Or(std::vector<Expr> args) {
  if (args.size() == 1) return args.front();
  return Expr::Make(Op::kOr, std::move(args));
}
Expr Or(Expr a, Expr b) { return Or(std::vector<Expr>{a, b}); }
Expr Pand(Expr x, Expr y) { return Expr::Make(Op::kPand, {x, y}); }
Expr Fdep(Expr dependent, Expr trigger) {
  return Expr::Make(Op::kFdep, {dependent, trigger});
}
Expr Before(Expr x, Expr y) { return Expr::Make(Op::kBefore, {x, y}); }
Expr Simult(Expr x, Expr y) { return Expr::Make(Op::kSimult, {x, y}); }
Expr InclBefore(Expr x, Expr y) {
  return Expr::Make(Op::kInclBefore, {x, y});
}
Expr Hsp(Expr main, Expr spare) { return Expr::Make(Op::kHsp, {main, spare}); }
Expr Csp(Expr main, Expr spare) { return Expr::Make(Op::kCsp, {main, spare}); }
Expr Wsp(Expr main, Expr spare_active, Expr spare_dormant) {
  return Expr::Make(Op::kWsp, {main, spare_active, spare_dormant});
}
Expr SharedSpare(Expr main, Expr other_main, Expr spare_active,
                 Expr spare_dormant) {
  return Expr::Make(Op::kSharedSpare,
                    {main, other_main, spare_active, spare_dormant});
}

namespace {

void collect_basics(const Expr& e, std::set<std::string>* out) {
  if (e.is_basic()) {
    out->insert(e.name());
    return;
  }
  for (const Expr& a : e.args()) collect_basics(a, out);
}

void render(const Expr& e, std::string* out) {
  switch (e.op()) {
    case Op::kBasic:
      *out += e.name();
      return;
    case Op::kAlways:
    case Op::kNever:
      *out += keyword(e.op());
      return;
    default:
      break;
  }
  *out += keyword(e.op());
  *out += '(';
  bool first = true;
  for (const Expr& a : e.args()) {
    if (!first) *out += ", ";
    first = false;
    render(a, out);
  }
  *out += ')';
}

/// Leaf token of the depth-first leaf sequence.
struct Leaf {
  int kind;  // 0 always, 1 never, 2 basic
  const std::string* name;
};

void leaves(const Expr& e, std::vector<Leaf>* out) {
  switch (e.op()) {
    case Op::kAlways: out->push_back({0, nullptr}); return;
    case Op::kNever: out->push_back({1, nullptr}); return;
    case Op::kBasic: out->push_back({2, &e.name()}); return;
    default:
      for (const Expr& a : e.args()) leaves(a, out);
  }
}

int structural_compare(const Expr& a, const Expr& b, const NameOrder& order) {
  if (a.op() != b.op()) {
    return static_cast<int>(a.op()) < static_cast<int>(b.op()) ? -1 : 1;
  }
  if (a.is_basic()) return order.compare(a.name(), b.name());
  if (a.args().size() != b.args().size()) {
    return a.args().size() < b.args().size() ? -1 : 1;
  }
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    int c = structural_compare(a.arg(i), b.arg(i), order);
    if (c != 0) return c;
  }
  return 0;
}

}  // namespace

std::set<std::string> basics_of(const Expr& e) {
  std::set<std::string> out;
  collect_basics(e, &out);
  return out;
}

std::string to_string(const Expr& e) {
  std::string out;
  render(e, &out);
  return out;
}

NameOrder::NameOrder(const std::vector<std::string>& ranked) {
  for (const std::string& n : ranked) add(n);
}

void NameOrder::add(const std::string& name) {
  rank_.emplace(name, static_cast<int>(rank_.size()));
}

int NameOrder::compare(const std::string& a, const std::string& b) const {
  auto ia = rank_.find(a);
  auto ib = rank_.find(b);
  int ra = ia == rank_.end() ? INT_MAX : ia->second;
  int rb = ib == rank_.end() ? INT_MAX : ib->second;
  if (ra != rb) return ra < rb ? -1 : 1;
  return a.compare(b) < 0 ? -1 : (a == b ? 0 : 1);
}

int compare(const Expr& a, const Expr& b, const NameOrder& order) {
  if (a == b) return 0;
  std::vector<Leaf> la;
  std::vector<Leaf> lb;
  leaves(a, &la);
  leaves(b, &lb);
  std::size_t n = std::min(la.size(), lb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (la[i].kind != lb[i].kind) return la[i].kind < lb[i].kind ? -1 : 1;
    if (la[i].kind == 2) {
      int c = order.compare(*la[i].name, *lb[i].name);
      if (c != 0) return c;
    }
  }
  if (la.size() != lb.size()) return la.size() < lb.size() ? -1 : 1;
  return structural_compare(a, b, order);
}

Expr canonical_node(const Expr& e, const NameOrder& order) {
  if (!is_associative(e.op())) return e;
  std::vector<Expr> flat;
  flat.reserve(e.args().size());
  for (const Expr& a : e.args()) {
    if (a.op() == e.op()) {
      flat.insert(flat.end(), a.args().begin(), a.args().end());
    } else {
      flat.push_back(a);
    }
  }
  std::stable_sort(flat.begin(), flat.end(),
                   [&](const Expr& x, const Expr& y) {
                     return compare(x, y, order) < 0;
                   });
  if (flat.size() == 1) return flat.front();
  if (flat.size() == e.args().size() &&
      std::equal(flat.begin(), flat.end(), e.args().begin())) {
    return e;
  }
  return Expr::Make(e.op(), std::move(flat));
}

Expr canonicalize(const Expr& e, const NameOrder& order) {
  if (is_leaf(e.op())) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const Expr& a : e.args()) {
    args.push_back(canonicalize(a, order));
    changed = changed || !(args.back() == a);
  }
  Expr rebuilt = changed ? Expr::Make(e.op(), std::move(args)) : e;
  return canonical_node(rebuilt, order);
}

}  // namespace dft
