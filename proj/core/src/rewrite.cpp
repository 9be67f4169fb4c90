#include "dft/rewrite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "dft/random.hpp"
#include "dft/syntax.hpp"

namespace dft {

namespace {

// The shipped rule set. Gate-equivalence rewrites come first so that the
// operator laws below see only and/or/before/ibefore/simult.
constexpr std::string_view kDefaultRules = R"(
// gate equivalences
fdep-or: fdep(X, T) => or(X, T)
hsp-and: hsp(Y, X) => and(Y, X)
pand-and-ibefore: pand(X, Y) => and(Y, ibefore(X, Y))
csp-expand: csp(Y, X) => and(X, before(Y, X))
wsp-expand: wsp(Y, XA, XD) => or(and(Y, before(XD, Y)), and(XA, before(Y, XA)), simult(Y, XA), simult(Y, XD))
shared-spare-expand: sharedspare(X, Y, ZA, ZD) => or(and(X, before(ZD, X)), and(ZA, before(X, ZA)), and(X, before(Y, X)))

// identity elements
and-never: and(X, never) => never
and-always: and(X, always) => X
or-always: or(X, always) => always
or-never: or(X, never) => X

// lattice laws
and-idem: and(X, X) => X
or-idem: or(X, X) => X
or-absorb: or(X, and(X, Y)) => X
and-absorb: and(X, or(X, Y)) => X
and-factor: and(or(X, Y), or(X, Z)) => or(X, and(Y, Z))

// temporal operators
before-self: before(X, X) => never
ibefore-self: ibefore(X, X) => X
simult-self: simult(X, X) => X
before-never-left: before(never, X) => never
before-never-right: before(X, never) => X
before-always-right: before(X, always) => never
ibefore-never-left: ibefore(never, X) => never
ibefore-never-right: ibefore(X, never) => X
ibefore-always-left: ibefore(always, X) => always
simult-never-right: simult(X, never) => never
simult-never-left: simult(never, X) => never
before-or: before(X, or(Y, Z)) => and(before(X, Y), before(X, Z))
ibefore-or: ibefore(X, or(Y, Z)) => and(ibefore(X, Y), ibefore(X, Z))
incl-before-absorb: or(ibefore(X, Y), simult(X, Y)) => ibefore(X, Y)
before-antisym: and(before(X, Y), before(Y, X)) => never
and-before-absorb: and(X, before(X, Y)) => before(X, Y)

// distinct continuous basic events never fail together
simult-never: simult(X, Y) => never where distinct-basics(X, Y)
ibefore-distinct: ibefore(X, Y) => before(X, Y) where distinct-basics(X, Y)
spare-merge: or(and(X, before(Y, X)), and(Y, before(X, Y))) => and(X, Y) where distinct-basics(X, Y)
spare-exclusive: and(X, Y) => never where spare-pair(X, Y)

// two mains sharing one hot spare
shared-spare-pair: and(or(and(X, Z), and(X, before(Y, X))), or(and(Y, Z), and(Y, before(X, Y)))) => and(X, Y, Z)
)";

using Bindings = std::vector<std::pair<std::string, Expr>>;
using Cont = std::function<bool(Bindings&)>;

const Expr* lookup(const Bindings& b, const std::string& var) {
  for (const auto& [name, value] : b) {
    if (name == var) return &value;
  }
  return nullptr;
}

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

class Rewriter {
 public:
  Rewriter(const RuleSet& rules, const RewriteContext& ctx,
           SimplifyStats* stats)
      : rules_(rules), ctx_(ctx), stats_(stats) {}

  Expr normalize(const Expr& e) {
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
    Expr cur = rebuild(e);
    for (bool fired = true; fired && !capped_;) {
      fired = false;
      for (const RewriteRule& rule : rules_.rules) {
        std::optional<Expr> out = apply(rule, cur);
        if (!out) continue;
        ++steps_;
        if (stats_) {
          ++stats_->steps;
          ++stats_->fired[rule.name];
        }
        if (steps_ >= rules_.step_cap) capped_ = true;
        cur = rebuild(*out);
        fired = true;
        break;
      }
    }
    memo_.emplace(e, cur);
    memo_.emplace(cur, cur);
    return cur;
  }

  bool capped() const { return capped_; }

 private:
  Expr rebuild(const Expr& e) {
    if (is_leaf(e.op())) return e;
    std::vector<Expr> args;
    args.reserve(e.args().size());
    bool changed = false;
    for (const Expr& a : e.args()) {
      args.push_back(normalize(a));
      changed = changed || !(args.back() == a);
    }
    Expr node = changed ? Expr::Make(e.op(), std::move(args)) : e;
    return canonical_node(node, ctx_.order);
  }

  bool conditions_hold(const RewriteRule& rule, const Bindings& b) const {
    for (const SideCondition& c : rule.conditions) {
      const Expr* x = lookup(b, c.first);
      const Expr* y = lookup(b, c.second);
      if (!x || !y || !x->is_basic() || !y->is_basic()) return false;
      switch (c.kind) {
        case ConditionKind::kDistinctBasics:
          if (x->name() == y->name() || !ctx_.is_continuous(x->name()) ||
              !ctx_.is_continuous(y->name())) {
            return false;
          }
          break;
        case ConditionKind::kSparePair:
          if (!ctx_.is_spare_pair(x->name(), y->name())) return false;
          break;
      }
    }
    return true;
  }

  bool match(const Expr& pat, const Expr& t, Bindings& b, const Cont& k) {
    switch (pat.op()) {
      case Op::kBasic: {
        if (const Expr* bound = lookup(b, pat.name())) {
          return *bound == t && k(b);
        }
        b.emplace_back(pat.name(), t);
        const bool ok = k(b);
        b.pop_back();
        return ok;
      }
      case Op::kAlways:
      case Op::kNever:
        return t.op() == pat.op() && k(b);
      default:
        break;
    }
    if (pat.op() != t.op()) return false;
    if (is_associative(pat.op())) return match_ac(pat, t, b, k);
    return match_seq(pat, t, 0, b, k);
  }

  bool match_seq(const Expr& pat, const Expr& t, std::size_t i, Bindings& b,
                 const Cont& k) {
    if (i == pat.args().size()) return k(b);
    return match(pat.arg(i), t.arg(i), b, [&](Bindings& bb) {
      return match_seq(pat, t, i + 1, bb, k);
    });
  }

  /// Injectively maps pattern operands (except `skip`) onto unused operands
  /// of `t`, then calls `done` with the usage mask.
  bool assign(const Expr& pat, const Expr& t, std::size_t i, std::size_t skip,
              std::vector<char>& used, Bindings& b,
              const std::function<bool(Bindings&, std::vector<char>&)>& done) {
    if (i == skip) ++i;
    if (i >= pat.args().size()) return done(b, used);
    for (std::size_t j = 0; j < t.args().size(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      const bool ok = match(pat.arg(i), t.arg(j), b, [&](Bindings& bb) {
        return assign(pat, t, i + 1, skip, used, bb, done);
      });
      used[j] = 0;
      if (ok) return true;
    }
    return false;
  }

  bool match_ac(const Expr& pat, const Expr& t, Bindings& b, const Cont& k) {
    const std::size_t n = t.args().size();
    const std::size_t m = pat.args().size();
    if (n < m) return false;
    std::vector<char> used(n, 0);
    if (n == m) {
      return assign(pat, t, 0, m, used, b,
                    [&](Bindings& bb, std::vector<char>&) { return k(bb); });
    }
    for (std::size_t a = 0; a < m; ++a) {
      if (!pat.arg(a).is_basic()) continue;
      const bool ok = assign(
          pat, t, 0, a, used, b, [&](Bindings& bb, std::vector<char>& u) {
            std::vector<Expr> rest;
            for (std::size_t j = 0; j < n; ++j) {
              if (!u[j]) rest.push_back(t.arg(j));
            }
            return match(pat.arg(a), Expr::Make(t.op(), std::move(rest)), bb,
                         k);
          });
      if (ok) return true;
    }
    return false;
  }

  Expr instantiate(const Expr& rhs, const Bindings& b) const {
    if (rhs.is_basic()) return *lookup(b, rhs.name());
    if (is_leaf(rhs.op())) return rhs;
    std::vector<Expr> args;
    args.reserve(rhs.args().size());
    for (const Expr& a : rhs.args()) args.push_back(instantiate(a, b));
    return Expr::Make(rhs.op(), std::move(args));
  }

  std::optional<Expr> apply(const RewriteRule& rule, const Expr& t) {
    const Expr& pat = rule.lhs;
    std::optional<Expr> result;
    Bindings b;
    if (is_associative(pat.op()) && pat.op() == t.op() &&
        t.args().size() >= pat.args().size()) {
      std::vector<char> used(t.args().size(), 0);
      assign(pat, t, 0, pat.args().size(), used, b,
             [&](Bindings& bb, std::vector<char>& u) {
               if (!conditions_hold(rule, bb)) return false;
               std::vector<Expr> rest;
               for (std::size_t j = 0; j < t.args().size(); ++j) {
                 if (!u[j]) rest.push_back(t.arg(j));
               }
               Expr inst = instantiate(rule.rhs, bb);
               if (rest.empty()) {
                 result = inst;
               } else {
                 rest.push_back(inst);
                 result = Expr::Make(t.op(), std::move(rest));
               }
               return true;
             });
      return result;
    }
    match(pat, t, b, [&](Bindings& bb) {
      if (!conditions_hold(rule, bb)) return false;
      result = instantiate(rule.rhs, bb);
      return true;
    });
    return result;
  }

  const RuleSet& rules_;
  const RewriteContext& ctx_;
  SimplifyStats* stats_;
  std::size_t steps_ = 0;
  bool capped_ = false;
  std::unordered_map<Expr, Expr, ExprHash> memo_;
};

void collect_vars(const Expr& e, std::set<std::string>* out) {
  if (e.is_basic()) out->insert(e.name());
  for (const Expr& a : e.args()) collect_vars(a, out);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

bool RewriteContext::is_continuous(const std::string& name) const {
  return continuous.empty() || continuous.count(name) != 0;
}

bool RewriteContext::is_spare_pair(const std::string& a,
                                   const std::string& b) const {
  return spare_pairs.count({a, b}) != 0 || spare_pairs.count({b, a}) != 0;
}

const RewriteRule* RuleSet::find(std::string_view name) const {
  for (const RewriteRule& r : rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

Expr simplify(const Expr& e, const RuleSet& rules, const RewriteContext& ctx,
              SimplifyStats* stats) {
  if (rules.step_cap == 0) throw std::invalid_argument("step cap must be > 0");
  Rewriter rw(rules, ctx, stats);
  Expr out = rw.normalize(e);
  if (rw.capped()) throw StepCapExceeded(rules.step_cap, out);
  return out;
}

const RuleSet& default_rules() {
  static const RuleSet rules{parse_rules(kDefaultRules)};
  return rules;
}

std::vector<RewriteRule> parse_rules(std::string_view text) {
  std::vector<RewriteRule> rules;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    ++line_no;
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (const auto c = line.find("//"); c != std::string::npos) {
      line.erase(c);
    }
    if (trim(line).empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw SyntaxError(line_no, 1, "'name:'");
    RewriteRule rule;
    rule.name = trim(std::string_view(line).substr(0, colon));
    if (rule.name.empty() ||
        rule.name.find_first_of(" \t") != std::string::npos) {
      throw SyntaxError(line_no, 1, "rule name");
    }
    // Blank out the name so parser columns match the source line.
    std::string body = line;
    std::fill(body.begin(), body.begin() + colon + 1, ' ');
    Parser p(body, line_no);
    rule.lhs = p.parse_expr();
    p.expect("=>");
    rule.rhs = p.parse_expr();
    if (p.peek().kind == Token::kIdent && p.peek().text == "where") {
      p.next();
      do {
        const Token cond = p.peek();
        const std::string kind = p.expect_ident("side condition");
        SideCondition sc;
        if (kind == "distinct-basics") {
          sc.kind = ConditionKind::kDistinctBasics;
        } else if (kind == "spare-pair") {
          sc.kind = ConditionKind::kSparePair;
        } else {
          throw SyntaxError(cond.line, cond.col,
                            "'distinct-basics' or 'spare-pair'");
        }
        p.expect("(");
        sc.first = p.expect_ident("metavariable");
        p.expect(",");
        sc.second = p.expect_ident("metavariable");
        p.expect(")");
        rule.conditions.push_back(std::move(sc));
      } while (p.accept(","));
    }
    p.accept(";");
    if (!p.at_end()) p.fail("end of rule");
    std::set<std::string> lhs_vars;
    std::set<std::string> rhs_vars;
    collect_vars(rule.lhs, &lhs_vars);
    collect_vars(rule.rhs, &rhs_vars);
    for (const SideCondition& c : rule.conditions) {
      rhs_vars.insert(c.first);
      rhs_vars.insert(c.second);
    }
    for (const std::string& v : rhs_vars) {
      if (!lhs_vars.count(v)) {
        throw SyntaxError(line_no, 1,
                          "metavariable '" + v + "' bound by the left side");
      }
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

std::string to_string(const RewriteRule& rule) {
  std::string out =
      rule.name + ": " + to_string(rule.lhs) + " => " + to_string(rule.rhs);
  for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
    const SideCondition& c = rule.conditions[i];
    out += i == 0 ? " where " : ", ";
    out += c.kind == ConditionKind::kDistinctBasics ? "distinct-basics("
                                                    : "spare-pair(";
    out += c.first + ", " + c.second + ")";
  }
  return out;
}

EquivVerdict check_equiv(const Expr& e1, const Expr& e2, std::size_t trials,
                         std::uint64_t seed,
                         const SamplingConstraints& constraints) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::set<std::string> names = basics_of(e1);
  for (const std::string& n : basics_of(e2)) names.insert(n);
  const std::vector<std::string> order(names.begin(), names.end());

  EquivVerdict verdict;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    RandomStream rng(seed, trial);
    Assignment a;
    std::vector<double> assigned;
    for (const std::string& name : order) {
      const bool must_be_finite = constraints.finite.count(name) != 0;
      const bool distinct = constraints.distinct.count(name) != 0;
      auto continuous = [&] { return 10.0 * rng.uniform_open(); };
      const double u = rng.uniform();
      double v;
      if (u < 0.45) {
        v = continuous();
      } else if (u < 0.65 && !assigned.empty()) {
        v = assigned[rng.next_u64() % assigned.size()];
      } else if (u < 0.75) {
        v = 0.0;
      } else if (u < 0.87) {
        v = std::numeric_limits<double>::infinity();
      } else {
        v = static_cast<double>(1 + rng.next_u64() % 3);
      }
      if (must_be_finite && std::isinf(v)) v = continuous();
      if (distinct) {
        auto clashes = [&](double x) {
          if (std::isinf(x)) return false;
          for (const std::string& other : constraints.distinct) {
            if (other != name && a.contains(other) && a.at(other).value() == x) {
              return true;
            }
          }
          return false;
        };
        while (clashes(v)) v = continuous();
      }
      a.set(name, std::isinf(v) ? ExtTime::Infinity() : ExtTime::Finite(v));
      assigned.push_back(v);
    }
    for (const auto& [x, y] : constraints.exclusive) {
      if (a.contains(x) && a.contains(y) && a.at(x).is_finite() &&
          a.at(y).is_finite()) {
        a.set(rng.uniform() < 0.5 ? x : y, ExtTime::Infinity());
      }
    }
    const ExtTime l = eval(e1, a);
    const ExtTime r = eval(e2, a);
    verdict.trials = trial + 1;
    if (!(l == r)) {
      verdict.equivalent = false;
      verdict.counterexample = a;
      verdict.lhs_value = l;
      verdict.rhs_value = r;
      return verdict;
    }
  }
  return verdict;
}

SamplingConstraints constraints_for(const RewriteRule& rule) {
  SamplingConstraints c;
  for (const SideCondition& sc : rule.conditions) {
    if (sc.kind == ConditionKind::kDistinctBasics) {
      c.distinct.insert(sc.first);
      c.distinct.insert(sc.second);
    } else {
      c.exclusive.emplace_back(sc.first, sc.second);
    }
  }
  return c;
}

EquivVerdict check_rule(const RewriteRule& rule, std::size_t trials,
                        std::uint64_t seed) {
  return check_equiv(rule.lhs, rule.rhs, trials, seed, constraints_for(rule));
}

}  // namespace dft
