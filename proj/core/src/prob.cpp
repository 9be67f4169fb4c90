#include "dft/prob.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

#include "dft/error.hpp"
#include "dft/rewrite.hpp"

namespace dft {

namespace {

constexpr int kMaxNesting = 8;
constexpr double kRangeSlack = 1e-12;

QuadResult add(QuadResult a, QuadResult b, int sign = 1) {
  return {a.value + sign * b.value, a.error + b.error};
}

QuadResult mul(QuadResult a, QuadResult b) {
  return {a.value * b.value, std::abs(a.value) * b.error +
                                 std::abs(b.value) * a.error +
                                 a.error * b.error};
}

double horizon(const Distribution& d, double t, const QuadratureConfig& cfg) {
  return std::min(t, d.tail_quantile(cfg.tail_eps));
}

bool is_before_like(const Expr& e) {
  return e.op() == Op::kBefore || e.op() == Op::kInclBefore;
}

class Analyzer {
 public:
  Analyzer(const DftModel& m, double t, const EvalOptions& opts)
      : m_(m), t_(t), opts_(opts), ctx_(m.rewrite_context()) {
    for (const SpareInfo& s : m.spares()) {
      std::vector<Expr> acts;
      for (const Expr& a : s.activators) acts.push_back(m.resolve(a));
      activators_.emplace(s.active, std::move(acts));
    }
  }

  Expr simp(const Expr& e) const { return simplify(e, default_rules(), ctx_); }

  QuadResult prob(const Expr& e, int depth) {
    if (depth > kMaxNesting) throw UnmatchedPattern(to_string(e));
    switch (e.op()) {
      case Op::kNever:
        return {};
      case Op::kAlways:
        return {1.0, 0.0};
      case Op::kOr:
        return union_prob(e.args(), depth + 1);
      case Op::kAnd:
        return conj(e.args(), depth);
      default:
        return conj({e}, depth);
    }
  }

  /// Inclusion-exclusion over `terms`, intersections exact.
  QuadResult union_prob(const std::vector<Expr>& terms, int depth) {
    QuadResult total;
    for (const SignedTerm& st : pie_expand(terms.size(), opts_.max_terms)) {
      std::vector<Expr> subset;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        if (st.mask >> i & 1) subset.push_back(terms[i]);
      }
      total = add(total, prob(simp(And(std::move(subset))), depth), st.sign);
    }
    return total;
  }

  QuadResult conj(const std::vector<Expr>& factors, int depth) {
    std::vector<Expr> live;
    for (const Expr& f : factors) {
      if (f.op() == Op::kNever) return {};
      if (f.op() != Op::kAlways) live.push_back(f);
    }
    if (live.empty()) return {1.0, 0.0};
    if (exclusive_states(live)) return {};

    // Union-find over factors whose supports overlap.
    const std::size_t n = live.size();
    std::vector<std::set<std::string>> support(n);
    for (std::size_t i = 0; i < n; ++i) support[i] = closure(live[i]);
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
      while (parent[i] != i) i = parent[i] = parent[parent[i]];
      return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool overlap = std::any_of(
            support[i].begin(), support[i].end(),
            [&](const std::string& v) { return support[j].count(v) != 0; });
        if (overlap) parent[find(j)] = find(i);
      }
    }
    std::map<std::size_t, std::vector<Expr>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(live[i]);

    QuadResult result{1.0, 0.0};
    for (const auto& [root, group] : groups) {
      result = mul(result, atom(group, depth));
    }
    return result;
  }

 private:
  /// Names whose joint law a factor depends on.
  std::set<std::string> closure(const Expr& e) const {
    std::set<std::string> out;
    std::vector<std::string> todo;
    for (const std::string& v : basics_of(e)) todo.push_back(v);
    while (!todo.empty()) {
      const std::string v = todo.back();
      todo.pop_back();
      if (!out.insert(v).second) continue;
      const SpareInfo* s = m_.spare_of(v);
      if (!s || s->active != v) continue;
      if (!s->dormant.empty()) todo.push_back(s->dormant);
      for (const Expr& a : activators_.at(v)) {
        for (const std::string& w : basics_of(a)) todo.push_back(w);
      }
    }
    return out;
  }

  /// Variables that must be finite for the conjunction to occur.
  static void required(const Expr& e, std::set<std::string>* out) {
    switch (e.op()) {
      case Op::kBasic:
        out->insert(e.name());
        break;
      case Op::kAnd:
      case Op::kSimult:
      case Op::kPand:
      case Op::kCsp:
        for (const Expr& a : e.args()) required(a, out);
        break;
      case Op::kBefore:
      case Op::kInclBefore:
        required(e.arg(0), out);
        break;
      default:
        break;
    }
  }

  bool exclusive_states(const std::vector<Expr>& factors) const {
    std::set<std::string> req;
    for (const Expr& f : factors) required(f, &req);
    for (const std::string& v : req) {
      const SpareInfo* s = m_.spare_of(v);
      if (s && s->active == v && !s->dormant.empty() &&
          req.count(s->dormant)) {
        return true;
      }
    }
    return false;
  }

  bool independent(const Expr& e) const {
    return e.is_basic() && m_.role(e.name()) != EventRole::kConditional;
  }

  /// The plain main activating conditional variable `var`, if that is a
  /// single independent basic event.
  std::optional<std::string> single_activator(const std::string& var) const {
    const auto& acts = activators_.at(var);
    if (acts.size() != 1 || !independent(acts[0])) return std::nullopt;
    return acts[0].name();
  }

  QuadResult spare_atom(const std::string& main, const std::string& var,
                        bool with_dormant_scenario) const {
    const SpareInfo* s = m_.spare_of(var);
    const ConditionalLaw law = m_.conditional_law(var);
    std::optional<Distribution> dormant;
    if (!s->dormant.empty()) dormant = m_.law(s->dormant);
    if (with_dormant_scenario && dormant) {
      return wsp_prob(m_.law(main), law, *dormant, t_, opts_.quad);
    }
    return spare_prob(m_.law(main), law, dormant ? &*dormant : nullptr, t_,
                      opts_.quad);
  }

  bool is_conditional(const Expr& e) const {
    return e.is_basic() && m_.role(e.name()) == EventRole::kConditional;
  }

  QuadResult atom(const std::vector<Expr>& group, int depth) {
    if (group.size() == 1) {
      const Expr& f = group[0];
      if (independent(f)) {
        return {m_.law(f.name()).cdf(t_), 0.0};
      }
      if (is_conditional(f)) {
        if (auto main = single_activator(f.name())) {
          return spare_atom(*main, f.name(), false);
        }
      }
      if (is_before_like(f) && independent(f.arg(0)) &&
          independent(f.arg(1)) && !(f.arg(0) == f.arg(1))) {
        return before_prob(m_.law(f.arg(0).name()), m_.law(f.arg(1).name()),
                           t_, opts_.quad);
      }
      if (f.op() == Op::kPand && independent(f.arg(0)) &&
          independent(f.arg(1)) && !(f.arg(0) == f.arg(1))) {
        return after_prob(m_.law(f.arg(0).name()), m_.law(f.arg(1).name()),
                          t_, opts_.quad);
      }
      if (f.op() == Op::kCsp && independent(f.arg(0)) &&
          is_conditional(f.arg(1)) &&
          single_activator(f.arg(1).name()) == f.arg(0).name()) {
        return spare_atom(f.arg(0).name(), f.arg(1).name(), false);
      }
      if (f.op() == Op::kWsp && independent(f.arg(0)) &&
          is_conditional(f.arg(1)) &&
          single_activator(f.arg(1).name()) == f.arg(0).name() &&
          m_.spare_of(f.arg(1).name())->dormant == f.arg(2).name()) {
        return spare_atom(f.arg(0).name(), f.arg(1).name(), true);
      }
      if (f.op() == Op::kOr) return union_prob(f.args(), depth + 1);
    }
    if (std::all_of(group.begin(), group.end(),
                    [&](const Expr& f) { return independent(f); })) {
      QuadResult r{1.0, 0.0};
      for (const Expr& f : group) r = mul(r, {m_.law(f.name()).cdf(t_), 0.0});
      return r;
    }
    if (group.size() == 2) {
      for (int k = 0; k < 2; ++k) {
        const Expr& y = group[k];
        const Expr& b = group[1 - k];
        if (!y.is_basic() || !is_before_like(b) || !(b.arg(1) == y) ||
            !independent(b.arg(0)) || b.arg(0) == y) {
          continue;
        }
        if (independent(y)) {
          return after_prob(m_.law(b.arg(0).name()), m_.law(y.name()), t_,
                            opts_.quad);
        }
        if (single_activator(y.name()) == b.arg(0).name()) {
          return spare_atom(b.arg(0).name(), y.name(), false);
        }
      }
    }
    for (std::size_t i = 0; i < group.size(); ++i) {
      if (group[i].op() != Op::kOr) continue;
      std::vector<Expr> rest = group;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      std::vector<Expr> terms;
      for (const Expr& option : group[i].args()) {
        std::vector<Expr> conj = rest;
        conj.push_back(option);
        terms.push_back(simp(And(std::move(conj))));
      }
      return union_prob(terms, depth + 1);
    }
    throw UnmatchedPattern(to_string(group.size() == 1 ? group[0]
                                                       : And(group)));
  }

  const DftModel& m_;
  double t_;
  const EvalOptions& opts_;
  RewriteContext ctx_;
  std::map<std::string, std::vector<Expr>> activators_;
};

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("time must be finite and >= 0");
  }
}

}  // namespace

std::string to_string(IntersectionMode mode) {
  return mode == IntersectionMode::kExact ? "exact" : "paper";
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kAnalytic:
      return "analytic";
    case Method::kMonteCarlo:
      return "mc";
    case Method::kBoth:
      return "both";
  }
  return "";
}

std::size_t default_max_terms() {
  if (const char* env = std::getenv("DFT_MAX_PIE_TERMS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 20;
}

QuadResult after_prob(const Distribution& x, const Distribution& y, double t,
                      const QuadratureConfig& cfg) {
  check_time(t);
  return integrate([&](double s) { return y.pdf(s) * x.cdf(s); }, 0.0,
                   horizon(y, t, cfg), cfg.tol, cfg.max_depth);
}

QuadResult before_prob(const Distribution& x, const Distribution& y, double t,
                       const QuadratureConfig& cfg) {
  check_time(t);
  return integrate([&](double s) { return x.pdf(s) * y.survival(s); }, 0.0,
                   horizon(x, t, cfg), cfg.tol, cfg.max_depth);
}

QuadResult spare_prob(const Distribution& main, const ConditionalLaw& spare,
                      const Distribution* dormant, double t,
                      const QuadratureConfig& cfg) {
  check_time(t);
  const double inner_tol = cfg.tol / 10.0;
  auto outer = [&](double v) {
    const double f = main.pdf(v);
    if (f == 0.0) return 0.0;
    const double survive = dormant ? dormant->survival(v) : 1.0;
    // The density jumps at u = v; take the right limit there.
    const double just_after = std::nextafter(v, t);
    const double inner =
        integrate([&](double u) { return spare.pdf(v, std::max(u, just_after)); },
                  v, t, inner_tol, cfg.max_depth)
            .value;
    return f * survive * inner;
  };
  QuadResult r = integrate(outer, 0.0, horizon(main, t, cfg),
                           cfg.tol - inner_tol, cfg.max_depth);
  r.error += inner_tol;
  return r;
}

QuadResult csp_prob(const Distribution& main, const ConditionalLaw& spare,
                    double t, const QuadratureConfig& cfg) {
  return spare_prob(main, spare, nullptr, t, cfg);
}

QuadResult wsp_prob(const Distribution& main, const ConditionalLaw& spare,
                    const Distribution& dormant, double t,
                    const QuadratureConfig& cfg) {
  return add(spare_prob(main, spare, &dormant, t, cfg),
             after_prob(dormant, main, t, cfg));
}

std::vector<SignedTerm> pie_expand(std::size_t n, std::size_t max_terms) {
  if (n == 0) throw std::invalid_argument("empty union");
  if (n > max_terms || n >= 64) throw TermExplosion(n, max_terms);
  std::vector<SignedTerm> out;
  const std::uint64_t count = (std::uint64_t{1} << n) - 1;
  out.reserve(count);
  for (std::uint64_t mask = 1; mask <= count; ++mask) {
    out.push_back({mask, std::popcount(mask) % 2 == 1 ? 1 : -1});
  }
  return out;
}

QuadResult event_prob(const Expr& e, const DftModel& m, double t,
                      const EvalOptions& opts) {
  check_time(t);
  Analyzer an(m, t, opts);
  return an.prob(an.simp(e), 0);
}

QuadResult intersect_prob(const std::vector<Expr>& terms, const DftModel& m,
                          double t, const EvalOptions& opts) {
  check_time(t);
  Analyzer an(m, t, opts);
  if (opts.mode == IntersectionMode::kExact) {
    return an.prob(an.simp(And(terms)), 0);
  }
  QuadResult r{1.0, 0.0};
  for (const Expr& term : terms) r = mul(r, an.prob(an.simp(term), 0));
  return r;
}

PieBreakdown pie_breakdown(const DftModel& m, double t,
                           const EvalOptions& opts) {
  check_time(t);
  PieBreakdown out;
  const Expr top = Analyzer(m, t, opts).simp(m.top_expr());
  out.terms = top.op() == Op::kOr ? top.args() : std::vector<Expr>{top};
  out.subsets = pie_expand(out.terms.size(), opts.max_terms);
  out.values.resize(out.subsets.size());

  std::vector<QuadResult> single(out.terms.size());
  if (opts.mode == IntersectionMode::kPaper) {
    Analyzer an(m, t, opts);
    for (std::size_t i = 0; i < out.terms.size(); ++i) {
      single[i] = an.prob(out.terms[i], 0);
    }
  }

  const std::size_t count = out.subsets.size();
  const unsigned workers = std::max(1u, opts.workers);
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](unsigned w) {
    Analyzer an(m, t, opts);
    for (std::size_t k = w; k < count; k += workers) {
      try {
        const std::uint64_t mask = out.subsets[k].mask;
        if (opts.mode == IntersectionMode::kPaper) {
          QuadResult r{1.0, 0.0};
          for (std::size_t i = 0; i < out.terms.size(); ++i) {
            if (mask >> i & 1) r = mul(r, single[i]);
          }
          out.values[k] = r;
        } else {
          std::vector<Expr> subset;
          for (std::size_t i = 0; i < out.terms.size(); ++i) {
            if (mask >> i & 1) subset.push_back(out.terms[i]);
          }
          out.values[k] = an.prob(an.simp(And(std::move(subset))), 0);
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

ProbResult dft_event_prob(const DftModel& m, double t,
                          const EvalOptions& opts) {
  const PieBreakdown b = pie_breakdown(m, t, opts);
  ProbResult r;
  r.mode = opts.mode;
  r.terms = b.subsets.size();
  for (std::size_t k = 0; k < b.subsets.size(); ++k) {
    r.value += b.subsets[k].sign * b.values[k].value;
    r.quad_error += b.values[k].error;
  }
  const double slack = r.quad_error + kRangeSlack;
  if (r.value < -slack || r.value > 1.0 + slack) {
    throw std::logic_error("probability " + std::to_string(r.value) +
                           " outside [0, 1]");
  }
  return r;
}

}  // namespace dft
