#include "dft/model.hpp"

#include <algorithm>
#include <cstdio>

#include "dft/error.hpp"
#include "dft/syntax.hpp"

namespace dft {

namespace {

bool is_hot(const SpareInfo& s) {
  return s.kind == SpareKind::kShared && s.dormancy == 1.0;
}

constexpr std::string_view kCasModel = R"(// Cardiac Assist System.
// All spare gates are hot. Failure rates are placeholders (per hour).
top CAS;
CAS = or(PUMPS, MOTORS, CPUS);
PUMPS = and(sharedspare(PA, PB, PS), sharedspare(PB, PA, PS));
MOTORS = or(pand(MS, MA), hsp(MA, MB));
CPUS = hsp(P, B);
CPU_TRIGGER = fdep(or(CS, SS); P, B);
CS : exp(lambda=0.0002);
SS : exp(lambda=0.0001);
MA : exp(lambda=0.001);
MS : exp(lambda=0.0015);
MB : exp(lambda=0.001);
P : exp(lambda=0.0005);
B : exp(lambda=0.0005);
PA : exp(lambda=0.001);
PB : exp(lambda=0.001);
PS : exp(lambda=0.001);
)";

}  // namespace

void DftModel::set_top(std::string name) { top_ = std::move(name); }

void DftModel::claim(const std::string& name, StmtKind kind) {
  if (definitions_.count(name) || fdeps_.count(name) || laws_.count(name)) {
    throw Redefined(name);
  }
  statements_.emplace_back(kind, name);
}

void DftModel::define(const std::string& name, Expr expr) {
  claim(name, StmtKind::kDefine);
  definitions_.emplace(name, std::move(expr));
}

void DftModel::define_fdep(const std::string& name, Expr trigger,
                           std::vector<std::string> dependents) {
  claim(name, StmtKind::kFdep);
  for (const std::string& d : dependents) triggered_by_[d].push_back(name);
  fdeps_.emplace(name, FdepDef{std::move(trigger), std::move(dependents)});
}

void DftModel::declare_basic(const std::string& name, Distribution law) {
  claim(name, StmtKind::kBasic);
  laws_.emplace(name, law);
}

void DftModel::set_law(const std::string& name, Distribution law) {
  auto it = laws_.find(name);
  if (it == laws_.end()) throw Undefined(name);
  it->second = law;
}

void DftModel::set_conditional_law(const std::string& physical,
                                   ConditionalLaw law) {
  if (!spare_by_physical(physical)) throw Undefined(physical);
  custom_laws_.insert_or_assign(physical, std::move(law));
}

const SpareInfo* DftModel::spare_by_physical(
    const std::string& physical) const {
  for (const SpareInfo& s : spares_) {
    if (s.physical == physical) return &s;
  }
  return nullptr;
}

const SpareInfo& DftModel::add_spare(SpareKind kind,
                                     const std::string& physical,
                                     double dormancy, const Expr& activator) {
  if (!(dormancy > 0.0) || dormancy > 1.0) {
    throw NonPositiveParameter("dormancy factor must be in (0, 1]");
  }
  for (SpareInfo& s : spares_) {
    if (s.physical != physical) continue;
    if (kind != SpareKind::kShared || s.kind != SpareKind::kShared ||
        s.dormancy != dormancy) {
      throw Redefined(physical);
    }
    if (std::find(s.activators.begin(), s.activators.end(), activator) ==
        s.activators.end()) {
      s.activators.push_back(activator);
    }
    return s;
  }
  SpareInfo s{kind, physical, physical, {}, dormancy, {activator}};
  if (kind == SpareKind::kCold) {
    s.dormancy = 0.0;
  } else if (kind == SpareKind::kShared && dormancy == 1.0) {
    s.dormant = physical;
  } else {
    s.active = physical + "_a";
    s.dormant = physical + "_d";
  }
  spares_.push_back(std::move(s));
  return spares_.back();
}

std::vector<std::string> DftModel::variables() const {
  std::vector<std::string> out;
  for (const auto& [kind, name] : statements_) {
    if (kind != StmtKind::kBasic) continue;
    const SpareInfo* s = spare_by_physical(name);
    if (s && s->active != s->physical) {
      out.push_back(s->active);
      out.push_back(s->dormant);
    } else {
      out.push_back(name);
    }
  }
  return out;
}

const SpareInfo* DftModel::spare_of(const std::string& var) const {
  for (const SpareInfo& s : spares_) {
    if (is_hot(s)) continue;
    if (s.active == var || s.dormant == var) return &s;
  }
  return nullptr;
}

EventRole DftModel::role(const std::string& var) const {
  const SpareInfo* s = spare_of(var);
  if (!s) return EventRole::kPlain;
  return s->active == var ? EventRole::kConditional : EventRole::kDormant;
}

Distribution DftModel::law(const std::string& var) const {
  const SpareInfo* s = spare_of(var);
  const std::string& key = s ? s->physical : var;
  auto it = laws_.find(key);
  if (it == laws_.end()) throw MissingDistribution(key);
  if (s && s->dormant == var) return dormant_variant(it->second, s->dormancy);
  return it->second;
}

ConditionalLaw DftModel::conditional_law(const std::string& var) const {
  const SpareInfo* s = spare_of(var);
  if (!s || s->active != var) throw MissingConditionalLaw(var);
  if (auto it = custom_laws_.find(s->physical); it != custom_laws_.end()) {
    return it->second;
  }
  const Distribution active = law(var);
  if (!active.memoryless()) throw MissingConditionalLaw(var);
  return ConditionalLaw::Memoryless(active);
}

Expr DftModel::resolve_name(const std::string& name, bool desugar,
                            std::vector<std::string>& path,
                            std::map<std::string, Expr>& memo) const {
  if (auto it = memo.find(name); it != memo.end()) return it->second;
  if (std::find(path.begin(), path.end(), name) != path.end()) {
    std::string cycle;
    auto start = std::find(path.begin(), path.end(), name);
    for (auto it = start; it != path.end(); ++it) cycle += *it + " -> ";
    throw CycleDetected(cycle + name);
  }
  path.push_back(name);
  Expr out;
  if (auto d = definitions_.find(name); d != definitions_.end()) {
    out = resolve_expr(d->second, desugar, path, memo);
  } else if (auto f = fdeps_.find(name); f != fdeps_.end()) {
    out = resolve_expr(f->second.trigger, desugar, path, memo);
  } else {
    const SpareInfo* s = spare_by_physical(name);
    const bool state = spare_of(name) != nullptr;
    if (!state && !laws_.count(name)) throw Undefined(name);
    if (s && s->active != name && !is_hot(*s)) {
      throw Error("spare '" + name + "' is only usable through its gate");
    }
    out = Basic(name);
    if (auto t = triggered_by_.find(name); t != triggered_by_.end()) {
      for (const std::string& f : t->second) {
        Expr trigger = resolve_name(f, desugar, path, memo);
        out = desugar ? Or(out, trigger) : Fdep(out, trigger);
      }
    }
  }
  path.pop_back();
  memo.emplace(name, out);
  return out;
}

Expr DftModel::resolve_expr(const Expr& e, bool desugar,
                            std::vector<std::string>& path,
                            std::map<std::string, Expr>& memo) const {
  if (e.is_basic()) return resolve_name(e.name(), desugar, path, memo);
  if (is_leaf(e.op())) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  for (const Expr& a : e.args()) {
    args.push_back(resolve_expr(a, desugar, path, memo));
  }
  if (desugar && e.op() == Op::kHsp) return And(std::move(args));
  if (desugar && e.op() == Op::kFdep) return Or(std::move(args));
  return Expr::Make(e.op(), std::move(args));
}

Expr DftModel::resolve(const Expr& e, bool desugar) const {
  std::vector<std::string> path;
  std::map<std::string, Expr> memo;
  return resolve_expr(e, desugar, path, memo);
}

Expr DftModel::top_expr(bool desugar) const {
  if (top_.empty()) throw Undefined("top");
  return resolve(Basic(top_), desugar);
}

void DftModel::validate() const {
  top_expr();
  for (const auto& [kind, name] : statements_) {
    if (kind != StmtKind::kBasic) resolve(Basic(name));
  }
  for (const auto& [dep, defs] : triggered_by_) {
    if (!laws_.count(dep) && !spare_of(dep)) throw Undefined(dep);
  }
  for (const SpareInfo& s : spares_) {
    if (!laws_.count(s.physical)) throw Undefined(s.physical);
    for (const std::string* var : {&s.active, &s.dormant}) {
      if (*var == s.physical || var->empty()) continue;
      if (definitions_.count(*var) || fdeps_.count(*var) ||
          laws_.count(*var)) {
        throw Redefined(*var);
      }
    }
    for (const Expr& a : s.activators) resolve(a);
  }
}

NameOrder DftModel::name_order() const { return NameOrder(variables()); }

RewriteContext DftModel::rewrite_context() const {
  RewriteContext ctx;
  ctx.order = name_order();
  for (const std::string& v : variables()) ctx.continuous.insert(v);
  for (const SpareInfo& s : spares_) {
    if (s.kind != SpareKind::kCold && !is_hot(s)) {
      ctx.spare_pairs.emplace(s.active, s.dormant);
    }
  }
  return ctx;
}

SamplingConstraints DftModel::sampling_constraints() const {
  SamplingConstraints c;
  for (const std::string& v : variables()) c.distinct.insert(v);
  for (const SpareInfo& s : spares_) {
    if (s.kind != SpareKind::kCold && !is_hot(s)) {
      c.exclusive.emplace_back(s.active, s.dormant);
    }
  }
  return c;
}

std::string to_source(const Expr& e, const DftModel& m) {
  auto spare_suffix = [&](const SpareInfo* s) {
    std::string out = s->physical;
    if (s->kind != SpareKind::kCold && s->dormancy != 1.0) {
      out += ", dormancy=" + format_number(s->dormancy);
    }
    return out;
  };
  auto find_active = [&](const Expr& var) -> const SpareInfo* {
    if (!var.is_basic()) return nullptr;
    for (const SpareInfo& s : m.spares()) {
      if (s.active == var.name()) return &s;
    }
    return nullptr;
  };
  switch (e.op()) {
    case Op::kAlways:
      return "always";
    case Op::kNever:
      return "never";
    case Op::kBasic:
      return e.name();
    case Op::kCsp:
    case Op::kWsp:
      if (const SpareInfo* s = find_active(e.arg(1))) {
        return std::string(keyword(e.op())) + "(" + to_source(e.arg(0), m) +
               ", " + spare_suffix(s) + ")";
      }
      break;
    case Op::kSharedSpare:
      if (const SpareInfo* s = find_active(e.arg(2))) {
        return "sharedspare(" + to_source(e.arg(0), m) + ", " +
               to_source(e.arg(1), m) + ", " + spare_suffix(s) + ")";
      }
      break;
    default:
      break;
  }
  std::string out(keyword(e.op()));
  out += '(';
  for (std::size_t i = 0; i < e.args().size(); ++i) {
    if (i) out += ", ";
    out += to_source(e.arg(i), m);
  }
  return out + ')';
}

std::string to_model_text(const DftModel& m) {
  std::string out = "top " + m.top_ + ";\n";
  for (const auto& [kind, name] : m.statements_) {
    switch (kind) {
      case DftModel::StmtKind::kDefine:
        out += name + " = " + to_source(m.definitions_.at(name), m) + ";\n";
        break;
      case DftModel::StmtKind::kFdep: {
        const auto& f = m.fdeps_.at(name);
        out += name + " = fdep(" + to_source(f.trigger, m) + ";";
        for (std::size_t i = 0; i < f.dependents.size(); ++i) {
          out += (i ? ", " : " ") + f.dependents[i];
        }
        out += ");\n";
        break;
      }
      case DftModel::StmtKind::kBasic:
        out += name + " : " + m.laws_.at(name).to_string() + ";\n";
        break;
    }
  }
  return out;
}

std::string model_digest(const DftModel& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_model_text(m)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

DftModel parse_model(std::string_view text) {
  DftModel m;
  Parser p(text);
  bool at_root = false;
  struct PendingFdep {
    Expr trigger;
    std::vector<std::string> dependents;
  };
  std::optional<PendingFdep> pending;

  auto dormancy_arg = [](Parser& q) {
    const Token at = q.peek();
    const double a = q.expect_keyword_value("dormancy");
    if (!(a > 0.0) || a > 1.0) {
      throw SyntaxError(at.line, at.col, "dormancy in (0, 1]");
    }
    return a;
  };

  Parser::GateHook hook = [&](Parser& q, Op op) -> std::optional<Expr> {
    const bool root = at_root;
    at_root = false;
    switch (op) {
      case Op::kFdep: {
        Expr first = q.parse_expr(hook);
        if (q.accept(";")) {
          if (!root) q.fail("',' (trigger lists only at definition level)");
          std::vector<std::string> deps{q.expect_ident("dependent")};
          while (q.accept(",")) deps.push_back(q.expect_ident("dependent"));
          q.expect(")");
          pending = PendingFdep{first, std::move(deps)};
          return first;
        }
        q.expect(",");
        Expr trigger = q.parse_expr(hook);
        q.expect(")");
        return Fdep(first, trigger);
      }
      case Op::kWsp:
      case Op::kCsp: {
        Expr main = q.parse_expr(hook);
        q.expect(",");
        const std::string spare = q.expect_ident("spare name");
        double alpha = 1.0;
        if (op == Op::kWsp && q.accept(",")) alpha = dormancy_arg(q);
        q.expect(")");
        const SpareInfo& s = m.add_spare(
            op == Op::kWsp ? SpareKind::kWarm : SpareKind::kCold, spare,
            alpha, main);
        if (op == Op::kCsp) return Csp(main, Basic(s.active));
        return Wsp(main, Basic(s.active), Basic(s.dormant));
      }
      case Op::kSharedSpare: {
        Expr main = q.parse_expr(hook);
        q.expect(",");
        Expr other = q.parse_expr(hook);
        q.expect(",");
        const std::string spare = q.expect_ident("spare name");
        double alpha = 1.0;
        if (q.accept(",")) alpha = dormancy_arg(q);
        q.expect(")");
        const SpareInfo& s =
            m.add_spare(SpareKind::kShared, spare, alpha, main);
        return SharedSpare(main, other, Basic(s.active), Basic(s.dormant));
      }
      default:
        return std::nullopt;
    }
  };

  auto parse_law = [&]() {
    const Token fam = p.peek();
    const std::string family = p.expect_ident("distribution");
    p.expect("(");
    const Token at = p.peek();
    try {
      if (family == "exp") {
        const double rate = p.expect_keyword_value("lambda");
        p.expect(")");
        return Distribution::Exponential(rate);
      }
      if (family == "weibull") {
        const double shape = p.expect_keyword_value("shape");
        p.expect(",");
        const double scale = p.expect_keyword_value("scale");
        p.expect(")");
        return Distribution::Weibull(shape, scale);
      }
    } catch (const NonPositiveParameter&) {
      throw SyntaxError(at.line, at.col, "positive parameters");
    }
    throw SyntaxError(fam.line, fam.col, "'exp' or 'weibull'");
  };

  bool have_top = false;
  while (!p.at_end()) {
    const Token head = p.peek();
    const std::string name = p.expect_ident("statement");
    if (name == "top" && p.peek().kind == Token::kIdent) {
      if (have_top) throw Redefined("top");
      m.set_top(p.expect_ident("top event name"));
      have_top = true;
      p.expect(";");
    } else if (p.accept("=")) {
      at_root = true;
      pending.reset();
      Expr e = p.parse_expr(hook);
      at_root = false;
      p.expect(";");
      if (pending) {
        m.define_fdep(name, pending->trigger, std::move(pending->dependents));
      } else {
        m.define(name, e);
      }
    } else if (p.accept(":")) {
      Distribution law = parse_law();
      p.expect(";");
      m.declare_basic(name, law);
    } else {
      p.fail("'=' or ':'");
    }
  }
  if (!have_top) p.fail("'top' statement");
  m.validate();
  return m;
}

std::string_view cas_model_text() { return kCasModel; }

DftModel cas_model() { return parse_model(kCasModel); }

}  // namespace dft
