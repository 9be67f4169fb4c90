#include "dft/eval.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "dft/error.hpp"

namespace dft {

ExtTime Assignment::at(const std::string& name) const {
  auto it = times_.find(name);
  if (it == times_.end()) throw UnknownBasic(name);
  return it->second;
}

ExtTime eval(const Expr& e, const Assignment& a) {
  namespace s = semantics;
  auto arg = [&](std::size_t i) { return eval(e.arg(i), a); };
  switch (e.op()) {
    case Op::kAlways: return ExtTime::Finite(0.0);
    case Op::kNever: return ExtTime::Infinity();
    case Op::kBasic: return a.at(e.name());
    case Op::kAnd: {
      ExtTime r = ExtTime::Finite(0.0);
      for (const Expr& x : e.args()) r = max(r, eval(x, a));
      return r;
    }
    case Op::kOr: {
      ExtTime r = ExtTime::Infinity();
      for (const Expr& x : e.args()) r = min(r, eval(x, a));
      return r;
    }
    case Op::kFdep: return min(arg(0), arg(1));
    case Op::kHsp: return max(arg(0), arg(1));
    case Op::kPand: return s::pand(arg(0), arg(1));
    case Op::kBefore: return s::before(arg(0), arg(1));
    case Op::kSimult: return s::simult(arg(0), arg(1));
    case Op::kInclBefore: return s::incl_before(arg(0), arg(1));
    case Op::kCsp: return s::csp(arg(0), arg(1));
    case Op::kWsp: return s::wsp(arg(0), arg(1), arg(2));
    case Op::kSharedSpare:
      return s::shared_spare(arg(0), arg(1), arg(2), arg(3));
  }
  return ExtTime::Infinity();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double before(double x, double y) { return x < y ? x : kInf; }

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e,
                           const std::vector<std::string>& basics) {
  std::unordered_map<std::string, unsigned> slot;
  for (unsigned i = 0; i < basics.size(); ++i) slot.emplace(basics[i], i);
  std::size_t depth = 0;
  auto emit = [&](auto&& self, const Expr& x) -> void {
    for (const Expr& a : x.args()) self(self, a);
    unsigned operand = 0;
    if (x.is_basic()) {
      auto it = slot.find(x.name());
      if (it == slot.end()) throw UnknownBasic(x.name());
      operand = it->second;
    } else {
      operand = static_cast<unsigned>(x.args().size());
    }
    code_.push_back({x.op(), operand});
    depth = depth + 1 - x.args().size();
    max_stack_ = std::max(max_stack_, depth + x.args().size());
  };
  emit(emit, e);
}

double CompiledExpr::operator()(std::span<const double> times) const {
  // Structure functions are shallow; a fixed buffer avoids allocation in
  // sampling loops.
  constexpr std::size_t kSmall = 64;
  double small[kSmall] = {};
  std::vector<double> big;
  double* st = small;
  if (max_stack_ > kSmall) {
    big.resize(max_stack_);
    st = big.data();
  }
  std::size_t sp = 0;
  for (const Instr& in : code_) {
    switch (in.op) {
      case Op::kAlways: st[sp++] = 0.0; break;
      case Op::kNever: st[sp++] = kInf; break;
      case Op::kBasic: st[sp++] = times[in.operand]; break;
      case Op::kAnd: {
        double r = st[sp - in.operand];
        for (std::size_t i = sp - in.operand + 1; i < sp; ++i) {
          r = std::max(r, st[i]);
        }
        sp -= in.operand;
        st[sp++] = r;
        break;
      }
      case Op::kOr: {
        double r = st[sp - in.operand];
        for (std::size_t i = sp - in.operand + 1; i < sp; ++i) {
          r = std::min(r, st[i]);
        }
        sp -= in.operand;
        st[sp++] = r;
        break;
      }
      default: {
        double* a = st + sp - in.operand;
        double r = kInf;
        switch (in.op) {
          case Op::kFdep: r = std::min(a[0], a[1]); break;
          case Op::kHsp: r = std::max(a[0], a[1]); break;
          case Op::kPand: r = a[0] <= a[1] ? a[1] : kInf; break;
          case Op::kBefore: r = before(a[0], a[1]); break;
          case Op::kSimult: r = a[0] == a[1] ? a[0] : kInf; break;
          case Op::kInclBefore: r = a[0] <= a[1] ? a[0] : kInf; break;
          case Op::kCsp: r = a[0] < a[1] ? a[1] : kInf; break;
          case Op::kWsp: {
            const double y = a[0], xa = a[1], xd = a[2];
            r = std::max(y, before(xd, y));
            r = std::min(r, std::max(xa, before(y, xa)));
            if (y == xa || y == xd) r = std::min(r, y);
            break;
          }
          case Op::kSharedSpare: {
            const double x = a[0], y = a[1], za = a[2], zd = a[3];
            r = std::max(x, before(zd, x));
            r = std::min(r, std::max(za, before(x, za)));
            r = std::min(r, std::max(x, before(y, x)));
            break;
          }
          default: break;
        }
        sp -= in.operand;
        st[sp++] = r;
      }
    }
  }
  return st[0];
}

}  // namespace dft
