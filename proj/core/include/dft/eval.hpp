#pragma once

/// @file eval.hpp
/// Time-of-occurrence semantics of failure expressions.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "dft/expr.hpp"
#include "dft/ext_time.hpp"

namespace dft {

/// Failure times of basic events, keyed by name.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<const std::string, ExtTime>> l)
      : times_(l) {}

  void set(const std::string& name, ExtTime t) { times_[name] = t; }
  bool contains(const std::string& name) const {
    return times_.count(name) != 0;
  }
  /// Throws UnknownBasic.
  ExtTime at(const std::string& name) const;
  const std::map<std::string, ExtTime>& times() const { return times_; }

 private:
  std::map<std::string, ExtTime> times_;
};

/// Gate and operator semantics on concrete times.
namespace semantics {

constexpr ExtTime before(ExtTime x, ExtTime y) {
  return x < y ? x : ExtTime::Infinity();
}
constexpr ExtTime simult(ExtTime x, ExtTime y) {
  return x == y ? x : ExtTime::Infinity();
}
constexpr ExtTime incl_before(ExtTime x, ExtTime y) {
  return x <= y ? x : ExtTime::Infinity();
}
constexpr ExtTime pand(ExtTime x, ExtTime y) {
  return x <= y ? y : ExtTime::Infinity();
}
constexpr ExtTime csp(ExtTime main, ExtTime spare) {
  return main < spare ? spare : ExtTime::Infinity();
}
/// Y.(Xd < Y) + Xa.(Y < Xa) + (Y simult Xa) + (Y simult Xd)
constexpr ExtTime wsp(ExtTime y, ExtTime xa, ExtTime xd) {
  ExtTime r = max(y, before(xd, y));
  r = min(r, max(xa, before(y, xa)));
  r = min(r, simult(y, xa));
  return min(r, simult(y, xd));
}
/// X.(Zd < X) + Za.(X < Za) + X.(Y < X)
constexpr ExtTime shared_spare(ExtTime x, ExtTime y, ExtTime za, ExtTime zd) {
  ExtTime r = max(x, before(zd, x));
  r = min(r, max(za, before(x, za)));
  return min(r, max(x, before(y, x)));
}

}  // namespace semantics

/// Failure time of `e` under `a`. Throws UnknownBasic.
ExtTime eval(const Expr& e, const Assignment& a);

/// An expression lowered to a postfix program over indexed basic events,
/// for evaluating the same structure function many times.
class CompiledExpr {
 public:
  /// `basics[i]` is the name bound to slot i. Throws UnknownBasic when `e`
  /// references a name not in `basics`.
  CompiledExpr(const Expr& e, const std::vector<std::string>& basics);

  /// `times[i]` is the time of basics[i]; +inf encodes Infinity.
  double operator()(std::span<const double> times) const;

 private:
  struct Instr {
    Op op;
    unsigned operand;  // slot for kBasic, operand count for And/Or
  };
  std::vector<Instr> code_;
  std::size_t max_stack_ = 0;
};

}  // namespace dft
