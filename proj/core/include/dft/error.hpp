#pragma once

/// @file error.hpp
/// Exception types raised by the analysis engine.
///
/// Everything derives from dft::Error so front ends can catch one type and
/// map the concrete class to an exit status.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dft {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An assignment lacks a time for a basic event referenced by an expression.
class UnknownBasic : public Error {
 public:
  explicit UnknownBasic(std::string name)
      : Error("unknown basic event '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class NonPositiveParameter : public Error {
 public:
  using Error::Error;
};

class UnsupportedFamily : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  explicit QuadratureFailure(int depth)
      : Error("quadrature tolerance not met at subdivision depth " +
              std::to_string(depth)),
        depth_(depth) {}
  int depth() const { return depth_; }

 private:
  int depth_;
};

/// Parse errors carry a 1-based line and column.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int col, std::string expected)
      : Error("syntax error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": expected " + expected),
        line_(line),
        col_(col),
        expected_(std::move(expected)) {}
  int line() const { return line_; }
  int col() const { return col_; }
  const std::string& expected() const { return expected_; }

 private:
  int line_;
  int col_;
  std::string expected_;
};

class CycleDetected : public Error {
 public:
  explicit CycleDetected(std::string path)
      : Error("cyclic definition: " + path), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class Undefined : public Error {
 public:
  explicit Undefined(std::string name)
      : Error("undefined name '" + name + "'"), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class Redefined : public Error {
 public:
  explicit Redefined(std::string name)
      : Error("name '" + name + "' is defined more than once"),
        name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// The analytic evaluator cannot factor an expression into known atoms.
class UnmatchedPattern : public Error {
 public:
  explicit UnmatchedPattern(std::string subexpr)
      : Error("no analytic pattern for " + subexpr),
        subexpr_(std::move(subexpr)) {}
  const std::string& subexpr() const { return subexpr_; }

 private:
  std::string subexpr_;
};

class TermExplosion : public Error {
 public:
  TermExplosion(std::size_t terms, std::size_t limit)
      : Error("union of " + std::to_string(terms) +
              " terms exceeds the inclusion-exclusion limit of " +
              std::to_string(limit)),
        terms_(terms),
        limit_(limit) {}
  std::size_t terms() const { return terms_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t terms_;
  std::size_t limit_;
};

class MissingDistribution : public Error {
 public:
  explicit MissingDistribution(const std::string& name)
      : Error("basic event '" + name + "' has no distribution") {}
};

class MissingConditionalLaw : public Error {
 public:
  explicit MissingConditionalLaw(const std::string& name)
      : Error("spare '" + name + "' has no activation law") {}
};

}  // namespace dft
