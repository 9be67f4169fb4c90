#pragma once

/// @file syntax.hpp
/// Lexer and expression parser shared by model files and rule files.
///
/// Lexical rules: identifiers `[A-Za-z_][A-Za-z0-9_-]*`, decimal numbers,
/// punctuation `( ) , ; = : =>`, and `//` line comments.

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "dft/expr.hpp"

namespace dft {

struct Token {
  enum Kind { kIdent, kNumber, kPunct, kEnd };
  Kind kind = kEnd;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Parser {
 public:
  /// Handles gates whose argument syntax is not a plain expression list.
  /// Called after the gate keyword and the opening parenthesis have been
  /// consumed; must consume through the closing parenthesis. Returns nullopt
  /// to fall back to the generic argument list.
  using GateHook = std::function<std::optional<Expr>(Parser&, Op op)>;

  explicit Parser(std::string_view text, int first_line = 1);

  const Token& peek() const { return tok_; }
  Token next();
  bool at_end() const { return tok_.kind == Token::kEnd; }

  /// Consumes `p` if it is the next punctuation token.
  bool accept(std::string_view p);
  void expect(std::string_view p);
  std::string expect_ident(std::string_view what = "identifier");
  double expect_number();
  /// Consumes `ident = NUMBER`.
  double expect_keyword_value(std::string_view key);

  /// expr := always | never | NAME | GATE '(' expr (',' expr)* ')'
  /// Every identifier that is not a gate keyword becomes a Basic node.
  Expr parse_expr(const GateHook& hook = {});

  [[noreturn]] void fail(std::string_view expected) const;

 private:
  void lex();

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
  Token tok_;
};

/// Gate keyword lookup ("and" -> kAnd); nullopt for plain names.
std::optional<Op> gate_keyword(std::string_view word);

/// Shortest decimal form of `v` that reads back to the same double.
std::string format_number(double v);

/// Parses one expression in the shared grammar.
Expr parse_expr(std::string_view text);

}  // namespace dft
