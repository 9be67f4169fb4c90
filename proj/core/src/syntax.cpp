#include "dft/syntax.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

#include "dft/error.hpp"

namespace dft {

std::optional<Op> gate_keyword(std::string_view word) {
  static constexpr std::pair<std::string_view, Op> kGates[] = {
      {"and", Op::kAnd},       {"or", Op::kOr},
      {"pand", Op::kPand},     {"fdep", Op::kFdep},
      {"before", Op::kBefore}, {"ibefore", Op::kInclBefore},
      {"simult", Op::kSimult}, {"hsp", Op::kHsp},
      {"csp", Op::kCsp},       {"wsp", Op::kWsp},
      {"sharedspare", Op::kSharedSpare},
  };
  for (const auto& [kw, op] : kGates) {
    if (kw == word) return op;
  }
  return std::nullopt;
}

Parser::Parser(std::string_view text, int first_line)
    : src_(text), line_(first_line) {
  lex();
}

void Parser::fail(std::string_view expected) const {
  throw SyntaxError(tok_.line, tok_.col, std::string(expected));
}

void Parser::lex() {
  auto advance = [&] {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  };
  for (;;) {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      advance();
    }
    if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
      while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      continue;
    }
    break;
  }
  tok_ = Token{};
  tok_.line = line_;
  tok_.col = col_;
  if (pos_ >= src_.size()) return;
  const char c = src_[pos_];
  const std::size_t start = pos_;
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_' || src_[pos_] == '-')) {
      advance();
    }
    tok_.kind = Token::kIdent;
    tok_.text = std::string(src_.substr(start, pos_ - start));
    return;
  }
  if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
      ((c == '+' || c == '-') && pos_ + 1 < src_.size() &&
       (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) ||
        src_[pos_ + 1] == '.'))) {
    std::string buf(src_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    const std::size_t len = static_cast<std::size_t>(end - buf.c_str());
    if (len == 0) throw SyntaxError(line_, col_, "number");
    for (std::size_t i = 0; i < len; ++i) advance();
    tok_.kind = Token::kNumber;
    tok_.number = v;
    tok_.text = buf.substr(0, len);
    return;
  }
  if (c == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
    advance();
    advance();
    tok_.kind = Token::kPunct;
    tok_.text = "=>";
    return;
  }
  if (std::string_view("(),;=:").find(c) != std::string_view::npos) {
    advance();
    tok_.kind = Token::kPunct;
    tok_.text = std::string(1, c);
    return;
  }
  throw SyntaxError(line_, col_, "token");
}

Token Parser::next() {
  Token t = tok_;
  lex();
  return t;
}

bool Parser::accept(std::string_view p) {
  if (tok_.kind == Token::kPunct && tok_.text == p) {
    lex();
    return true;
  }
  return false;
}

void Parser::expect(std::string_view p) {
  if (!accept(p)) fail("'" + std::string(p) + "'");
}

std::string Parser::expect_ident(std::string_view what) {
  if (tok_.kind != Token::kIdent) fail(what);
  return next().text;
}

double Parser::expect_number() {
  if (tok_.kind != Token::kNumber) fail("number");
  return next().number;
}

double Parser::expect_keyword_value(std::string_view key) {
  if (tok_.kind != Token::kIdent || tok_.text != key) {
    fail("'" + std::string(key) + "='");
  }
  next();
  expect("=");
  return expect_number();
}

Expr Parser::parse_expr(const GateHook& hook) {
  if (tok_.kind != Token::kIdent) fail("expression");
  const Token word = next();
  if (word.text == "always" || word.text == "ALWAYS") return Always();
  if (word.text == "never" || word.text == "NEVER") return Never();
  const std::optional<Op> op = gate_keyword(word.text);
  if (!op || !(tok_.kind == Token::kPunct && tok_.text == "(")) {
    return Basic(word.text);
  }
  expect("(");
  if (hook) {
    if (std::optional<Expr> special = hook(*this, *op)) return *special;
  }
  std::vector<Expr> args;
  args.push_back(parse_expr(hook));
  while (accept(",")) args.push_back(parse_expr(hook));
  const Token close = tok_;
  expect(")");
  if (is_associative(*op)) {
    if (args.size() < 2) {
      throw SyntaxError(close.line, close.col, "at least two operands");
    }
    return Expr::Make(*op, std::move(args));
  }
  if (args.size() != arity(*op)) {
    throw SyntaxError(close.line, close.col,
                      std::to_string(arity(*op)) + " operands for " +
                          std::string(keyword(*op)));
  }
  return Expr::Make(*op, std::move(args));
}

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Expr parse_expr(std::string_view text) {
  Parser p(text);
  Expr e = p.parse_expr();
  if (!p.at_end()) p.fail("end of input");
  return e;
}

}  // namespace dft
