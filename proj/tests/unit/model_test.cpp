#include "dft/model.hpp"

#include <gtest/gtest.h>

#include "dft/error.hpp"
#include "dft/rewrite.hpp"
#include "dft/syntax.hpp"

namespace dft {
namespace {

TEST(ParseModel, SimpleAnd) {
  const DftModel m =
      parse_model("top T; T = and(A,B); A : exp(lambda=1); B : exp(lambda=2);");
  EXPECT_EQ(m.top_name(), "T");
  EXPECT_EQ(m.top_expr(), And(Basic("A"), Basic("B")));
  EXPECT_EQ(m.law("B"), Distribution::Exponential(2));
  EXPECT_EQ(m.variables(), (std::vector<std::string>{"A", "B"}));
}

TEST(ParseModel, CommentsAndWeibull) {
  const DftModel m = parse_model(
      "// header\n"
      "top T;   // trailing\n"
      "T = or(A, G);\n"
      "G = pand(B, A);\n"
      "A : weibull(shape=2, scale=3);\n"
      "B : exp(lambda=0.5);\n");
  EXPECT_EQ(to_string(m.top_expr()), "or(A, pand(B, A))");
  EXPECT_EQ(m.law("A"), Distribution::Weibull(2, 3));
}

TEST(ParseModel, Errors) {
  EXPECT_THROW(parse_model("top T; T = pand(A,B); A : exp(lambda=1);"), Undefined);
  try {
    parse_model("top T; T = pand(A,B); A : exp(lambda=1);");
  } catch (const Undefined& e) {
    EXPECT_EQ(e.name(), "B");
  }
  EXPECT_THROW(parse_model("top T; T = and(U, A); U = or(T, A); A : exp(lambda=1);"),
               CycleDetected);
  EXPECT_THROW(parse_model("top T; T = A; A : exp(lambda=1); A : exp(lambda=2);"),
               Redefined);
  EXPECT_THROW(parse_model("top T; T = and(A, B); A = or(B, B); A : exp(lambda=1); "
                           "B : exp(lambda=1);"),
               Redefined);
  EXPECT_THROW(parse_model("top T; T = A; A : exp(lambda=0);"), SyntaxError);
  EXPECT_THROW(parse_model("top T; T = A; A : gamma(k=1);"), SyntaxError);
  EXPECT_THROW(parse_model("T = A; A : exp(lambda=1);"), Error);
}

TEST(ParseModel, SyntaxErrorPosition) {
  try {
    parse_model("top T;\nT = and(A B);\nA : exp(lambda=1);\n");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.col(), 11);
  }
}

TEST(ParseModel, CycleReportsPath) {
  try {
    parse_model("top T; T = and(U, A); U = or(T, A); A : exp(lambda=1);");
    FAIL();
  } catch (const CycleDetected& e) {
    EXPECT_EQ(e.path(), "T -> U -> T");
  }
}

TEST(ParseModel, FdepDefinition) {
  const DftModel m = parse_model(
      "top T; T = and(P, B); TRIG = fdep(or(X, Y); P, B); "
      "P : exp(lambda=1); B : exp(lambda=1); X : exp(lambda=1); Y : exp(lambda=1);");
  EXPECT_EQ(to_string(m.top_expr()),
            "and(fdep(P, or(X, Y)), fdep(B, or(X, Y)))");
  EXPECT_EQ(to_string(m.top_expr(true)), "and(or(P, or(X, Y)), or(B, or(X, Y)))");
}

TEST(ParseModel, WarmSpareStates) {
  const DftModel m = parse_model(
      "top T; T = wsp(A, S, dormancy=0.25); A : exp(lambda=1); S : exp(lambda=2);");
  EXPECT_EQ(m.variables(), (std::vector<std::string>{"A", "S_a", "S_d"}));
  EXPECT_EQ(m.role("S_a"), EventRole::kConditional);
  EXPECT_EQ(m.role("S_d"), EventRole::kDormant);
  EXPECT_EQ(m.law("S_d"), Distribution::Exponential(0.5));
  EXPECT_EQ(to_string(m.top_expr()), "wsp(A, S_a, S_d)");
  EXPECT_THROW(parse_model("top T; T = wsp(A, S, dormancy=0); A : exp(lambda=1); "
                           "S : exp(lambda=1);"),
               SyntaxError);
}

TEST(ParseModel, ColdSpareIsItsOwnConditionalState) {
  const DftModel m =
      parse_model("top T; T = csp(A, S); A : exp(lambda=1); S : exp(lambda=2);");
  EXPECT_EQ(m.role("S"), EventRole::kConditional);
  EXPECT_EQ(to_string(m.top_expr()), "csp(A, S)");
}

TEST(ParseModel, WeibullWarmSpareNeedsActivationLaw) {
  const DftModel m = parse_model(
      "top T; T = wsp(A, S, dormancy=0.5); A : exp(lambda=1); "
      "S : weibull(shape=2, scale=1);");
  EXPECT_THROW(m.conditional_law("S_a"), MissingConditionalLaw);
}

TEST(ParseModel, DesugarTurnsHspIntoAnd) {
  const DftModel m =
      parse_model("top T; T = hsp(Y, X); Y : exp(lambda=1); X : exp(lambda=1);");
  EXPECT_EQ(to_string(m.top_expr()), "hsp(Y, X)");
  EXPECT_EQ(to_string(m.top_expr(true)), "and(Y, X)");
}

TEST(CasModel, ParsesToTheHandWrittenTopEvent) {
  const DftModel m = cas_model();
  const NameOrder order = m.name_order();
  const Expr expected = parse_expr(
      "or(and(sharedspare(PA, PB, PS, PS), sharedspare(PB, PA, PS, PS)), "
      "pand(MS, MA), hsp(MA, MB), hsp(fdep(P, or(CS, SS)), fdep(B, or(CS, SS))))");
  EXPECT_EQ(canonicalize(m.top_expr(), order), canonicalize(expected, order));
  EXPECT_EQ(basics_of(m.top_expr()).size(), 10u);
}

TEST(CasModel, SimplifiesToTheReducedForm) {
  const DftModel m = cas_model();
  EXPECT_EQ(to_source(simplify(m.top_expr(), default_rules(), m.rewrite_context()), m),
            "or(CS, SS, and(MA, before(MS, MA)), and(MA, MB), and(P, B), "
            "and(PA, PB, PS))");
}

TEST(ModelText, RoundTrips) {
  for (const std::string text :
       {std::string(cas_model_text()),
        std::string("top T; T = or(wsp(A, S, dormancy=0.2), sharedspare(B, A, R, "
                    "dormancy=0.5), sharedspare(A, B, R, dormancy=0.5), csp(B, C)); "
                    "A : exp(lambda=1); S : exp(lambda=0.3); B : weibull(shape=1.5, "
                    "scale=2); R : exp(lambda=0.1); C : exp(lambda=3);")}) {
    const DftModel m1 = parse_model(text);
    const std::string printed = to_model_text(m1);
    const DftModel m2 = parse_model(printed);
    EXPECT_EQ(to_model_text(m2), printed);
    EXPECT_EQ(m2.top_expr(), m1.top_expr());
    EXPECT_EQ(m2.variables(), m1.variables());
    EXPECT_EQ(model_digest(m1), model_digest(m2));
  }
}

TEST(ModelText, DigestTracksContent) {
  const DftModel a = parse_model("top T; T = A; A : exp(lambda=1);");
  const DftModel b = parse_model("top T; T = A; A : exp(lambda=2);");
  EXPECT_EQ(model_digest(a).size(), 16u);
  EXPECT_NE(model_digest(a), model_digest(b));
}

}  // namespace
}  // namespace dft
