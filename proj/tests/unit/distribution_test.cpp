#include "dft/distribution.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "dft/error.hpp"
#include "dft/random.hpp"

namespace dft {
namespace {

TEST(Distribution, ExponentialClosedForms) {
  const Distribution d = Distribution::Exponential(2.0);
  EXPECT_NEAR(d.cdf(0.7), 1.0 - std::exp(-1.4), 1e-15);
  EXPECT_NEAR(d.survival(0.7), std::exp(-1.4), 1e-15);
  EXPECT_NEAR(d.pdf(0.7), 2.0 * std::exp(-1.4), 1e-15);
  EXPECT_EQ(d.cdf(0.0), 0.0);
  EXPECT_TRUE(d.memoryless());
  EXPECT_EQ(d.to_string(), "exp(lambda=2)");
}

TEST(Distribution, WeibullClosedForms) {
  const Distribution d = Distribution::Weibull(1.5, 2.0);
  const double z = std::pow(0.9 / 2.0, 1.5);
  EXPECT_NEAR(d.cdf(0.9), 1.0 - std::exp(-z), 1e-15);
  EXPECT_NEAR(d.pdf(0.9), 1.5 / 2.0 * std::pow(0.45, 0.5) * std::exp(-z), 1e-15);
  EXPECT_FALSE(d.memoryless());
  EXPECT_EQ(d.to_string(), "weibull(shape=1.5, scale=2)");
}

TEST(Distribution, TailQuantile) {
  const Distribution d = Distribution::Exponential(0.5);
  const double q = d.tail_quantile(1e-6);
  EXPECT_LE(d.survival(q), 1e-6 * (1 + 1e-12));
  EXPECT_NEAR(q, -std::log(1e-6) / 0.5, 1e-9);
}

TEST(Distribution, RejectsNonPositiveParameters) {
  EXPECT_THROW(Distribution::Exponential(0.0), NonPositiveParameter);
  EXPECT_THROW(Distribution::Exponential(-1.0), NonPositiveParameter);
  EXPECT_THROW(Distribution::Weibull(1.0, 0.0), NonPositiveParameter);
  EXPECT_THROW(Distribution::Weibull(-2.0, 1.0), NonPositiveParameter);
}

TEST(Distribution, SampleMeanAndCdf) {
  const Distribution d = Distribution::Exponential(2.0);
  RandomStream rng(3, 0);
  const int n = 200000;
  double sum = 0.0;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double x = d.sample(rng);
    ASSERT_GE(x, 0.0);
    sum += x;
    below += x <= 0.5;
  }
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(static_cast<double>(below) / n, d.cdf(0.5), 0.005);
}

TEST(Distribution, DormantVariantScalesHazard) {
  const Distribution e = dormant_variant(Distribution::Exponential(2.0), 0.25);
  EXPECT_DOUBLE_EQ(e.rate(), 0.5);
  const Distribution w = dormant_variant(Distribution::Weibull(2.0, 3.0), 0.5);
  // Hazard of the variant is alpha times the active hazard.
  const Distribution a = Distribution::Weibull(2.0, 3.0);
  for (double t : {0.5, 1.0, 4.0}) {
    EXPECT_NEAR(w.pdf(t) / w.survival(t), 0.5 * a.pdf(t) / a.survival(t), 1e-12);
  }
  EXPECT_EQ(dormant_variant(a, 1.0), a);
  EXPECT_THROW(dormant_variant(a, 0.0), NonPositiveParameter);
  EXPECT_THROW(dormant_variant(a, 1.5), NonPositiveParameter);
}

TEST(ConditionalLaw, MemorylessShiftsTheActiveLaw) {
  const Distribution d = Distribution::Exponential(1.5);
  const ConditionalLaw c = ConditionalLaw::Memoryless(d);
  EXPECT_EQ(c.pdf(2.0, 1.0), 0.0);
  EXPECT_NEAR(c.pdf(2.0, 2.5), d.pdf(0.5), 1e-15);
  RandomStream rng(1, 1);
  for (int i = 0; i < 100; ++i) EXPECT_GT(c.sample(2.0, rng), 2.0);
  EXPECT_THROW(ConditionalLaw::Memoryless(Distribution::Weibull(2, 1)),
               UnsupportedFamily);
}

TEST(ConditionalLaw, FromJointMatchesMemorylessForIndependentShift) {
  // Joint density of (U, V) with U - V ~ exp(1) independent of V ~ exp(2).
  auto joint = [](double u, double v) {
    return u > v ? 2.0 * std::exp(-2.0 * v) * std::exp(-(u - v)) : 0.0;
  };
  auto marginal = [](double v) { return 2.0 * std::exp(-2.0 * v); };
  const ConditionalLaw c = ConditionalLaw::FromJoint(joint, marginal);
  const ConditionalLaw m = ConditionalLaw::Memoryless(Distribution::Exponential(1.0));
  for (double u : {1.1, 1.5, 3.0}) EXPECT_NEAR(c.pdf(1.0, u), m.pdf(1.0, u), 1e-12);
  RandomStream rng(4, 0);
  double sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) sum += c.sample(1.0, rng) - 1.0;
  EXPECT_NEAR(sum / n, 1.0, 0.1);
}

TEST(RandomStream, StreamsAreReproducibleAndIndependentOfOrder) {
  RandomStream a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  RandomStream u(1, 2);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform_open();
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
}

}  // namespace
}  // namespace dft
