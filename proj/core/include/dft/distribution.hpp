#pragma once

/// @file distribution.hpp
/// Failure-time laws and conditional activation laws for spares.

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dft/random.hpp"

namespace dft {

enum class Family { kExponential, kWeibull };

/// A continuous failure-time law supported on [0, inf).
class Distribution {
 public:
  /// cdf(t) = 1 - exp(-rate t). Throws NonPositiveParameter.
  static Distribution Exponential(double rate);
  /// cdf(t) = 1 - exp(-(t/scale)^shape). Throws NonPositiveParameter.
  static Distribution Weibull(double shape, double scale);

  Family family() const { return family_; }
  /// Exponential rate; for Weibull, 1/scale.
  double rate() const { return rate_; }
  double shape() const { return shape_; }
  double scale() const { return scale_; }

  double cdf(double t) const;
  double survival(double t) const;
  /// Finite everywhere: a singular density at 0 (shape < 1) is evaluated
  /// at max(t, 1e-12).
  double pdf(double t) const;
  /// Smallest t with survival(t) <= tail.
  double tail_quantile(double tail) const;
  /// Inverse-CDF draw.
  double sample(RandomStream& rng) const;

  bool memoryless() const { return shape_ == 1.0; }

  /// Model-file literal, e.g. `exp(lambda=0.5)`.
  std::string to_string() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(Family f, double shape, double scale, double rate)
      : family_(f), shape_(shape), scale_(scale), rate_(rate) {}

  Family family_;
  double shape_;
  double scale_;
  double rate_;
};

/// Law of a dormant spare: hazard scaled by `alpha` in (0, 1].
/// exponential(l) -> exponential(alpha l); weibull(k, s) -> weibull(k, s /
/// alpha^(1/k)). Throws NonPositiveParameter for alpha outside (0, 1].
Distribution dormant_variant(const Distribution& active, double alpha);

/// Density of a spare's active-state failure time given that it was
/// activated (its main failed) at time v.
class ConditionalLaw {
 public:
  using JointPdf = std::function<double(double x, double y)>;
  using MarginalPdf = std::function<double(double y)>;

  /// Memoryless activation of `active`: pdf(v, u) = active.pdf(u - v) for
  /// u > v. Throws UnsupportedFamily unless `active` is memoryless.
  static ConditionalLaw Memoryless(const Distribution& active);
  /// pdf(v, u) = joint(u, v) / marginal(v) for u > v, 0 otherwise. Sampling
  /// inverts the conditional CDF numerically.
  static ConditionalLaw FromJoint(JointPdf joint, MarginalPdf marginal);

  /// Conditional density at u given activation at v; 0 for u <= v.
  double pdf(double v, double u) const;
  /// Draw u > v.
  double sample(double v, RandomStream& rng) const;

  /// The active law when this is a memoryless activation.
  const std::optional<Distribution>& active() const { return active_; }

 private:
  ConditionalLaw() = default;

  std::optional<Distribution> active_;
  JointPdf joint_;
  MarginalPdf marginal_;
};

ConditionalLaw memoryless_activation(const Distribution& active);

}  // namespace dft
