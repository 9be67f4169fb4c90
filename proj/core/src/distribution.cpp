#include "dft/distribution.hpp"

#include <cmath>
#include <cstdio>

#include "dft/error.hpp"
#include "dft/quadrature.hpp"
#include "dft/syntax.hpp"

namespace dft {

namespace {

constexpr double kPdfFloor = 1e-12;

}  // namespace

Distribution Distribution::Exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw NonPositiveParameter("exponential rate must be positive");
  }
  return Distribution(Family::kExponential, 1.0, 1.0 / rate, rate);
}

Distribution Distribution::Weibull(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) ||
      !std::isfinite(scale)) {
    throw NonPositiveParameter("weibull shape and scale must be positive");
  }
  return Distribution(Family::kWeibull, shape, scale, 1.0 / scale);
}

double Distribution::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (family_ == Family::kExponential) return -std::expm1(-rate_ * t);
  return -std::expm1(-std::pow(t / scale_, shape_));
}

double Distribution::survival(double t) const {
  if (t <= 0.0) return 1.0;
  if (family_ == Family::kExponential) return std::exp(-rate_ * t);
  return std::exp(-std::pow(t / scale_, shape_));
}

double Distribution::pdf(double t) const {
  if (t < 0.0) return 0.0;
  if (family_ == Family::kExponential) {
    return rate_ * std::exp(-rate_ * t);
  }
  if (shape_ < 1.0) t = std::max(t, kPdfFloor);
  if (t == 0.0) return shape_ == 1.0 ? 1.0 / scale_ : 0.0;
  const double z = t / scale_;
  return shape_ / scale_ * std::pow(z, shape_ - 1.0) *
         std::exp(-std::pow(z, shape_));
}

double Distribution::tail_quantile(double tail) const {
  if (tail >= 1.0) return 0.0;
  return scale_ * std::pow(-std::log(tail), 1.0 / shape_);
}

double Distribution::sample(RandomStream& rng) const {
  const double e = -std::log1p(-rng.uniform());
  if (family_ == Family::kExponential) return e / rate_;
  return scale_ * std::pow(e, 1.0 / shape_);
}

std::string Distribution::to_string() const {
  if (family_ == Family::kExponential) {
    return "exp(lambda=" + format_number(rate_) + ")";
  }
  return "weibull(shape=" + format_number(shape_) + ", scale=" + format_number(scale_) + ")";
}

Distribution dormant_variant(const Distribution& active, double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw NonPositiveParameter("dormancy factor must be in (0, 1]");
  }
  if (alpha == 1.0) return active;
  if (active.family() == Family::kExponential) {
    return Distribution::Exponential(alpha * active.rate());
  }
  return Distribution::Weibull(
      active.shape(), active.scale() / std::pow(alpha, 1.0 / active.shape()));
}

ConditionalLaw ConditionalLaw::Memoryless(const Distribution& active) {
  if (!active.memoryless()) {
    throw UnsupportedFamily(
        "memoryless activation needs an exponential active law, got " +
        active.to_string());
  }
  ConditionalLaw law;
  law.active_ = active;
  return law;
}

ConditionalLaw ConditionalLaw::FromJoint(JointPdf joint, MarginalPdf marginal) {
  ConditionalLaw law;
  law.joint_ = std::move(joint);
  law.marginal_ = std::move(marginal);
  return law;
}

double ConditionalLaw::pdf(double v, double u) const {
  if (u <= v) return 0.0;
  if (active_) return active_->pdf(u - v);
  const double fy = marginal_(v);
  if (!(fy > 0.0)) return 0.0;
  return joint_(u, v) / fy;
}

double ConditionalLaw::sample(double v, RandomStream& rng) const {
  if (active_) return v + active_->sample(rng);
  // Invert the conditional CDF: bracket, then bisect.
  const double target = rng.uniform_open();
  auto mass = [&](double u) {
    return integrate([&](double x) { return pdf(v, x); }, v, u, 1e-11, 60)
        .value;
  };
  double width = 1.0;
  while (mass(v + width) < target) {
    width *= 2.0;
    if (width > 1e12) return v + width;
  }
  double lo = v;
  double hi = v + width;
  for (int i = 0; i < 100 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (mass(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ConditionalLaw memoryless_activation(const Distribution& active) {
  return ConditionalLaw::Memoryless(active);
}

}  // namespace dft
