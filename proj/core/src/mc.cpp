#include "dft/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "dft/error.hpp"
#include "dft/eval.hpp"
#include "dft/random.hpp"

namespace dft {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Sampler {
 public:
  explicit Sampler(const DftModel& m) : vars_(m.variables()) {
    for (const std::string& v : vars_) {
      const EventRole role = m.role(v);
      laws_.push_back(role == EventRole::kConditional
                          ? std::nullopt
                          : std::optional<Distribution>(m.law(v)));
    }
    std::vector<Pending> pending;
    for (const SpareInfo& s : m.spares()) {
      if (m.role(s.active) != EventRole::kConditional) continue;
      Pending p{{index(s.active), s.dormant.empty() ? -1 : index(s.dormant),
                 m.conditional_law(s.active), {}},
                {}};
      for (const Expr& a : s.activators) {
        const Expr resolved = m.resolve(a);
        p.spare.activators.emplace_back(resolved, vars_);
        for (const std::string& b : basics_of(resolved)) {
          if (m.role(b) == EventRole::kConditional) p.needs.insert(index(b));
        }
      }
      pending.push_back(std::move(p));
    }
    // Activate spares only after every spare their mains depend on.
    std::set<int> decided;
    while (!pending.empty()) {
      auto ready = std::find_if(pending.begin(), pending.end(),
                                [&](const Pending& p) {
                                  return std::includes(
                                      decided.begin(), decided.end(),
                                      p.needs.begin(), p.needs.end());
                                });
      if (ready == pending.end()) {
        throw Error("spare activation depends on itself");
      }
      decided.insert(ready->spare.active);
      spares_.push_back(std::move(ready->spare));
      pending.erase(ready);
    }
    top_.emplace(m.top_expr(), vars_);
  }

  double draw(std::uint64_t seed, std::uint64_t i, std::vector<double>& x) const {
    RandomStream rng(seed, i);
    x.resize(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      x[k] = laws_[k] ? laws_[k]->sample(rng) : kInf;
    }
    for (const Spare& s : spares_) {
      double v = kInf;
      for (const CompiledExpr& a : s.activators) v = std::min(v, a(x));
      const bool activated =
          v < kInf && (s.dormant < 0 || v < x[static_cast<std::size_t>(s.dormant)]);
      if (activated) {
        if (s.dormant >= 0) x[static_cast<std::size_t>(s.dormant)] = kInf;
        x[static_cast<std::size_t>(s.active)] = s.law.sample(v, rng);
      } else {
        x[static_cast<std::size_t>(s.active)] = kInf;
      }
    }
    return (*top_)(x);
  }

 private:
  struct Spare {
    int active;
    int dormant;
    ConditionalLaw law;
    std::vector<CompiledExpr> activators;
  };
  struct Pending {
    Spare spare;
    std::set<int> needs;
  };

  int index(const std::string& v) const {
    auto it = std::find(vars_.begin(), vars_.end(), v);
    if (it == vars_.end()) throw MissingDistribution(v);
    return static_cast<int>(it - vars_.begin());
  }

  std::vector<std::string> vars_;
  std::vector<std::optional<Distribution>> laws_;
  std::vector<Spare> spares_;
  std::optional<CompiledExpr> top_;
};

void check(const McConfig& cfg) {
  if (cfg.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    throw std::invalid_argument("confidence must be in (0, 1)");
  }
}

/// Failure counts per grid time, split over workers by contiguous ranges.
std::vector<std::size_t> tally(const DftModel& m,
                               const std::vector<double>& times,
                               const McConfig& cfg) {
  const Sampler sampler(m);
  const unsigned workers = std::max(1u, cfg.workers);
  std::vector<std::vector<std::size_t>> counts(
      workers, std::vector<std::size_t>(times.size(), 0));
  auto run = [&](unsigned w) {
    const std::size_t begin = cfg.samples * w / workers;
    const std::size_t end = cfg.samples * (w + 1) / workers;
    std::vector<double> x;
    auto& mine = counts[w];
    for (std::size_t i = begin; i < end; ++i) {
      const double top = sampler.draw(cfg.seed, i, x);
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (top <= times[k]) ++mine[k];
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (std::thread& th : pool) th.join();
  }
  std::vector<std::size_t> total(times.size(), 0);
  for (const auto& c : counts) {
    for (std::size_t k = 0; k < times.size(); ++k) total[k] += c[k];
  }
  return total;
}

McEstimate estimate(std::size_t count, const McConfig& cfg) {
  McEstimate e;
  e.samples_used = cfg.samples;
  e.p_hat = static_cast<double>(count) / static_cast<double>(cfg.samples);
  e.half_width = half_width(e.p_hat, cfg.samples, cfg.confidence);
  return e;
}

}  // namespace

double half_width(double p_hat, std::size_t n, double confidence) {
  const boost::math::normal standard;
  const double z = boost::math::quantile(standard, 0.5 + confidence / 2.0);
  return z * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

McEstimate simulate(const DftModel& m, double t, const McConfig& cfg) {
  return simulate_curve(m, {t}, cfg).front().second;
}

std::vector<std::pair<double, McEstimate>> simulate_curve(
    const DftModel& m, const std::vector<double>& times,
    const McConfig& cfg) {
  check(cfg);
  if (!std::is_sorted(times.begin(), times.end())) {
    throw std::invalid_argument("time grid must be ascending");
  }
  const std::vector<std::size_t> counts = tally(m, times, cfg);
  std::vector<std::pair<double, McEstimate>> out;
  for (std::size_t k = 0; k < times.size(); ++k) {
    out.emplace_back(times[k], estimate(counts[k], cfg));
  }
  return out;
}

std::vector<double> sample_top_times(const DftModel& m, std::uint64_t seed,
                                     std::size_t first, std::size_t count) {
  const Sampler sampler(m);
  std::vector<double> out;
  std::vector<double> x;
  out.reserve(count);
  for (std::size_t i = first; i < first + count; ++i) {
    out.push_back(sampler.draw(seed, i, x));
  }
  return out;
}

}  // namespace dft
