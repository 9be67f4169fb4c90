#pragma once

#include <cstdint>

namespace dft {

/// Counter-based random stream: the k-th draw of stream `id` under `seed` is
/// a pure function of (seed, id, k). Sample i of a simulation uses stream i,
/// so results do not depend on how samples are split across workers.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t id);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dft
