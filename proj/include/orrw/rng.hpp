#pragma once

#include <cstdint>
#include <random>

namespace orrw {

/// Random stream keyed by (seed, stream index). Streams for different indices
/// are independent of the order in which they are created, so parallel Monte
/// Carlo gives the same result for any worker count.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), 0x6f727277U};
    engine_.seed(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits. Spelled out rather than via
  /// std::uniform_real_distribution, whose output is implementation-defined.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace orrw
