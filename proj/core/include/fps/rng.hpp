#pragma once

#include <cstdint>
#include <random>

namespace fps {

// Seeded random stream. The engine is std::mt19937_64 seeded through
// std::seed_seq with the 32-bit halves of (seed, stream_id); both algorithms
// are fully specified by the standard, so a (seed, stream_id) pair names one
// deviate sequence. Uniforms are built from the top 53 bits of each draw.
//
// Streams are single-owner: copying is disabled so two consumers can never
// silently share (and replay) the same sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;
  RngStream(RngStream&&) noexcept = default;
  RngStream& operator=(RngStream&&) noexcept = default;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal deviate.
  double normal() { return normal_(engine_); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fps
