#pragma once

#include <cstdint>

namespace ldpnet {

// Counter-based generator: every draw is a stateless hash of
// (key, counter), so substreams can be handed out per node / per trial
// and the results do not depend on evaluation order or thread count.
class SubstreamRng {
 public:
  SubstreamRng(uint64_t seed, uint64_t stream, uint64_t substream = 0)
      : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ stream) ^ mix(substream)),
        counter_(0) {}

  uint64_t next() { return mix(key_ ^ mix(counter_++)); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  uint64_t key_;
  uint64_t counter_;
};

// Named stream ids so callers do not collide by accident.
namespace stream {
inline constexpr uint64_t kGraph = 0x6772617068ull;       // "graph"
inline constexpr uint64_t kMonteCarlo = 0x6d63ull;        // "mc"
inline constexpr uint64_t kMultistart = 0x6d73746172ull;  // "mstar"
inline constexpr uint64_t kTest = 0x74657374ull;          // "test"
}  // namespace stream

}  // namespace ldpnet
