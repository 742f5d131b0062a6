#pragma once

#include <cstdint>

namespace bellnoise {

// splitmix64. Each simulated patient gets its own substream derived from
// (master seed, patient index), so serial and parallel runs draw
// identical values in any schedule.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

inline SplitMix64 substream(std::uint64_t master, std::uint64_t index) {
  SplitMix64 h(master);
  const std::uint64_t a = h.next();
  SplitMix64 g(a ^ (0xd1342543de82ef95ULL * (index + 1)));
  g.next();
  return g;
}

}  // namespace bellnoise
