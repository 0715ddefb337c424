#pragma once

#include <cstdint>
#include <limits>

namespace risd2d {

inline constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 generator. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64_mix(state_);
  }

  // Uniform on (0, 1]; never returns 0 so -log(u) is finite.
  double uniform_open0() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Link identifiers used to derive independent substreams.
enum class StreamLink : std::uint64_t { sd = 0, sc = 1, sr = 2, rd = 3, bd = 4 };

// Counter-based substream for (seed, trial, link). The same triple always yields
// the same stream, whatever thread evaluates it.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t trial, StreamLink link) {
  std::uint64_t h = splitmix64_mix(seed ^ 0x6a09e667f3bcc908ULL);
  h = splitmix64_mix(h ^ (trial * 0x9e3779b97f4a7c15ULL));
  h = splitmix64_mix(h + static_cast<std::uint64_t>(link) * 0xd1b54a32d192ed03ULL);
  return SplitMix64(h);
}

}  // namespace risd2d
