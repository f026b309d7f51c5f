#pragma once

#include <cstdint>

namespace semijulia {

// Counter-based stream: output i of stream (seed, stream) is a pure function
// of (seed, stream, i). Streams never share state, so parallel chains are
// reproducible regardless of scheduling.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t next() { return mix(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n); multiply-shift, bias below 2^-32 for small n.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Child seed for (task index, purpose) derived from a master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
  return StreamRng::mix(StreamRng::mix(master + 0x9e3779b97f4a7c15ULL * (a + 1)) ^ (b * 0xd1b54a32d192ed03ULL));
}

}  // namespace semijulia
