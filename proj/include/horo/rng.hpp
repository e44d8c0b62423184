#pragma once

#include <cstdint>

namespace horo {

// Counter-based pseudo-randomness built on the splitmix64 finalizer.
// Every draw is a pure function of (key, counter), so lazily materialized
// boundary tails and parallel sample streams reproduce bit-for-bit no
// matter in which order the draws happen.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Draw indexed by an arbitrary 64-bit counter under a fixed key.
inline std::uint64_t keyed_draw(std::uint64_t key, std::uint64_t counter) {
  return mix64(key ^ mix64(counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// Independent stream key for sample index i under a master seed.
inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Unbiased-enough mapping of a 64-bit draw onto [0, m). The bias is < m/2^64,
// far below anything the statistical tests here can resolve.
inline std::uint64_t bounded(std::uint64_t draw, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(draw) * m) >> 64);
}

inline double to_unit_double(std::uint64_t draw) {
  return static_cast<double>(draw >> 11) * 0x1.0p-53;
}

// Sequential convenience stream over keyed_draw.
class Stream {
public:
  explicit Stream(std::uint64_t key) : key_(key), ctr_(0) {}

  std::uint64_t next() { return keyed_draw(key_, ctr_++); }
  std::uint64_t next_below(std::uint64_t m) { return bounded(next(), m); }
  double next_unit() { return to_unit_double(next()); }

  std::uint64_t key() const { return key_; }

private:
  std::uint64_t key_;
  std::uint64_t ctr_;
};

}  // namespace horo
