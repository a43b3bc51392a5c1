#include "eigencond/rng.hpp"

namespace eigencond {

std::uint64_t split_mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t unit) {
  return split_mix64(split_mix64(seed) ^ split_mix64(unit + 0x51ed2701ab0582fdULL));
}

Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace eigencond
