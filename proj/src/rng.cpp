#include "lsrm/rng.hpp"

#include <cmath>

namespace lsrm {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  // Expand (seed, stream) into a full 312-word state so that nearby keys do
  // not produce correlated engines.
  std::uint64_t x = seed ^ (stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  std::seed_seq seq{static_cast<unsigned>(splitmix64(x) >> 32),
                    static_cast<unsigned>(splitmix64(x)),
                    static_cast<unsigned>(splitmix64(x) >> 32),
                    static_cast<unsigned>(splitmix64(x)),
                    static_cast<unsigned>(splitmix64(x) >> 32),
                    static_cast<unsigned>(splitmix64(x))};
  eng_.seed(seq);
}

std::uint64_t RngStream::next_raw() { return eng_(); }

double RngStream::uniform() {
  // 53 random bits, offset by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

}  // namespace lsrm
