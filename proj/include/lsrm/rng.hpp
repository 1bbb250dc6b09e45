#pragma once

#include <cstdint>
#include <random>

namespace lsrm {

// Deterministic random stream keyed by (seed, stream). Streams with distinct
// keys are independent for practical purposes; the same key reproduces the
// same sequence bit for bit on every platform (mt19937_64 and all the
// transforms below are fully specified, no libc distributions involved).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next_raw();

  // Uniform on the open interval (0,1); never returns an endpoint.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via the polar method; the spare deviate is cached.
  double normal();

 private:
  std::mt19937_64 eng_;
  std::uint64_t seed_;
  std::uint64_t stream_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lsrm
