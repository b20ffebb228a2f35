// Counter-based random streams and Haar-type samplers.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sarith/slattice.hpp"

namespace sarith {

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

// Stream (seed, stream_id); draw number i is a pure function of (seed, stream_id, i).
class RngStream {
 public:
  RngStream(u64 seed, u64 stream_id) : seed_(seed), stream_(stream_id) {}

  u64 seed() const { return seed_; }
  u64 stream_id() const { return stream_; }
  u64 position() const { return index_; }

  std::uint32_t next_u32();
  u64 next_u64();
  double uniform();                 // [0, 1)
  double uniform_pos();             // (0, 1]
  u64 below(u64 n);                 // uniform in [0, n), unbiased
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  void refill();

  u64 seed_;
  u64 stream_;
  u64 index_ = 0;  // block counter
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

struct Sl2Sample {
  std::array<double, 4> g{};  // row-major, lattice g Z^2
  double x = 0, y = 1, theta = 0;
  u64 proposals = 0;          // Siegel-set proposals used
};

Sl2Sample sample_sl2_real_detail(RngStream& rng);
std::array<double, 4> sample_sl2_real(RngStream& rng);

// Uniform element of SL_d(Z / p^m Z), row-major.
std::vector<u64> sample_sld_zp(u64 p, int d, int m, RngStream& rng);

struct ConeSample {
  SLattice lattice;  // v^{1/2} g Z_S^2 (cone scaling attached)
  QSElement v;
};

SLattice sample_lattice2(const Context& ctx, RngStream& rng);
ConeSample sample_cone(const Context& ctx, RngStream& rng);
QSVector sample_region_point(const Context& ctx, const ProductRegion& A, RngStream& rng);

}  // namespace sarith
