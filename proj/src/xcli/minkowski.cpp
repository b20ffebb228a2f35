#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sarith::xcli {

// Strips [1,2] x [0,V] (x [0,1]^{d-2}) with finite parts Z_p^d: nested, not symmetric,
// so Minkowski's theorem does not force a hit at any volume.
ExperimentReport exp_random_minkowski(const Config& cfg, u64 seed, int threads) {
  const std::vector<u64> primes = cfg.primes();
  const Context ctx = cfg.context(primes);
  const i64 d = cfg.integer("d", 2);
  const u64 samples = cfg.count("samples", 20000);
  const double v0 = cfg.num("base_volume", 2.0);
  const i64 doublings = cfg.integer("doublings", 5);
  const double ratio_max = cfg.num("ratio_max", 10.0);
  if (d != 2 && d != 3) config_error("'d' must be 2 or 3");
  if (d == 3 && !primes.empty()) config_error("d = 3 uses a real-only generic sampler");
  if (!(v0 > 0)) config_error("'base_volume' must be positive");
  if (doublings < 1 || doublings > 30) config_error("'doublings' must lie in [1, 30]");
  cfg.reject_unknown();

  const int di = static_cast<int>(d);
  const std::size_t K = static_cast<std::size_t>(doublings) + 1;
  std::vector<double> vols(K);
  for (std::size_t k = 0; k < K; ++k) vols[k] = v0 * std::ldexp(1.0, static_cast<int>(k));
  auto strip = [&](double V) {
    ProductRegion A;
    A.d = di;
    std::vector<double> lo(static_cast<std::size_t>(d), 0.0), hi(static_cast<std::size_t>(d), 1.0);
    lo[0] = 1.0;
    hi[0] = 2.0;
    hi[1] = V;
    A.real = RealBox{lo, hi};
    return A;
  };
  const ProductRegion big = strip(vols.back());

  // smallest height y_1 of a primitive point in the largest strip; the lattice avoids A_k iff it exceeds V_k
  std::vector<double> min_h(samples);
  parallel_for(samples, threads, [&](std::size_t i) {
    RngStream rng(seed, stream_id(0, i));
    SLattice L = di == 2 ? sample_lattice2(ctx, rng) : SLattice(ctx, di, generic_real_sl(di, rng), {});
    double h = INFINITY;
    EnumOptions opt;
    opt.primitive_only = true;
    scan_points(L, big, opt, [&](std::span<const i64>, std::span<const double> y) {
      h = std::min(h, y[1]);
      return true;
    });
    min_h[i] = h;
  });

  ExperimentReport r;
  r.columns = {"volume", "samples", "avoid_prob", "se", "E_factor", "ratio"};
  std::vector<double> probs, ratios;
  for (std::size_t k = 0; k < K; ++k) {
    ProductRegion A = strip(vols[k]);
    double vol = region_volume(ctx, A);
    u64 avoid = 0;
    for (double h : min_h) avoid += h > vols[k];
    double P = static_cast<double>(avoid) / static_cast<double>(samples);
    double se = std::sqrt(P * (1 - P) / static_cast<double>(samples));
    double E = 1.0;
    if (di == 2) {
      // (log vol)^{2+s} + sum over places of the product of the other places' volumes
      double s = static_cast<double>(ctx.s());
      double rv = real_volume(A.real, di);
      std::vector<double> place{rv};
      for (std::size_t i = 0; i < ctx.s(); ++i) place.push_back(padic_volume(A.at(ctx.prime(i)), ctx.prime(i), di));
      double sum = 0;
      for (std::size_t a = 0; a < place.size(); ++a) {
        double prod = 1;
        for (std::size_t b = 0; b < place.size(); ++b)
          if (b != a) prod *= place[b];
        sum += prod;
      }
      E = std::pow(std::log(vol), 2.0 + s) + sum;
    }
    double ratio = P * vol / E;
    probs.push_back(P);
    ratios.push_back(ratio);
    r.rows.push_back({fmt(vol), fmt_int(static_cast<i64>(samples)), fmt(P), fmt(se), fmt(E), fmt(ratio)});
  }
  bool monotone = std::is_sorted(probs.rbegin(), probs.rend());
  double rmax = *std::max_element(ratios.begin(), ratios.end());
  double rmin = *std::min_element(ratios.begin(), ratios.end());
  double spread = rmin > 0 ? rmax / rmin : INFINITY;
  r.pass = monotone && spread <= ratio_max;
  add_summary(r, "non_increasing", monotone ? "yes" : "no");
  add_summary(r, "ratio_max_over_min", spread);
  add_summary(r, "max_ratio", rmax);
  add_summary(r, "ratio_bound", ratio_max);
  return r;
}

}  // namespace sarith::xcli
