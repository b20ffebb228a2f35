#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "sarith/haar.hpp"

namespace sarith::xcli {

namespace {

double gaussian(RngStream& rng) {
  double u = rng.uniform_pos(), v = rng.uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace

// Generic real matrix: Gaussian entries scaled to determinant 1.
std::vector<double> generic_real_sl(int d, RngStream& rng) {
  const std::size_t n = static_cast<std::size_t>(d * d);
  while (true) {
    std::vector<double> g(n);
    for (auto& x : g) x = gaussian(rng);
    double det = det_real(g, d);
    if (std::abs(det) < 1e-3) continue;
    if (det < 0)
      for (int j = 0; j < d; ++j) g[static_cast<std::size_t>(j)] = -g[static_cast<std::size_t>(j)];
    double s = std::pow(std::abs(det), -1.0 / d);
    for (auto& x : g) x *= s;
    return g;
  }
}

ExperimentReport exp_schmidt_count(const Config& cfg, u64 seed, int threads) {
  const std::vector<u64> primes = cfg.primes();
  const Context ctx = cfg.context(primes);
  const i64 d = cfg.integer("d", 3);
  const i64 N = cfg.integer("modulus", 1);
  const u64 draws = cfg.count("draws", 10);
  const double T_min = cfg.num("T_min", 1e3), T_max = cfg.num("T_max", 1e6);
  const u64 grid_n = cfg.count("grid_points", 10);
  const double rel_tol = cfg.num("rel_tol", 0.02);
  const double pass_fraction = cfg.num("pass_fraction", 0.9);
  const double slope_max = cfg.num("slope_max", 1.0);
  std::vector<i64> v0 = cfg.ints("v0", {});
  if (d < 2 || d > 6) config_error("'d' must lie in [2, 6]");
  if (N < 1) config_error("'modulus' must be positive");
  if (!ctx.s_smooth(static_cast<u64>(N))) config_error("'modulus' must be supported on S");
  if (v0.empty()) v0.assign(static_cast<std::size_t>(d), 0), v0[0] = 1;
  if (v0.size() != static_cast<std::size_t>(d)) config_error("'v0' must have d entries");
  if (!(T_min > 0 && T_min <= T_max)) config_error("need 0 < T_min <= T_max");
  cfg.reject_unknown();

  const int di = static_cast<int>(d);
  ProductRegion A;
  A.d = di;
  const double omega = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  auto radius = [&](double T) { return std::pow(T / omega, 1.0 / static_cast<double>(d)); };
  A.real = RealBall{std::vector<double>(static_cast<std::size_t>(d), 0.0), radius(T_max), NormKind::Euclidean};
  for (u64 p : primes) {
    int k = valuation_u64(static_cast<u64>(N), p);
    if (k > 0) A.finite[p] = PadicCoset{v0, k};
  }
  // vol of the finite part is N^{-d}; main term recomputed from the analytic side
  const double zeta = zeta_S(ctx, di);
  const double fin_vol = region_volume(ctx, A) / real_volume(A.real, di);
  const auto grid = log_grid(T_min, T_max, grid_n);

  std::vector<std::vector<u64>> counts(draws, std::vector<u64>(grid.size()));
  parallel_for(draws, threads, [&](std::size_t t) {
    RngStream rng(seed, stream_id(0, t));
    std::vector<PadicMatrix> fin;
    for (std::size_t i = 0; i < ctx.s(); ++i) fin.push_back(PadicMatrix::identity(ctx.prime(i), ctx.precision(i), di));
    SLattice L(ctx, di, generic_real_sl(di, rng), std::move(fin));
    std::vector<double> r2;
    EnumOptions opt;
    opt.primitive_only = true;
    scan_points(L, A, opt, [&](std::span<const i64>, std::span<const double> y) {
      double s = 0;
      for (double c : y) s += c * c;
      r2.push_back(s);
      return true;
    });
    std::sort(r2.begin(), r2.end());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double R = radius(grid[g]);
      counts[t][g] = static_cast<u64>(std::upper_bound(r2.begin(), r2.end(), R * R) - r2.begin());
    }
  });

  ExperimentReport r;
  r.columns = {"draw", "T", "count", "main_term", "error", "rel_error"};
  std::vector<double> px, py;
  std::vector<double> draw_slopes;
  u64 top_ok = 0;
  for (std::size_t t = 0; t < draws; ++t) {
    std::vector<double> lx, ly;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double main = grid[g] * fin_vol / zeta;
      double err = static_cast<double>(counts[t][g]) - main;
      r.rows.push_back({fmt_int(static_cast<i64>(t)), fmt(grid[g]), fmt_int(static_cast<i64>(counts[t][g])), fmt(main),
                        fmt(err), fmt(std::abs(err) / main)});
      if (err != 0) {
        lx.push_back(std::log(grid[g]));
        ly.push_back(std::log(std::abs(err)));
      }
      if (g + 1 == grid.size() && std::abs(err) / main < rel_tol) ++top_ok;
    }
    draw_slopes.push_back(fit_line(lx, ly).slope);
    px.insert(px.end(), lx.begin(), lx.end());
    py.insert(py.end(), ly.begin(), ly.end());
  }
  LineFit pooled = fit_line(px, py);
  double frac = static_cast<double>(top_ok) / static_cast<double>(draws);
  r.pass = frac >= pass_fraction && pooled.slope < slope_max;
  add_summary(r, "main_term_at_T_max", T_max * fin_vol / zeta);
  add_summary(r, "draws_within_rel_tol", std::to_string(top_ok) + "/" + std::to_string(draws));
  add_summary(r, "pooled_slope", pooled.slope);
  add_summary(r, "pooled_slope_se", pooled.slope_se);
  add_summary(r, "pooled_slope_95_hi", pooled.slope + 1.96 * pooled.slope_se);
  add_summary(r, "median_draw_slope", median(draw_slopes));
  add_summary(r, "slope_max", slope_max);
  return r;
}

}  // namespace sarith::xcli
