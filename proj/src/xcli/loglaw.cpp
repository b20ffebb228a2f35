#include <cmath>

#include "common.hpp"

namespace sarith::xcli {

namespace {

struct Trace {
  double alpha0 = 0;
  double plateau = -INFINITY;
  double x_at_max = 0;
  std::vector<double> checkpoints;  // running max over the window up to each checkpoint
};

}  // namespace

ExperimentReport exp_loglaw(const Config& cfg, u64 seed, int threads) {
  const std::vector<u64> primes = cfg.primes();
  const Context ctx = cfg.context(primes);
  const i64 d = cfg.integer("d", 2);
  const u64 lattices = cfg.count("lattices", 200);
  const double x_max = cfg.num("x_max", 1e6);
  const double window_start = cfg.num("window_start", 1e3);
  const double lo = cfg.num("plateau_lo", 0.3), hi = cfg.num("plateau_hi", 0.6);
  const u64 grid_n = cfg.count("grid_points", 60);
  const u64 denominator_bound = cfg.count("denominator_bound", 1u << 20);
  std::vector<i64> ks = cfg.ints("finite_k", std::vector<i64>(primes.size(), 0));
  if (d != 2 && d != 3) config_error("'d' must be 2 or 3");
  if (!(window_start >= 2 && window_start < x_max)) config_error("need 2 <= window_start < x_max");
  if (ks.size() != primes.size()) config_error("'finite_k' needs one entry per prime");
  for (i64 k : ks)
    if (k < 0 || k > 20) config_error("'finite_k' entries must lie in [0, 20]");
  cfg.reject_unknown();

  const int di = static_cast<int>(d);
  const bool fast = primes.empty() && d == 2;
  std::vector<double> checkpoints;
  for (double c = window_start * 10; c < x_max; c *= 10) checkpoints.push_back(c);
  checkpoints.push_back(x_max);

  // finite parts of x are p^{-k}; prod |x_p|_p = m * prod p^k
  double fin_factor = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) fin_factor *= std::pow(static_cast<double>(primes[i]), static_cast<double>(ks[i]));

  std::vector<Trace> traces(lattices);
  parallel_for(lattices, threads, [&](std::size_t li) {
    RngStream rng(seed, stream_id(0, li));
    Trace tr;
    if (fast) {
      auto g = sample_sl2_real(rng);
      tr.alpha0 = alpha_1_real2(g.data());
      const u64 xm = static_cast<u64>(std::floor(x_max));
      std::size_t ci = 0;
      for (u64 x = static_cast<u64>(std::ceil(window_start)); x <= xm; ++x) {
        double xd = static_cast<double>(x);
        double h[4] = {g[0] + xd * g[2], g[1] + xd * g[3], g[2], g[3]};
        double v = std::log(alpha_1_real2(h)) / std::log(xd);
        if (v > tr.plateau) {
          tr.plateau = v;
          tr.x_at_max = xd;
        }
        while (ci < checkpoints.size() && (x + 1 > checkpoints[ci] || x == xm)) {
          tr.checkpoints.push_back(tr.plateau);
          ++ci;
        }
      }
    } else {
      SLattice L = di == 2 ? sample_lattice2(ctx, rng) : [&] {
        std::vector<PadicMatrix> fin;
        for (std::size_t i = 0; i < ctx.s(); ++i) fin.push_back(PadicMatrix::identity(ctx.prime(i), ctx.precision(i), di));
        return SLattice(ctx, di, generic_real_sl(di, rng), std::move(fin));
      }();
      tr.alpha0 = alpha_1(L, denominator_bound).value;
      auto grid = log_grid(window_start, x_max, grid_n);
      std::size_t ci = 0;
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        double m = std::round(grid[gi]);
        if (gi > 0 && m == std::round(grid[gi - 1])) continue;
        QSElement x;
        x.real = m;
        for (std::size_t i = 0; i < ctx.s(); ++i)
          x.finite.push_back(PadicValue::from_unit_digits(ctx.prime(i), -ks[i], 1, ctx.precision(i)));
        SLattice U = unipotent_apply(x, {{di}}, L);
        double v = std::log(alpha_1(U, denominator_bound).value) / std::log(m * fin_factor);
        if (v > tr.plateau) {
          tr.plateau = v;
          tr.x_at_max = m;
        }
        while (ci < checkpoints.size() && (grid[gi] >= checkpoints[ci] || gi + 1 == grid.size())) {
          tr.checkpoints.push_back(tr.plateau);
          ++ci;
        }
      }
    }
    while (tr.checkpoints.size() < checkpoints.size()) tr.checkpoints.push_back(tr.plateau);
    traces[li] = std::move(tr);
  });

  ExperimentReport r;
  r.columns = {"lattice", "alpha1", "plateau", "x_at_max"};
  for (double c : checkpoints) r.columns.push_back("running_max_" + fmt(c));
  std::vector<double> plateaus;
  for (std::size_t li = 0; li < lattices; ++li) {
    const Trace& tr = traces[li];
    std::vector<std::string> row = {fmt_int(static_cast<i64>(li)), fmt(tr.alpha0), fmt(tr.plateau), fmt(tr.x_at_max)};
    for (double c : tr.checkpoints) row.push_back(fmt(c));
    r.rows.push_back(std::move(row));
    plateaus.push_back(tr.plateau);
  }
  double med = median(plateaus);
  r.pass = med >= lo && med <= hi;
  add_summary(r, "median_plateau", med);
  add_summary(r, "target", 1.0 / static_cast<double>(d));
  add_summary(r, "mean_plateau", moments(plateaus).mean);
  add_summary(r, "window", fmt(window_start) + ".." + fmt(x_max));
  add_summary(r, "path", fast ? "every integer x, Gauss reduction" : "log grid, alpha_1 search");
  return r;
}

}  // namespace sarith::xcli
