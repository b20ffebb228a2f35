#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace sarith::xcli {

namespace {

template <class Psi>
typename Psi::Kind psi_kind(const std::string& s) {
  if (s == "power") return Psi::Kind::Power;
  if (s == "zero_beyond_one") return Psi::Kind::ZeroBeyondOne;
  config_error("psi kind must be 'power' or 'zero_beyond_one'");
}

}  // namespace

ExperimentReport exp_kg(const Config& cfg, u64 seed, int threads) {
  const std::vector<u64> primes = cfg.primes();
  const Context ctx = cfg.context(primes);
  PsiFunction psi;
  psi.kind = psi_kind<PsiFunction>(cfg.str("psi_kind", "power"));
  psi.exponent = cfg.num("psi_exponent", 1.0);
  PsiFunctionP psi_p;
  psi_p.kind = psi_kind<PsiFunctionP>(cfg.str("psi_p_kind", "power"));
  psi_p.exponent = cfg.num("psi_p_exponent", 1.0);
  const i64 t = cfg.integer("t", 4);
  const double T = cfg.num("T", 1e5);
  const double T_min = cfg.num("T_min", 10.0);
  const u64 draws = cfg.count("draws", 20);
  const u64 grid_n = cfg.count("grid_points", 10);
  const double lo = cfg.num("ratio_lo", 0.9), hi = cfg.num("ratio_hi", 1.1);
  const double pass_fraction = cfg.num("pass_fraction", 0.9);
  const double min_growth = cfg.num("min_growth", 1.5);
  if (!(T_min >= 1 && T_min <= T)) config_error("need 1 <= T_min <= T");
  if (t < 0 || t > 30) config_error("'t' must lie in [0, 30]");
  if (psi.exponent < 0 || psi_p.exponent < 0) config_error("psi exponents must be non-negative");
  cfg.reject_unknown();

  const bool real_only = primes.empty();
  ProductRegion A;
  A.d = 2;
  A.real = RealPsi{psi, T};
  for (u64 p : primes) A.finite[p] = PadicPsi{psi_p, static_cast<int>(t)};
  const auto grid = log_grid(T_min, T, grid_n);
  const double zeta = zeta_S(ctx, 2);
  const double fin_vol = region_volume(ctx, A) / real_volume(A.real, 2);

  // normalizers recomputed here: 2 sum_{1<=q<=T} psi(q) / zeta(2) and V_psi(T) / zeta_S(2)
  std::vector<double> cor_norm(grid.size()), full_pred(grid.size());
  {
    double s = 0;
    std::size_t g = 0;
    u64 qmax = static_cast<u64>(std::floor(T));
    for (u64 q = 1; q <= qmax && g < grid.size(); ++q) {
      s += psi(static_cast<double>(q));
      while (g < grid.size() && (q == qmax || static_cast<double>(q + 1) > grid[g])) {
        cor_norm[g++] = 2.0 * s / zeta;
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) full_pred[i] = 4.0 * psi.integral(grid[i]) * fin_vol / zeta;
  }
  if (full_pred.back() < min_growth * full_pred.front())
    throw Error(Errc::DivergenceCheckFailed,
                "psi mass grows by a factor " + fmt(full_pred.back() / full_pred.front()) + " over the T grid");

  std::vector<std::vector<u64>> cor(draws, std::vector<u64>(grid.size())), full = cor;
  parallel_for(draws, threads, [&](std::size_t k) {
    RngStream rng(seed, stream_id(0, k));
    double x = rng.uniform();
    std::vector<PadicMatrix> fin;
    for (std::size_t i = 0; i < ctx.s(); ++i) {
      u64 m = ctx.modulus(i);
      u64 xp = rng.below(m);
      fin.push_back(PadicMatrix::from_sl(ctx.prime(i), ctx.precision(i), 2, {1, xp, 0, 1}));
    }
    SLattice L(ctx, 2, {1.0, x, 0.0, 1.0}, std::move(fin));
    std::vector<double> q_cor, q_all;
    EnumOptions opt;
    opt.primitive_only = true;
    scan_points(L, A, opt, [&](std::span<const i64>, std::span<const double> y) {
      q_all.push_back(std::abs(y[1]));
      if (y[1] >= 1.0) q_cor.push_back(y[1]);
      return true;
    });
    std::sort(q_cor.begin(), q_cor.end());
    std::sort(q_all.begin(), q_all.end());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      cor[k][g] = static_cast<u64>(std::upper_bound(q_cor.begin(), q_cor.end(), grid[g]) - q_cor.begin());
      full[k][g] = static_cast<u64>(std::upper_bound(q_all.begin(), q_all.end(), grid[g]) - q_all.begin());
    }
  });

  ExperimentReport r;
  r.columns = {"draw", "T", "count_q_pos", "normalizer", "ratio", "count_all", "predicted_all", "ratio_all"};
  std::vector<double> terminal;
  u64 ok = 0;
  for (std::size_t k = 0; k < draws; ++k) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double rc = static_cast<double>(cor[k][g]) / cor_norm[g];
      double rf = static_cast<double>(full[k][g]) / full_pred[g];
      r.rows.push_back({fmt_int(static_cast<i64>(k)), fmt(grid[g]), fmt_int(static_cast<i64>(cor[k][g])),
                        fmt(cor_norm[g]), real_only ? fmt(rc) : "nan", fmt_int(static_cast<i64>(full[k][g])),
                        fmt(full_pred[g]), fmt(rf)});
    }
    double term = real_only ? static_cast<double>(cor[k].back()) / cor_norm.back()
                            : static_cast<double>(full[k].back()) / full_pred.back();
    terminal.push_back(term);
    if (term >= lo && term <= hi) ++ok;
  }
  double frac = static_cast<double>(ok) / static_cast<double>(draws);
  r.pass = frac >= pass_fraction;
  Moments m = moments(terminal);
  add_summary(r, "ratio_kind", real_only ? "q>=1 count / (2 sum psi / zeta(2))" : "all / (V_psi / zeta_S(2))");
  add_summary(r, "draws_in_band", std::to_string(ok) + "/" + std::to_string(draws));
  add_summary(r, "mean_terminal_ratio", m.mean);
  add_summary(r, "sd_terminal_ratio", m.sd);
  add_summary(r, "median_terminal_ratio", median(terminal));
  add_summary(r, "expected_terminal_count", real_only ? cor_norm.back() : full_pred.back());
  return r;
}

}  // namespace sarith::xcli
