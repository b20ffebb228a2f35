#include <cmath>

#include "common.hpp"
#include "sarith/analytic.hpp"
#include "sarith/haar.hpp"

namespace sarith::xcli {

ExperimentReport exp_second_moment_cone(const Config& cfg, u64 seed, int threads) {
  const u64 n = cfg.count("samples", 100000);
  const double nsigma = cfg.num("nsigma", 3.0);
  const double phi_tol = cfg.num("phi_tol", 1e-10);
  const double diag_tol = cfg.num("diag_tol", 1e-9);
  auto sets = cfg.prime_sets();
  ProductRegion base = cfg.region("region");
  if (base.d != 2) config_error("second_moment_cone needs d = 2");
  std::vector<Context> ctxs;
  std::vector<ProductRegion> regions;
  for (const auto& ps : sets) {
    ctxs.push_back(cfg.context(ps));
    ProductRegion A = base;
    std::erase_if(A.finite, [&](const auto& kv) { return !ctxs.back().index_of(kv.first); });
    try {
      validate_region(ctxs.back(), A);
    } catch (const Error& e) {
      config_error(std::string("region: ") + e.what());
    }
    regions.push_back(std::move(A));
  }
  cfg.reject_unknown();

  ExperimentReport r;
  r.columns = {"primes", "volume", "samples", "lhs", "lhs_se", "rhs", "rhs_se", "rhs_phi_term", "rhs_diag_term", "z",
               "first_moment", "first_moment_se", "first_moment_predicted", "pass"};
  int passed = 0;
  for (std::size_t si = 0; si < sets.size(); ++si) {
    const Context& ctx = ctxs[si];
    const ProductRegion& A = regions[si];
    const double zeta2 = zeta_S(ctx, 2);
    const double LS = static_cast<double>(ctx.L_S());
    const double vol = region_volume(ctx, A);
    PhiSEvaluator phi(ctx);

    // cone side: d(v) * hat f(v^{1/2} g), both moments
    std::vector<double> first(n), second(n);
    parallel_for(n, threads, [&](std::size_t i) {
      RngStream rng(seed, stream_id(2 * si, i));
      ConeSample c = sample_cone(ctx, rng);
      double x = c.lattice.cone_covolume() * static_cast<double>(primitive_count(c.lattice, A));
      first[i] = x;
      second[i] = x * x;
    });

    // region side: Phi_S(det(X, Y)) for X, Y uniform on A
    std::vector<double> phis(n);
    std::atomic<u64> degenerate{0};
    parallel_for(n, threads, [&](std::size_t i) {
      RngStream rng(seed, stream_id(2 * si + 1, i));
      QSVector X = sample_region_point(ctx, A, rng);
      QSVector Y = sample_region_point(ctx, A, rng);
      QSElement det = det_pair(ctx, X, Y);
      if (det.real == 0 || det.has_zero_component()) {
        ++degenerate;
        phis[i] = 0;
        return;
      }
      phis[i] = phi(det, phi_tol).value;
    });

    Moments m1 = moments(first), m2 = moments(second), mphi = moments(phis);
    // both sides carry the factor L_S from mu(C_S) = 1/L_S
    double scale = LS / zeta2 * vol * vol;
    double term1 = scale * mphi.mean, term1_se = scale * mphi.se;
    double term2 = diagonal_term(ctx, A, diag_tol) / (2.0 * zeta2);
    double rhs = term1 + term2;
    double comb = std::hypot(m2.se, term1_se);
    double z = comb > 0 ? (m2.mean - rhs) / comb : (m2.mean == rhs ? 0.0 : INFINITY);
    bool ok = std::abs(z) <= nsigma;
    passed += ok;
    r.rows.push_back({primes_label(ctx.primes()), fmt(vol), fmt_int(static_cast<i64>(n)), fmt(m2.mean), fmt(m2.se),
                      fmt(rhs), fmt(term1_se), fmt(term1), fmt(term2), fmt(z), fmt(m1.mean), fmt(m1.se),
                      fmt(vol / zeta2), ok ? "1" : "0"});
    add_summary(r, "degenerate_pairs_" + std::to_string(si), static_cast<double>(degenerate.load()));
  }
  r.pass = passed == static_cast<int>(sets.size());
  add_summary(r, "sets_passed", std::to_string(passed) + "/" + std::to_string(sets.size()));
  add_summary(r, "samples", static_cast<double>(n));
  add_summary(r, "nsigma", nsigma);
  return r;
}

}  // namespace sarith::xcli
