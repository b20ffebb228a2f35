// Lattice point enumeration: denominator clearing, congruence restriction, line scan.
#include <algorithm>
#include <cmath>
#include <limits>

#include "sarith/slattice.hpp"

namespace sarith {

namespace {

constexpr double kMaxCoord = 4503599627370496.0;  // 2^52

std::size_t ix(int i, int j, int d) { return static_cast<std::size_t>(i * d + j); }

int val_i64(i64 x, u64 p) {
  if (x == 0) return std::numeric_limits<int>::max();
  return valuation_u64(static_cast<u64>(x < 0 ? -x : x), p);
}

struct PrimePlan {
  u64 p = 2;
  int prec = 1;
  u64 mod = 2;
  PadicRegion region;
  PadicMatrix h;
  int Kplus = 0;
  int s = 0;     // z = p^s (H w) (M')^{-1}
  u64 minv = 1;  // (M')^{-1} mod p^prec
  bool test = false;
  int e = 0;                  // congruence w = c mod p^e
  std::vector<u64> residue;   // per coordinate
};

// Largest r with region contained in p^{-r} Z_p^d.
int region_radius_exp(const PadicRegion& R, u64 p) {
  return std::visit(
      [&](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PadicBall>) {
          return -x.k;
        } else if constexpr (std::is_same_v<T, PadicShell>) {
          return x.k;
        } else if constexpr (std::is_same_v<T, PadicCoset>) {
          int vmin = std::numeric_limits<int>::max();
          for (i64 c : x.v0) vmin = std::min(vmin, val_i64(c, p));
          return -std::min(x.k, vmin);
        } else {
          return std::max(x.t, 0);
        }
      },
      R);
}

// Coset whose representative lies in p^k Z_p^d is just a ball.
PadicRegion simplify(const PadicRegion& R, u64 p) {
  if (const auto* c = std::get_if<PadicCoset>(&R)) {
    int vmin = std::numeric_limits<int>::max();
    for (i64 x : c->v0) vmin = std::min(vmin, val_i64(x, p));
    if (vmin >= c->k) return PadicBall{c->k};
  }
  return R;
}

// valuation of z = p^s u with u mod p^prec; unknown low digits count as p^{s+prec}
long zval(u64 u, u64 p, int s, int prec) {
  if (u == 0) return static_cast<long>(s) + prec;
  return static_cast<long>(s) + valuation_u64(u, p);
}

bool coset_hit(u64 u, i64 c, u64 p, int s, int k) {
  if (s >= 0) {
    u64 m = checked_pow(p, k);
    u64 x = mulmod(checked_pow(p, std::min(s, k)) % m, u % m, m);
    return x == mod_of(c, m);
  }
  u64 m = checked_pow(p, k - s);
  u64 cc = mulmod(checked_pow(p, -s) % m, mod_of(c, m), m);
  return u % m == cc;
}

struct Bounds {
  enum Kind { Box, Ball } kind = Box;
  std::vector<double> lo, hi;  // Box
  std::vector<double> c;       // Ball (Euclidean)
  double r = 0;
};

Bounds bounding_shape(const RealRegion& R, int d) {
  Bounds b;
  std::size_t n = static_cast<std::size_t>(d);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          b.lo = x.lo;
          b.hi = x.hi;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          if (x.norm == NormKind::Sup) {
            for (std::size_t i = 0; i < n; ++i) {
              b.lo.push_back(x.center[i] - x.radius);
              b.hi.push_back(x.center[i] + x.radius);
            }
          } else {
            b.kind = Bounds::Ball;
            b.c = x.center;
            b.r = x.radius;
          }
        } else if constexpr (std::is_same_v<T, RealShell>) {
          b.kind = Bounds::Ball;
          b.c.assign(n, 0.0);
          b.r = x.r_out;
        } else {
          b.lo = {-1.0, -x.T};
          b.hi = {1.0, x.T};
        }
      },
      R);
  return b;
}

// signed slack (>= 0 inside) for the boundary tie-break
double real_slack(const RealRegion& R, std::span<const double> y) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          double s = std::numeric_limits<double>::infinity();
          for (std::size_t i = 0; i < y.size(); ++i) s = std::min({s, y[i] - x.lo[i], x.hi[i] - y[i]});
          return s;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          if (x.norm == NormKind::Sup) {
            double m = 0;
            for (std::size_t i = 0; i < y.size(); ++i) m = std::max(m, std::abs(y[i] - x.center[i]));
            return x.radius - m;
          }
          double s = 0;
          for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - x.center[i]) * (y[i] - x.center[i]);
          return x.radius - std::sqrt(s);
        } else if constexpr (std::is_same_v<T, RealShell>) {
          double s = 0;
          for (double c : y) s += c * c;
          s = std::sqrt(s);
          return std::min(s - x.r_in, x.r_out - s);
        } else {
          return std::min(x.T - std::abs(y[1]), x.psi(y[1]) - std::abs(y[0]));
        }
      },
      R);
}

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool empty() const { return lo > hi; }
};

// t with lo <= a + b t <= hi
void clip_slab(Interval& I, double a, double b, double lo, double hi) {
  if (b == 0.0) {
    if (a < lo || a > hi) I.lo = 1, I.hi = 0;
    return;
  }
  double t1 = (lo - a) / b, t2 = (hi - a) / b;
  if (t1 > t2) std::swap(t1, t2);
  I.lo = std::max(I.lo, t1);
  I.hi = std::min(I.hi, t2);
}

i64 floor_div_align(i64 x, u64 Q, u64 r) {
  // smallest t >= x with t = r mod Q
  u64 xm = mod_of(x, Q);
  u64 delta = (r + Q - xm) % Q;
  return x + static_cast<i64>(delta);
}

}  // namespace

ScanInfo scan_points(const SLattice& L, const ProductRegion& A, const EnumOptions& opt, const PointVisitor& visit) {
  const Context& ctx = L.context();
  const int d = L.dim();
  if (A.d != d) throw Error(Errc::WrongDimension, "region and lattice dimensions differ");
  validate_region(ctx, A);
  ScanInfo info;

  // finite places
  std::vector<PrimePlan> plans(ctx.s());
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    PrimePlan& pl = plans[i];
    pl.p = ctx.prime(i);
    pl.h = L.effective_finite(i);
    pl.prec = pl.h.prec;
    pl.mod = pl.h.mod;
    pl.region = simplify(A.at(pl.p), pl.p);
    int K = region_radius_exp(pl.region, pl.p) - pl.h.inv_shift;
    pl.Kplus = std::max(K, 0);
  }
  auto denominator = [&]() {
    u128 M = 1;
    for (const auto& pl : plans) {
      M *= checked_pow(pl.p, pl.Kplus);
      if (M > (u128{1} << 62)) throw Error(Errc::PrecisionExceeded, "common denominator exceeds 2^62");
    }
    return static_cast<u64>(M);
  };
  u64 M = denominator();
  if (opt.max_denominator > 0) {
    while (M > opt.max_denominator) {
      std::size_t best = 0;
      u64 bv = 1;
      for (std::size_t i = 0; i < plans.size(); ++i) {
        u64 f = checked_pow(plans[i].p, plans[i].Kplus);
        if (f > bv) bv = f, best = i;
      }
      if (bv == 1) break;
      --plans[best].Kplus;
      info.truncated = true;
      M = denominator();
    }
  }
  info.M = M;

  u128 Q = 1;
  std::vector<u64> qres(static_cast<std::size_t>(d), 0);  // CRT residues
  for (auto& pl : plans) {
    u64 pk = checked_pow(pl.p, pl.Kplus);
    u64 Mp = M / pk;
    pl.minv = invmod(Mp % pl.mod, pl.mod);
    pl.s = pl.h.shift - pl.Kplus;
    pl.residue.assign(static_cast<std::size_t>(d), 0);
    if (pl.h.compact()) {
      if (const auto* b = std::get_if<PadicBall>(&pl.region)) {
        pl.e = std::max(b->k + pl.Kplus, 0);
      } else if (const auto* sh = std::get_if<PadicShell>(&pl.region)) {
        pl.e = pl.Kplus - sh->k;
        if (pl.e < 0) return info;  // denominators too small to reach the shell
        pl.test = true;
      } else if (const auto* c = std::get_if<PadicCoset>(&pl.region)) {
        if (c->k > pl.prec) throw Error(Errc::PrecisionExceeded, "coset level beyond working precision");
        // v = Hinv v0 mod p^k and w = M v
        pl.e = c->k;
        u64 m = checked_pow(pl.p, c->k);
        for (int r = 0; r < d; ++r) {
          u64 acc = 0;
          for (int j = 0; j < d; ++j)
            acc = (acc + mulmod(pl.h.hinv(r, j) % m, mod_of(c->v0[static_cast<std::size_t>(j)], m), m)) % m;
          pl.residue[static_cast<std::size_t>(r)] = mulmod(acc, M % m, m);
        }
      } else {
        pl.test = true;
      }
    } else {
      pl.test = true;
      if (const auto* c = std::get_if<PadicCoset>(&pl.region)) {
        int need = pl.s >= 0 ? c->k : c->k - pl.s;
        int have = pl.s >= 0 ? pl.s + pl.prec : pl.prec;
        if (need > have) throw Error(Errc::PrecisionExceeded, "coset level beyond working precision");
      }
    }
    if (pl.e > 0) {
      u64 pe = checked_pow(pl.p, pl.e);
      u128 Qn = Q * pe;
      if (Qn > (u128{1} << 62)) throw Error(Errc::PrecisionExceeded, "congruence modulus exceeds 2^62");
      // combine residues: x = qres mod Q, x = res mod pe
      u64 q64 = static_cast<u64>(Q), qn = static_cast<u64>(Qn);
      u64 qinv = invmod(q64 % pe, pe);
      for (std::size_t r = 0; r < qres.size(); ++r) {
        u64 diff = (pl.residue[r] % pe + pe - qres[r] % pe) % pe;
        u64 t = mulmod(diff, qinv, pe);
        qres[r] = static_cast<u64>((static_cast<u128>(q64) * t + qres[r]) % qn);
      }
      Q = Qn;
    }
  }
  const u64 Qm = static_cast<u64>(Q);

  // real place
  const std::vector<double> G = L.effective_real();
  const std::vector<double> Gi = inverse_real(G, d);
  const bool exact = L.g_inf_exact().has_value() && !L.cone_scale().has_value();
  const Bounds B = bounding_shape(A.real, d);
  const auto* psi = std::get_if<RealPsi>(&A.real);
  const double Md = static_cast<double>(M);

  std::vector<i64> wlo(static_cast<std::size_t>(d)), whi(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    double lo = 0, hi = 0;
    if (B.kind == Bounds::Box) {
      for (int k = 0; k < d; ++k) {
        double a = Gi[ix(j, k, d)] * B.lo[static_cast<std::size_t>(k)];
        double b = Gi[ix(j, k, d)] * B.hi[static_cast<std::size_t>(k)];
        lo += std::min(a, b);
        hi += std::max(a, b);
      }
    } else {
      double c = 0, nrm = 0;
      for (int k = 0; k < d; ++k) {
        c += Gi[ix(j, k, d)] * B.c[static_cast<std::size_t>(k)];
        nrm += Gi[ix(j, k, d)] * Gi[ix(j, k, d)];
      }
      lo = c - B.r * std::sqrt(nrm);
      hi = c + B.r * std::sqrt(nrm);
    }
    lo *= Md;
    hi *= Md;
    lo -= 1e-9 * (1.0 + std::abs(lo));
    hi += 1e-9 * (1.0 + std::abs(hi));
    if (!(std::abs(lo) < kMaxCoord && std::abs(hi) < kMaxCoord))
      throw Error(Errc::UnboundedRegion, "integer scan range exceeds 2^52");
    wlo[static_cast<std::size_t>(j)] = static_cast<i64>(std::floor(lo));
    whi[static_cast<std::size_t>(j)] = static_cast<i64>(std::ceil(hi));
  }

  std::vector<PrimePlan*> tests;
  for (auto& pl : plans)
    if (pl.test) tests.push_back(&pl);

  std::vector<i64> w(static_cast<std::size_t>(d));
  std::vector<double> y(static_cast<std::size_t>(d)), a(static_cast<std::size_t>(d)), b(static_cast<std::size_t>(d)),
      scale(static_cast<std::size_t>(d));
  std::vector<mpq_class> yq;
  std::vector<u64> u(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) b[static_cast<std::size_t>(k)] = G[ix(k, 0, d)] / Md;

  auto point_ok = [&]() -> bool {
    bool zero = true;
    for (i64 c : w) zero = zero && c == 0;
    if (zero) return false;
    // real place
    double err = 0;
    for (int k = 0; k < d; ++k) {
      double s = 0, sc = 0;
      for (int j = 0; j < d; ++j) {
        double t = G[ix(k, j, d)] * static_cast<double>(w[static_cast<std::size_t>(j)]);
        s += t;
        sc += std::abs(t);
      }
      y[static_cast<std::size_t>(k)] = s / Md;
      err = std::max(err, sc / Md);
    }
    err *= 8 * std::numeric_limits<double>::epsilon();
    double slack = real_slack(A.real, y);
    if (exact && std::abs(slack) <= err + 1e-300) {
      const auto& Ge = *L.g_inf_exact();
      yq.assign(static_cast<std::size_t>(d), mpq_class(0));
      for (int k = 0; k < d; ++k) {
        for (int j = 0; j < d; ++j)
          yq[static_cast<std::size_t>(k)] += Ge[ix(k, j, d)] * mpq_class(mpz_class(static_cast<long>(w[static_cast<std::size_t>(j)])));
        yq[static_cast<std::size_t>(k)] /= mpq_class(mpz_class(static_cast<unsigned long>(M)));
      }
      if (!real_contains_exact(A.real, yq)) return false;
    } else if (!real_contains(A.real, y)) {
      return false;
    }
    // finite places
    for (PrimePlan* pl : tests) {
      const u64 md = pl->mod;
      for (int r = 0; r < d; ++r) {
        u64 acc = 0;
        for (int j = 0; j < d; ++j)
          acc = (acc + mulmod(pl->h.h(r, j), mod_of(w[static_cast<std::size_t>(j)], md), md)) % md;
        u[static_cast<std::size_t>(r)] = mulmod(acc, pl->minv, md);
      }
      bool ok = std::visit(
          [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, PadicBall>) {
              for (int r = 0; r < d; ++r)
                if (zval(u[static_cast<std::size_t>(r)], pl->p, pl->s, pl->prec) < x.k) return false;
              return true;
            } else if constexpr (std::is_same_v<T, PadicShell>) {
              long mn = std::numeric_limits<long>::max();
              for (int r = 0; r < d; ++r) mn = std::min(mn, zval(u[static_cast<std::size_t>(r)], pl->p, pl->s, pl->prec));
              return mn == -x.k;
            } else if constexpr (std::is_same_v<T, PadicCoset>) {
              for (int r = 0; r < d; ++r)
                if (!coset_hit(u[static_cast<std::size_t>(r)], x.v0[static_cast<std::size_t>(r)], pl->p, pl->s, x.k))
                  return false;
              return true;
            } else {
              long vy = zval(u[1], pl->p, pl->s, pl->prec);
              if (vy < -x.t) return false;
              auto need = x.psi.neg_log(-vy);
              if (!need) return u[0] == 0;
              return zval(u[0], pl->p, pl->s, pl->prec) >= *need;
            }
          },
          pl->region);
      if (!ok) return false;
    }
    if (opt.primitive_only) {
      u64 g = 0;
      for (i64 c : w) g = gcd_u64(g, static_cast<u64>(c < 0 ? -c : c));
      if (!ctx.s_smooth(g)) return false;
    }
    return true;
  };

  // outer odometer over coordinates 1..d-1, inner analytic interval on coordinate 0
  for (int j = 1; j < d; ++j) {
    w[static_cast<std::size_t>(j)] = floor_div_align(wlo[static_cast<std::size_t>(j)], Qm, qres[static_cast<std::size_t>(j)]);
    if (w[static_cast<std::size_t>(j)] > whi[static_cast<std::size_t>(j)]) return info;
  }
  while (true) {
    for (int k = 0; k < d; ++k) {
      double s = 0;
      for (int j = 1; j < d; ++j) s += G[ix(k, j, d)] * static_cast<double>(w[static_cast<std::size_t>(j)]);
      a[static_cast<std::size_t>(k)] = s / Md;
    }
    Interval I;
    I.lo = static_cast<double>(wlo[0]);
    I.hi = static_cast<double>(whi[0]);
    if (B.kind == Bounds::Box) {
      for (int k = 0; k < d && !I.empty(); ++k)
        clip_slab(I, a[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(k)], B.lo[static_cast<std::size_t>(k)],
                  B.hi[static_cast<std::size_t>(k)]);
      // psi region with y_1 constant along the inner line: clip y_0 to the psi band
      if (psi && b[1] == 0.0 && !I.empty()) {
        double w0 = psi->psi(a[1]) * (1.0 + 1e-12);
        clip_slab(I, a[0], b[0], -w0, w0);
      }
    } else {
      double bb = 0, bc = 0, cc = 0;
      for (int k = 0; k < d; ++k) {
        double ac = a[static_cast<std::size_t>(k)] - B.c[static_cast<std::size_t>(k)];
        bb += b[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k)];
        bc += b[static_cast<std::size_t>(k)] * ac;
        cc += ac * ac;
      }
      double disc = bc * bc - bb * (cc - B.r * B.r);
      if (disc < 0) {
        // allow rounding at tangency
        if (disc < -1e-12 * (bc * bc + bb * B.r * B.r) - 1e-300) I.lo = 1, I.hi = 0;
        else disc = 0;
      }
      if (!I.empty()) {
        double sq = std::sqrt(disc);
        I.lo = std::max(I.lo, (-bc - sq) / bb);
        I.hi = std::min(I.hi, (-bc + sq) / bb);
      }
    }
    if (!I.empty()) {
      double lo = I.lo - 1e-9 * (1.0 + std::abs(I.lo));
      double hi = I.hi + 1e-9 * (1.0 + std::abs(I.hi));
      i64 t0 = floor_div_align(static_cast<i64>(std::ceil(lo)), Qm, qres[0]);
      i64 t1 = static_cast<i64>(std::floor(hi));
      for (i64 t = t0; t <= t1; t += static_cast<i64>(Qm)) {
        w[0] = t;
        if (!point_ok()) continue;
        ++info.visited;
        if (!visit(w, y)) return info;
      }
    }
    // advance odometer
    int j = 1;
    for (; j < d; ++j) {
      auto sj = static_cast<std::size_t>(j);
      w[sj] += static_cast<i64>(Qm);
      if (w[sj] <= whi[sj]) break;
      w[sj] = floor_div_align(wlo[sj], Qm, qres[sj]);
    }
    if (j == d) break;
  }
  return info;
}

std::vector<SVector> enumerate_points(const SLattice& L, const ProductRegion& A, bool primitive_only) {
  std::vector<std::vector<i64>> pts;
  EnumOptions opt;
  opt.primitive_only = primitive_only;
  ScanInfo info = scan_points(L, A, opt, [&](std::span<const i64> w, std::span<const double>) {
    pts.emplace_back(w.begin(), w.end());
    return true;
  });
  std::sort(pts.begin(), pts.end());
  std::vector<SVector> out;
  out.reserve(pts.size());
  mpq_class Mq(mpz_class(static_cast<unsigned long>(info.M)));
  for (const auto& w : pts) {
    std::vector<mpq_class> q;
    for (i64 c : w) q.push_back(mpq_class(mpz_class(static_cast<long>(c))) / Mq);
    out.push_back(make_svector(L.context(), q));
  }
  return out;
}

u64 primitive_count(const SLattice& L, const ProductRegion& A) {
  EnumOptions opt;
  opt.primitive_only = true;
  return scan_points(L, A, opt, [](std::span<const i64>, std::span<const double>) { return true; }).visited;
}

u64 all_count(const SLattice& L, const ProductRegion& A) {
  return scan_points(L, A, EnumOptions{}, [](std::span<const i64>, std::span<const double>) { return true; }).visited;
}

bool avoids_primitive(const SLattice& L, const ProductRegion& A) {
  EnumOptions opt;
  opt.primitive_only = true;
  return scan_points(L, A, opt, [](std::span<const i64>, std::span<const double>) { return false; }).visited == 0;
}

// ---- alpha_1 ----

double alpha_1_real2(const double g[4]) {
  // columns b1 = (g0, g2), b2 = (g1, g3)
  double x1 = g[0], y1 = g[2], x2 = g[1], y2 = g[3];
  double n1 = x1 * x1 + y1 * y1, n2 = x2 * x2 + y2 * y2;
  if (n2 < n1) {
    std::swap(x1, x2);
    std::swap(y1, y2);
    std::swap(n1, n2);
  }
  for (int it = 0; it < 200; ++it) {
    double mu = std::nearbyint((x1 * x2 + y1 * y2) / n1);
    if (mu == 0.0) break;
    x2 -= mu * x1;
    y2 -= mu * y1;
    n2 = x2 * x2 + y2 * y2;
    if (n2 >= n1) break;
    std::swap(x1, x2);
    std::swap(y1, y2);
    std::swap(n1, n2);
  }
  return 1.0 / std::sqrt(n1);
}

Alpha1Result alpha_1(const SLattice& L, u64 denominator_bound) {
  const Context& ctx = L.context();
  const int d = L.dim();
  Alpha1Result res;
  ProductRegion A = ball_region(d, 1.0);
  for (std::size_t i = 0; i < ctx.s(); ++i) A.finite[ctx.prime(i)] = PadicShell{0};
  EnumOptions opt;
  opt.max_denominator = denominator_bound;
  // start from the shortest column image
  const auto G = L.effective_real();
  double r = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d; ++j) {
    double s = 0;
    for (int k = 0; k < d; ++k) s += G[ix(k, j, d)] * G[ix(k, j, d)];
    r = std::min(r, std::sqrt(s));
  }
  r = std::max(r, 1e-6);
  for (int it = 0; it < 80; ++it) {
    std::get<RealBall>(A.real).radius = r;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> wit;
    ScanInfo info = scan_points(L, A, opt, [&](std::span<const i64>, std::span<const double> y) {
      double s = 0;
      for (double c : y) s += c * c;
      s = std::sqrt(s);
      if (s < best) {
        best = s;
        wit.assign(y.begin(), y.end());
      }
      return true;
    });
    res.search_radius = r;
    if (info.visited > 0) {
      res.value = 1.0 / best;
      res.witness = wit;
      res.certified = !info.truncated;
      return res;
    }
    r *= 2;
  }
  return res;
}

// ---- diagonal term ----

namespace {

double real_dilate_overlap(const RealRegion& R, int d, double k) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          double v = 1;
          for (std::size_t i = 0; i < x.lo.size(); ++i) {
            double a = x.lo[i] / k, b = x.hi[i] / k;
            if (a > b) std::swap(a, b);
            double lo = std::max(x.lo[i], a), hi = std::min(x.hi[i], b);
            if (hi <= lo) return 0.0;
            v *= hi - lo;
          }
          return v;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          for (double c : x.center)
            if (c != 0.0) throw Error(Errc::UnsupportedShape, "diagonal_term needs centred balls");
          RealBall b = x;
          b.radius = std::min(x.radius, x.radius / std::abs(k));
          return real_volume(b, d);
        } else if constexpr (std::is_same_v<T, RealShell>) {
          double ak = std::abs(k);
          double lo = std::max(x.r_in, x.r_in / ak), hi = std::min(x.r_out, x.r_out / ak);
          if (hi <= lo) return 0.0;
          return real_volume(RealShell{lo, hi}, d);
        } else {
          throw Error(Errc::UnsupportedShape, "diagonal_term does not support psi regions");
        }
      },
      R);
}

// vol {x in R : k x in R} with k = sign * prod q^{a_q}; a = exponent of p in k
double padic_dilate_overlap(const PadicRegion& R, u64 p, int d, int a, const mpq_class& k) {
  double pd = std::pow(static_cast<double>(p), d);
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PadicBall>) {
          return std::pow(pd, -std::max(x.k, x.k - a));
        } else if constexpr (std::is_same_v<T, PadicShell>) {
          return a == 0 ? padic_volume(x, p, d) : 0.0;
        } else if constexpr (std::is_same_v<T, PadicCoset>) {
          // x + p^k and k^{-1} v0 + p^{k - a}
          int coarse = std::min(x.k, x.k - a);
          for (i64 c : x.v0) {
            mpq_class diff = mpq_class(mpz_class(static_cast<long>(c))) * (1 - 1 / k);
            auto v = padic_valuation(diff, p);
            if (v && *v < coarse) return 0.0;
          }
          return std::pow(pd, -std::max(x.k, x.k - a));
        } else {
          throw Error(Errc::UnsupportedShape, "diagonal_term does not support psi regions");
        }
      },
      R);
}

}  // namespace

double diagonal_term(const Context& ctx, const ProductRegion& A, double tol) {
  validate_region(ctx, A);
  if (!(tol > 0)) throw Error(Errc::InvalidArgument, "tol must be positive");
  const std::size_t s = ctx.s();
  const double vol = region_volume(ctx, A);
  std::vector<PadicRegion> parts;
  for (std::size_t i = 0; i < s; ++i) parts.push_back(A.at(ctx.prime(i)));

  auto term = [&](const std::vector<int>& a, int sign) {
    mpq_class k = sign;
    double kr = sign;
    for (std::size_t i = 0; i < s; ++i) {
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), ctx.prime(i), static_cast<unsigned long>(std::abs(a[i])));
      if (a[i] >= 0) k *= pk;
      else k /= pk;
      kr *= std::pow(static_cast<double>(ctx.prime(i)), a[i]);
    }
    double v = real_dilate_overlap(A.real, A.d, kr);
    for (std::size_t i = 0; i < s && v > 0; ++i) v *= padic_dilate_overlap(parts[i], ctx.prime(i), A.d, a[i], k);
    return v;
  };

  double total = term(std::vector<int>(s, 0), 1) + term(std::vector<int>(s, 0), -1);
  if (s == 0) return total;
  // shells |a|_inf = R in exponent space; each summand is at most vol * H(k)^{-d}
  for (int R = 1; R < 4000; ++R) {
    double shell = 0, bound = 0;
    std::vector<int> a(s, -R);
    while (true) {
      int mx = 0;
      for (int c : a) mx = std::max(mx, std::abs(c));
      if (mx == R) {
        shell += term(a, 1) + term(a, -1);
        double logH = 0;
        for (std::size_t i = 0; i < s; ++i) logH += std::abs(a[i]) * std::log(static_cast<double>(ctx.prime(i)));
        // height of a unit: product of the parts exceeding 1 (product formula: half the log sum)
        bound += 2 * vol * std::exp(-A.d * 0.5 * logH);
      }
      std::size_t t = 0;
      for (; t < s; ++t) {
        if (++a[t] <= R) break;
        a[t] = -R;
      }
      if (t == s) break;
    }
    total += shell;
    if (bound < tol * 1e-2) break;
  }
  return total;
}

}  // namespace sarith
