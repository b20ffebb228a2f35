#include "sarith/haar.hpp"

#include <cmath>
#include <numbers>

namespace sarith {

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    u64 p0 = static_cast<u64>(M0) * c[0];
    u64 p1 = static_cast<u64>(M1) * c[2];
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += W0;
    k[1] += W1;
  }
  return c;
}

void RngStream::refill() {
  std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  buf_ = philox4x32_10(ctr, key);
  ++index_;
  pos_ = 0;
}

std::uint32_t RngStream::next_u32() {
  if (pos_ == 4) refill();
  return buf_[static_cast<std::size_t>(pos_++)];
}

u64 RngStream::next_u64() {
  u64 lo = next_u32();
  u64 hi = next_u32();
  return (hi << 32) | lo;
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RngStream::uniform_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

u64 RngStream::below(u64 n) {
  if (n == 0) throw Error(Errc::InvalidArgument, "below(0)");
  u64 limit = ~u64{0} - (~u64{0} % n);
  while (true) {
    u64 x = next_u64();
    if (x < limit) return x % n;
  }
}

Sl2Sample sample_sl2_real_detail(RngStream& rng) {
  Sl2Sample s;
  const double h = std::sqrt(3.0) / 2.0;
  while (true) {
    ++s.proposals;
    double x = rng.uniform() - 0.5;
    double y = h / rng.uniform_pos();
    if (x * x + y * y >= 1.0) {
      s.x = x;
      s.y = y;
      break;
    }
  }
  s.theta = 2.0 * std::numbers::pi * rng.uniform();
  // g = (n_x a_y k_theta)^{-1} = k_{-theta} a_y^{-1} n_{-x}
  double c = std::cos(s.theta), sn = std::sin(s.theta);
  double ry = std::sqrt(s.y);
  // a_y^{-1} n_{-x} = [[1/ry, -x/ry], [0, ry]]
  double m00 = 1.0 / ry, m01 = -s.x / ry, m11 = ry;
  // k_{-theta} = [[c, s], [-s, c]]
  s.g = {c * m00, c * m01 + sn * m11, -sn * m00, -sn * m01 + c * m11};
  return s;
}

std::array<double, 4> sample_sl2_real(RngStream& rng) { return sample_sl2_real_detail(rng).g; }

std::vector<u64> sample_sld_zp(u64 p, int d, int m, RngStream& rng) {
  if (m < 1) throw Error(Errc::InvalidArgument, "level must be >= 1");
  if (d < 1) throw Error(Errc::WrongDimension, "dimension must be >= 1");
  const std::size_t n = static_cast<std::size_t>(d * d);
  std::vector<u64> A(n);
  u64 det = 0;
  do {
    for (auto& a : A) a = rng.below(p);
    det = det_mod(A, d, p);
  } while (det == 0);
  u64 di = invmod(det, p);
  for (int i = 0; i < d; ++i) A[static_cast<std::size_t>(i * d)] = mulmod(A[static_cast<std::size_t>(i * d)], di, p);
  u64 pk = p;
  for (int k = 1; k < m; ++k) {
    u64 pk1 = checked_pow(p, k + 1);
    u64 dt = det_mod(A, d, pk1);
    // need tr(adj(A) B) = (1 - det A) / p^k mod p
    u64 rhs = ((1 + pk1 - dt) % pk1) / pk % p;
    std::vector<u64> adj = adjugate_mod(A, d, p);
    std::vector<u64> B(n);
    for (auto& b : B) b = rng.below(p);
    // coefficient of B[i][j] is adj[j][i]; solve for the last usable entry
    std::size_t fi = n;
    for (std::size_t t = n; t-- > 0;) {
      std::size_t i = t / static_cast<std::size_t>(d), j = t % static_cast<std::size_t>(d);
      if (adj[j * static_cast<std::size_t>(d) + i] % p != 0) {
        fi = t;
        break;
      }
    }
    if (fi == n) throw Error(Errc::InvalidArgument, "internal: adjugate vanishes mod p");
    std::size_t fi_i = fi / static_cast<std::size_t>(d), fi_j = fi % static_cast<std::size_t>(d);
    u64 acc = 0;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == fi) continue;
      std::size_t i = t / static_cast<std::size_t>(d), j = t % static_cast<std::size_t>(d);
      acc = (acc + adj[j * static_cast<std::size_t>(d) + i] * B[t]) % p;
    }
    u64 coef = adj[fi_j * static_cast<std::size_t>(d) + fi_i] % p;
    B[fi] = mulmod((rhs + p - acc) % p, invmod(coef, p), p);
    for (std::size_t t = 0; t < n; ++t) A[t] = (A[t] + pk * B[t]) % pk1;
    pk = pk1;
  }
  return A;
}

SLattice sample_lattice2(const Context& ctx, RngStream& rng) {
  auto g = sample_sl2_real(rng);
  std::vector<PadicMatrix> fin;
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    u64 p = ctx.prime(i);
    int m = ctx.precision(i);
    fin.push_back(PadicMatrix::from_sl(p, m, 2, sample_sld_zp(p, 2, m, rng)));
  }
  return SLattice(ctx, 2, std::vector<double>(g.begin(), g.end()), std::move(fin));
}

ConeSample sample_cone(const Context& ctx, RngStream& rng) {
  SLattice L = sample_lattice2(ctx, rng);
  QSElement v;
  v.real = rng.uniform_pos();
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    u64 p = ctx.prime(i);
    int m = ctx.precision(i);
    u64 mod = ctx.modulus(i), Lp = ctx.L_p(i);
    u64 u = 1 + Lp * rng.below(mod / Lp);
    v.finite.push_back(PadicValue::from_unit_digits(p, 0, u, m));
  }
  SLattice C = L.with_cone(v);
  return ConeSample{std::move(C), std::move(v)};
}

QSVector sample_region_point(const Context& ctx, const ProductRegion& A, RngStream& rng) {
  validate_region(ctx, A);
  const std::size_t d = static_cast<std::size_t>(A.d);
  QSVector out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          for (std::size_t i = 0; i < d; ++i) out.real.push_back(rng.uniform(x.lo[i], x.hi[i]));
        } else if constexpr (std::is_same_v<T, RealBall>) {
          if (x.norm == NormKind::Sup) {
            for (std::size_t i = 0; i < d; ++i) out.real.push_back(x.center[i] + x.radius * rng.uniform(-1.0, 1.0));
            return;
          }
          std::vector<double> z(d);
          while (true) {
            double s = 0;
            for (auto& c : z) {
              c = rng.uniform(-1.0, 1.0);
              s += c * c;
            }
            if (s <= 1.0) break;
          }
          for (std::size_t i = 0; i < d; ++i) out.real.push_back(x.center[i] + x.radius * z[i]);
        } else {
          throw Error(Errc::UnsupportedShape, "sample_region_point: real part must be a box or ball");
        }
      },
      A.real);
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    u64 p = ctx.prime(i);
    int m = ctx.precision(i);
    u64 mod = ctx.modulus(i);
    PadicRegion R = A.at(p);
    std::vector<PadicValue> comp;
    for (std::size_t j = 0; j < d; ++j) {
      mpq_class digits(mpz_class(static_cast<unsigned long>(rng.below(mod))));
      mpz_class pk;
      if (const auto* b = std::get_if<PadicBall>(&R)) {
        mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(std::abs(b->k)));
        mpq_class q = digits;
        if (b->k >= 0) q *= pk;
        else q /= pk;
        comp.push_back(PadicValue::from_rational(q, p, m));
      } else if (const auto* c = std::get_if<PadicCoset>(&R)) {
        mpz_ui_pow_ui(pk.get_mpz_t(), p, static_cast<unsigned long>(std::abs(c->k)));
        mpq_class q = digits;
        if (c->k >= 0) q *= pk;
        else q /= pk;
        q += mpq_class(mpz_class(static_cast<long>(c->v0[j])));
        comp.push_back(PadicValue::from_rational(q, p, m));
      } else {
        throw Error(Errc::UnsupportedShape, "sample_region_point: finite parts must be balls or cosets");
      }
    }
    out.finite.push_back(std::move(comp));
  }
  return out;
}

}  // namespace sarith
