#include "sarith/primvec.hpp"

#include <algorithm>

namespace sarith {

bool SVector::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const SInteger& c) { return c.is_zero(); });
}

std::vector<mpq_class> SVector::to_mpq() const {
  std::vector<mpq_class> r;
  for (const auto& c : coords) r.push_back(c.to_mpq());
  return r;
}

SVector make_svector(const Context& ctx, const std::vector<mpq_class>& q) {
  SVector v;
  for (const auto& x : q) v.coords.emplace_back(ctx, x);
  return v;
}

SVector make_svector(const Context& ctx, std::initializer_list<long> q) {
  SVector v;
  for (long x : q) v.coords.emplace_back(ctx, x);
  return v;
}

SMatrix SMatrix::identity(const Context& ctx, int n) {
  SMatrix m;
  m.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.e.emplace_back(ctx, i == j ? 1L : 0L);
  return m;
}

SMatrix SMatrix::from_mpq(const Context& ctx, int n, const std::vector<mpq_class>& rowmajor) {
  if (rowmajor.size() != static_cast<std::size_t>(n * n)) throw Error(Errc::WrongDimension, "matrix size");
  SMatrix m;
  m.n = n;
  for (const auto& q : rowmajor) m.e.emplace_back(ctx, q);
  return m;
}

SInteger SMatrix::det2() const {
  if (n != 2) throw Error(Errc::WrongDimension, "det2 on non 2x2 matrix");
  return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
}

SMatrix SMatrix::inverse2() const {
  SInteger di = det2().unit_inverse();
  SMatrix r = *this;
  r.at(0, 0) = di * at(1, 1);
  r.at(1, 1) = di * at(0, 0);
  r.at(0, 1) = -(di * at(0, 1));
  r.at(1, 0) = -(di * at(1, 0));
  return r;
}

SMatrix operator*(const SMatrix& a, const SMatrix& b) {
  SMatrix r = a;
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) {
      SInteger s = a.at(i, 0) * b.at(0, j);
      for (int k = 1; k < a.n; ++k) s = s + a.at(i, k) * b.at(k, j);
      r.at(i, j) = s;
    }
  return r;
}

SVector operator*(const SMatrix& a, const SVector& v) {
  if (v.dim() != a.n) throw Error(Errc::WrongDimension, "matrix-vector size");
  SVector r;
  for (int i = 0; i < a.n; ++i) {
    SInteger s = a.at(i, 0) * v.coords[0];
    for (int k = 1; k < a.n; ++k) s = s + a.at(i, k) * v.coords[static_cast<std::size_t>(k)];
    r.coords.push_back(s);
  }
  return r;
}

mpz_class s_gcd(const SVector& v) {
  if (v.is_zero()) throw Error(Errc::ZeroVector, "s_gcd of the zero vector");
  // numerators are already coprime to S, so the N_S-part of the cleared gcd is their gcd
  mpz_class g = 0;
  for (const auto& c : v.coords) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.numerator().get_mpz_t());
  return g;
}

bool is_primitive(const SVector& v) { return !v.is_zero() && s_gcd(v) == 1; }

UnitSplit split_unit_primitive(const Context& ctx, const SVector& v) {
  if (!is_primitive(v)) throw Error(Errc::NotPrimitive, "split_unit_primitive: vector not primitive");
  std::vector<int> t(ctx.s(), 0);
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    bool first = true;
    for (const auto& c : v.coords) {
      if (c.is_zero()) continue;
      t[i] = first ? c.exponents()[i] : std::max(t[i], c.exponents()[i]);
      first = false;
    }
  }
  mpq_class u = 1;
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), ctx.prime(i), static_cast<unsigned long>(std::abs(t[i])));
    if (t[i] > 0) u /= pk;
    else u *= pk;
  }
  UnitSplit r{SInteger(ctx, u), {}};
  for (const auto& c : v.coords) {
    mpq_class w = c.to_mpq() / u;
    w.canonicalize();
    r.w.push_back(w.get_num());
  }
  return r;
}

SMatrix bezout_complete(const Context& ctx, const SVector& v) {
  if (v.dim() != 2) throw Error(Errc::WrongDimension, "bezout_complete is implemented for d = 2");
  UnitSplit sp = split_unit_primitive(ctx, v);
  mpz_class g, x, y;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), sp.w[0].get_mpz_t(), sp.w[1].get_mpz_t());
  if (g != 1) throw Error(Errc::NotPrimitive, "integer part not primitive");
  mpq_class u = sp.unit.to_mpq();
  // diag(1/u, u) * [[x, y], [-b, a]]
  return SMatrix::from_mpq(ctx, 2,
                           {mpq_class(x) / u, mpq_class(y) / u, mpq_class(-sp.w[1]) * u, mpq_class(sp.w[0]) * u});
}

SInteger det_pair(const SVector& v1, const SVector& v2) {
  if (v1.dim() != 2 || v2.dim() != 2) throw Error(Errc::WrongDimension, "det_pair needs d = 2");
  return v1.coords[0] * v2.coords[1] - v1.coords[1] * v2.coords[0];
}

mpz_class d_of(const SInteger& n) { return abs(n.numerator()); }

OrbitLabel canonical_pair(const Context& ctx, const SVector& v1, const SVector& v2) {
  if (v1.dim() != 2 || v2.dim() != 2) throw Error(Errc::WrongDimension, "canonical_pair needs d = 2");
  if (!is_primitive(v1) || !is_primitive(v2)) throw Error(Errc::NotPrimitive, "canonical_pair: non-primitive input");
  SInteger n = det_pair(v1, v2);
  if (n.is_zero()) throw Error(Errc::DependentPair, "canonical_pair: determinant zero");
  SMatrix g = bezout_complete(ctx, v1);
  SVector w = g * v2;
  if (w.coords[1] != n) throw Error(Errc::InvalidArgument, "internal: Bezout completion lost the determinant");
  mpz_class m = d_of(n);
  OrbitLabel lab{n, 0};
  if (m == 1) return lab;
  // Z_S / n Z_S = Z / d(n): y = num * prod p^{-k} with every p invertible mod m
  const SInteger& y = w.coords[0];
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), y.numerator().get_mpz_t(), m.get_mpz_t());
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    int k = y.exponents()[i];
    if (k == 0) continue;
    mpz_class pk, pz = static_cast<unsigned long>(ctx.prime(i));
    mpz_powm_ui(pk.get_mpz_t(), pz.get_mpz_t(), static_cast<unsigned long>(std::abs(k)), m.get_mpz_t());
    if (k > 0) mpz_invert(pk.get_mpz_t(), pk.get_mpz_t(), m.get_mpz_t());
    r = r * pk % m;
  }
  lab.ell = r;
  return lab;
}

std::vector<SMatrix> orbit_representatives(const Context& ctx, const SInteger& n) {
  if (n.is_zero()) throw Error(Errc::ZeroDeterminant, "orbit_representatives: n = 0");
  mpz_class m = d_of(n);
  if (!m.fits_ulong_p() || m > 100000000) throw Error(Errc::InvalidArgument, "d(n) too large to list");
  u64 mm = m.get_ui();
  std::vector<SMatrix> out;
  for (u64 l = 0; l < mm; ++l) {
    if (gcd_u64(l, mm) != 1) continue;
    SMatrix j = SMatrix::identity(ctx, 2);
    j.at(0, 1) = SInteger(ctx, mpq_class(static_cast<unsigned long>(l)));
    j.at(1, 1) = n;
    out.push_back(std::move(j));
  }
  return out;
}

bool in_congruence_class(const Context& ctx, std::span<const i64> v, std::span<const i64> v0, u64 N) {
  if (N == 0 || !ctx.s_smooth(N)) throw Error(Errc::BadModulus, "modulus must be supported on S");
  if (v.size() != v0.size()) throw Error(Errc::WrongDimension, "congruence class dimension mismatch");
  u64 g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (mod_of(v[i], N) != mod_of(v0[i], N)) return false;
    g = gcd_u64(g, static_cast<u64>(v[i] < 0 ? -v[i] : v[i]));
  }
  return g == 1;
}

}  // namespace sarith
