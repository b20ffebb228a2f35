#include <doctest.h>

#include <map>
#include <numeric>
#include <set>

#include "oracles.hpp"
#include "sarith/haar.hpp"
#include "sarith/primvec.hpp"

using namespace sarith;

namespace {

mpq_class qpow(long p, int k) {
  mpq_class r = 1;
  for (int i = 0; i < std::abs(k); ++i) r *= p;
  return k >= 0 ? r : mpq_class(1 / r);
}

SVector sv(const Context& c, std::vector<mpq_class> q) {
  for (auto& x : q) x.canonicalize();
  return make_svector(c, q);
}

// definition oracle: clear denominators minimally, strip S-primes from the integer gcd
mpz_class sgcd_oracle(const Context& c, const std::vector<mpq_class>& v) {
  mpz_class den = 1;
  for (const auto& x : v) den = lcm(den, x.get_den());
  mpz_class g = 0;
  for (const auto& x : v) g = gcd(g, mpz_class(x.get_num() * (den / x.get_den())));
  for (u64 p : c.primes())
    while (g % p == 0) g /= p;
  return abs(g);
}

mpq_class random_sint(const Context& c, RngStream& rng, long h) {
  mpq_class q(static_cast<long>(rng.below(static_cast<u64>(2 * h + 1))) - h);
  for (u64 p : c.primes()) {
    int k = static_cast<int>(rng.below(5)) - 2;
    q *= qpow(static_cast<long>(p), k);
  }
  q.canonicalize();
  return q;
}

mpq_class random_unit(const Context& c, RngStream& rng) {
  mpq_class u = rng.below(2) ? 1 : -1;
  for (u64 p : c.primes()) {
    int k = static_cast<int>(rng.below(7)) - 3;
    u *= qpow(static_cast<long>(p), k);
  }
  u.canonicalize();
  return u;
}

SMatrix random_gamma(const Context& c, RngStream& rng) {
  SMatrix g = SMatrix::identity(c, 2);
  for (int k = 0; k < 4; ++k) {
    mpq_class t = random_sint(c, rng, 3);
    SMatrix e = rng.below(2) ? SMatrix::from_mpq(c, 2, {1, t, 0, 1}) : SMatrix::from_mpq(c, 2, {1, 0, t, 1});
    g = e * g;
  }
  mpq_class u = random_unit(c, rng);
  return SMatrix::from_mpq(c, 2, {u, 0, 0, 1 / u}) * g;
}

}  // namespace

TEST_CASE("s_gcd examples") {
  Context c0, c5({5}), c2({2});
  CHECK(s_gcd(make_svector(c0, {3, 5})) == 1);
  CHECK(s_gcd(sv(c5, {mpq_class(6, 5), 10})) == 2);
  CHECK(sgcd_oracle(c5, {mpq_class(6, 5), 10}) == 2);
  CHECK(s_gcd(make_svector(c2, {2, 0})) == 1);
  CHECK_THROWS_AS(s_gcd(make_svector(c2, {0, 0})), Error);
}

TEST_CASE("is_primitive examples") {
  Context c0, c2({2});
  CHECK_FALSE(is_primitive(make_svector(c0, {4, 6})));
  CHECK(is_primitive(make_svector(c2, {4, 6})));
  CHECK(sgcd_oracle(c2, {4, 6}) == 1);
  CHECK_FALSE(is_primitive(make_svector(c2, {3, 9})));
  CHECK_FALSE(is_primitive(make_svector(c2, {0, 0})));
}

TEST_CASE("s_gcd agrees with the definition and is unit invariant") {
  RngStream rng(11, 0);
  for (const auto& ps : {std::vector<u64>{}, std::vector<u64>{2}, std::vector<u64>{3, 5}}) {
    Context c(ps);
    for (int i = 0; i < 300; ++i) {
      std::vector<mpq_class> v = {random_sint(c, rng, 40), random_sint(c, rng, 40), random_sint(c, rng, 40)};
      if (v[0] == 0 && v[1] == 0 && v[2] == 0) continue;
      SVector s = make_svector(c, v);
      CHECK(s_gcd(s) == sgcd_oracle(c, v));
      mpq_class u = random_unit(c, rng);
      std::vector<mpq_class> uv;
      for (const auto& x : v) uv.push_back(u * x);
      CHECK(s_gcd(make_svector(c, uv)) == s_gcd(s));
    }
  }
}

TEST_CASE("split_unit_primitive") {
  Context c2({2}), c0, c23({2, 3});
  auto a = split_unit_primitive(c2, make_svector(c2, {2, 0}));
  CHECK(a.unit.to_mpq() == 2);
  CHECK(a.w == std::vector<mpz_class>{1, 0});
  auto b = split_unit_primitive(c0, make_svector(c0, {3, 5}));
  CHECK(b.unit.to_mpq() == 1);
  CHECK(b.w == std::vector<mpz_class>{3, 5});
  auto c = split_unit_primitive(c23, sv(c23, {mpq_class(4, 3), mpq_class(2, 3)}));
  CHECK(c.unit.to_mpq() == mpq_class(2, 3));
  CHECK(c.w == std::vector<mpz_class>{2, 1});
  CHECK_THROWS_AS(split_unit_primitive(c0, make_svector(c0, {2, 4})), Error);
}

TEST_CASE("split recombines; primitivity equals unit times S-free integer primitive") {
  RngStream rng(12, 0);
  Context c({2, 3});
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<mpq_class> v = {random_sint(c, rng, 30), random_sint(c, rng, 30)};
    if (v[0] == 0 && v[1] == 0) continue;
    SVector s = make_svector(c, v);
    bool prim = is_primitive(s);
    // exhaustive search over units 2^a 3^b with |a|,|b| <= 6
    bool found = false;
    for (int a = -6; a <= 6 && !found; ++a)
      for (int b = -6; b <= 6 && !found; ++b) {
        mpq_class u = qpow(2, a) * qpow(3, b);
        mpz_class g = 0;
        bool integral = true;
        for (const auto& x : v) {
          mpq_class w = x / u;
          w.canonicalize();
          if (w.get_den() != 1) integral = false;
          g = gcd(g, w.get_num());
        }
        // gcd 1 already rules out a common factor p in S
        found = integral && g == 1;
      }
    CHECK(prim == found);
    if (prim) {
      auto sp = split_unit_primitive(c, s);
      CHECK(is_s_unit(sp.unit));
      CHECK(sp.unit.to_mpq() > 0);
      mpz_class g = 0;
      for (std::size_t k = 0; k < v.size(); ++k) {
        CHECK(mpq_class(sp.w[k]) * sp.unit.to_mpq() == v[k]);
        g = gcd(g, sp.w[k]);
      }
      CHECK(g == 1);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("bezout_complete") {
  Context c0, c2({2});
  CHECK(bezout_complete(c0, make_svector(c0, {1, 0})) == SMatrix::identity(c0, 2));
  SMatrix g = bezout_complete(c0, make_svector(c0, {2, 1}));
  CHECK(g.det2().to_mpq() == 1);
  CHECK(g * make_svector(c0, {2, 1}) == make_svector(c0, {1, 0}));
  SMatrix h = bezout_complete(c2, make_svector(c2, {2, 0}));
  CHECK(h == SMatrix::from_mpq(c2, 2, {mpq_class(1, 2), 0, 0, 2}));
  CHECK_THROWS_AS(bezout_complete(c0, make_svector(c0, {2, 4})), Error);
  CHECK_THROWS_AS(bezout_complete(c0, make_svector(c0, {1, 0, 0})), Error);
  RngStream rng(13, 0);
  Context c({3, 5});
  for (int i = 0; i < 300; ++i) {
    SVector v = make_svector(c, {random_sint(c, rng, 50), random_sint(c, rng, 50)});
    if (v.is_zero() || !is_primitive(v)) continue;
    SMatrix b = bezout_complete(c, v);
    CHECK(b.det2().to_mpq() == 1);
    CHECK(b * v == make_svector(c, {1, 0}));
  }
}

TEST_CASE("canonical_pair examples") {
  Context c0;
  auto l1 = canonical_pair(c0, make_svector(c0, {1, 0}), make_svector(c0, {5, 6}));
  CHECK(l1.ell == 5);
  CHECK(l1.n.to_mpq() == 6);
  auto l2 = canonical_pair(c0, make_svector(c0, {2, 1}), make_svector(c0, {3, 2}));
  CHECK(l2.ell == 0);
  CHECK(l2.n.to_mpq() == 1);
  auto l3 = canonical_pair(c0, make_svector(c0, {1, 2}), make_svector(c0, {1, 5}));
  CHECK(l3.ell == 1);
  CHECK(l3.n.to_mpq() == 3);
  CHECK_THROWS_AS(canonical_pair(c0, make_svector(c0, {1, 2}), make_svector(c0, {-1, -2})), Error);
}

TEST_CASE("orbit_representatives") {
  Context c0, c2({2});
  auto r6 = orbit_representatives(c0, SInteger(c0, 6));
  REQUIRE(r6.size() == 2);
  CHECK(r6[0] == SMatrix::from_mpq(c0, 2, {1, 1, 0, 6}));
  CHECK(r6[1] == SMatrix::from_mpq(c0, 2, {1, 5, 0, 6}));
  auto r4 = orbit_representatives(c2, SInteger(c2, 4));
  REQUIRE(r4.size() == 1);
  CHECK(r4[0] == SMatrix::from_mpq(c2, 2, {1, 0, 0, 4}));
  CHECK(orbit_representatives(c0, SInteger(c0, 1)).size() == 1);
  CHECK_THROWS_AS(orbit_representatives(c0, SInteger(c0, 0)), Error);
  for (long n = 1; n <= 60; ++n) CHECK(orbit_representatives(c0, SInteger(c0, n)).size() == oracle::phi_naive(static_cast<u64>(n)));
}

TEST_CASE("canonical_pair is Gamma_2 invariant") {
  RngStream rng(14, 0);
  for (const auto& ps : {std::vector<u64>{}, std::vector<u64>{2}, std::vector<u64>{3}}) {
    Context c(ps);
    int pairs = 0;
    while (pairs < 200) {
      SVector v1 = make_svector(c, {random_sint(c, rng, 9), random_sint(c, rng, 9)});
      SVector v2 = make_svector(c, {random_sint(c, rng, 9), random_sint(c, rng, 9)});
      if (v1.is_zero() || v2.is_zero() || !is_primitive(v1) || !is_primitive(v2)) continue;
      if (det_pair(v1, v2).is_zero()) continue;
      ++pairs;
      OrbitLabel l = canonical_pair(c, v1, v2);
      CHECK(gcd(l.ell, d_of(l.n)) == 1);
      CHECK(l.ell < d_of(l.n));
      for (int k = 0; k < 50; ++k) {
        SMatrix g = random_gamma(c, rng);
        CHECK(canonical_pair(c, g * v1, g * v2) == l);
      }
    }
  }
}

TEST_CASE("exhaustive small pairs hit exactly phi(d(n)) labels") {
  for (const auto& ps : {std::vector<u64>{}, std::vector<u64>{3}}) {
    Context c(ps);
    std::map<mpq_class, std::set<mpz_class>> seen;
    const long H1 = 2, H2 = 50;
    for (long a = -H1; a <= H1; ++a)
      for (long b = -H1; b <= H1; ++b) {
        if (std::gcd(a, b) != 1) continue;
        SVector v1 = make_svector(c, {a, b});
        for (long x = -H2; x <= H2; ++x)
          for (long y = 0; y <= H2; ++y) {
            long det = a * y - b * x;
            if (det <= 0 || det > 50 || std::gcd(x, y) != 1) continue;
            SInteger n(c, det);
            if (d_of(n) > 50) continue;
            auto l = canonical_pair(c, v1, make_svector(c, {x, y}));
            CHECK(l.n.to_mpq() == det);
            seen[mpq_class(det)].insert(l.ell);
          }
      }
    for (const auto& [n, labels] : seen) {
      SInteger sn(c, n);
      auto reps = orbit_representatives(c, sn);
      std::set<mpz_class> want;
      for (const auto& r : reps) want.insert(r.at(0, 1).to_mpq().get_num());
      CHECK(labels == want);
      CHECK(labels.size() == oracle::phi_naive(d_of(sn).get_ui()));
    }
  }
}

TEST_CASE("in_congruence_class") {
  Context c2({2}), c0;
  std::vector<i64> a{3, 1}, a0{1, 1}, b{4, 2}, b0{0, 0}, e{7, 5}, e0{3, 1};
  CHECK(in_congruence_class(c2, a, a0, 2));
  CHECK_FALSE(in_congruence_class(c2, b, b0, 2));
  CHECK(in_congruence_class(c2, e, e0, 4));
  CHECK_THROWS_AS(in_congruence_class(c2, e, e0, 3), Error);
  CHECK_THROWS_AS(in_congruence_class(c0, e, e0, 2), Error);
}
