#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sarith/core.hpp"
#include "sarith/haar.hpp"

using namespace sarith;

TEST_CASE("padic valuation") {
  CHECK(padic_valuation(mpq_class(12), 2) == 2);
  CHECK_FALSE(padic_valuation(mpq_class(0), 5).has_value());
  CHECK(padic_valuation(mpq_class(9, 50), 5) == -2);
  CHECK(oracle::valuation(9, 50, 5) == -2);
  RngStream rng(1, 0);
  for (int i = 0; i < 500; ++i) {
    long n = static_cast<long>(rng.below(1000000)) + 1, d = static_cast<long>(rng.below(1000000)) + 1;
    for (u64 p : {2u, 3u, 5u, 7u}) {
      mpq_class q(n, d);
      q.canonicalize();
      CHECK(padic_valuation(q, p) == oracle::valuation(n, d, static_cast<long long>(p)));
    }
  }
}

TEST_CASE("context") {
  Context c({3, 2});
  CHECK(c.primes() == std::vector<u64>{2, 3});
  CHECK(c.L_S() == 24);
  CHECK(Context({5, 7}).L_S() == 35);
  CHECK(Context().L_S() == 1);
  CHECK_THROWS_AS(Context({2, 2}), Error);
  CHECK_THROWS_AS(Context({4}), Error);
  CHECK(c.in_NS(35));
  CHECK_FALSE(c.in_NS(9));
  Context inf;
  for (u64 m = 1; m < 100; ++m) CHECK(inf.in_NS(m));
}

TEST_CASE("s covolume examples") {
  Context c2({2}), c23({2, 3}), c0;
  CHECK(s_covolume(QSElement::diag(c2, mpq_class(3, 2))) == doctest::Approx(3.0));
  CHECK(s_covolume(QSElement::diag(c0, mpq_class(-7))) == 7.0);
  CHECK(s_covolume(QSElement::diag(c23, mpq_class(12))) == doctest::Approx(1.0));
  QSElement z = QSElement::diag(c2, mpq_class(1));
  z.finite[0] = PadicValue::zero_value(2, 24);
  CHECK_THROWS_AS(s_covolume(z), Error);
}

TEST_CASE("s covolume: diag(n) gives the N_S part, multiplicative") {
  Context c({2, 3, 5});
  RngStream rng(2, 0);
  for (int i = 0; i < 300; ++i) {
    long m = static_cast<long>(rng.below(10000)) + 1;
    while (m % 2 == 0 || m % 3 == 0 || m % 5 == 0) ++m;
    int a = static_cast<int>(rng.below(9)) - 4, b = static_cast<int>(rng.below(7)) - 3;
    mpq_class n(m);
    n *= a >= 0 ? mpq_class(1 << a) : mpq_class(1, 1 << -a);
    n *= b >= 0 ? mpq_class(static_cast<long>(std::pow(3, b))) : mpq_class(1, static_cast<long>(std::pow(3, -b)));
    if (rng.below(2)) n = -n;
    CHECK(s_covolume(QSElement::diag(c, n)) == doctest::Approx(static_cast<double>(m)).epsilon(1e-13));
    mpq_class k(static_cast<long>(rng.below(500)) + 1, static_cast<long>(rng.below(500)) + 1);
    k.canonicalize();
    QSElement x = QSElement::diag(c, n), y = QSElement::diag(c, k);
    CHECK(s_covolume(x * y) == doctest::Approx(s_covolume(x) * s_covolume(y)).epsilon(1e-13));
  }
}

TEST_CASE("s integers and units") {
  Context c23({2, 3}), c0, c5({5});
  CHECK(is_s_unit(SInteger(c23, mpq_class(4, 3))));
  CHECK(is_s_unit(SInteger(c0, -1)));
  CHECK_FALSE(is_s_unit(SInteger(c5, 10)));
  SInteger x(c23, mpq_class(20, 3));
  CHECK(x.numerator() == 5);
  CHECK(x.exponents() == std::vector<int>{-2, 1});
  CHECK(x.to_mpq() == mpq_class(20, 3));
  CHECK_THROWS_AS(SInteger(c23, mpq_class(1, 5)), Error);
  RngStream rng(3, 0);
  for (int i = 0; i < 200; ++i) {
    mpq_class a(static_cast<long>(rng.below(2000)) - 1000, 1L << rng.below(6));
    mpq_class b(static_cast<long>(rng.below(2000)) - 1000, static_cast<long>(std::pow(3, rng.below(4))));
    a.canonicalize();
    b.canonicalize();
    SInteger sa(c23, a), sb(c23, b);
    CHECK((sa + sb).to_mpq() == a + b);
    CHECK((sa * sb).to_mpq() == a * b);
    CHECK((sa - sb).to_mpq() == a - b);
  }
}

TEST_CASE("zeta_S") {
  CHECK(zeta_S(Context(), 2, 1e-9) == doctest::Approx(1.644934067).epsilon(1e-9));
  CHECK(zeta_S(Context({2}), 2, 1e-9) == doctest::Approx(1.233700550).epsilon(1e-9));
  CHECK(std::abs(zeta_S(Context({2}), 2) - M_PI * M_PI / 8) < 1e-12);
  double v = zeta_S(Context({2, 3}), 3, 1e-9);
  CHECK(std::abs(v - oracle::zeta_direct({2, 3}, 3, 200000)) < 2e-9);
  CHECK_THROWS_AS(zeta_S(Context(), 1), Error);
}

TEST_CASE("zeta_S: Moebius sum approaches the reciprocal") {
  Context c({2});
  const u64 M = 1000000;
  std::vector<int> mu(M + 1, 1);
  std::vector<bool> comp(M + 1, false);
  for (u64 i = 2; i <= M; ++i) {
    if (comp[i]) continue;
    for (u64 j = i; j <= M; j += i) {
      if (j > i) comp[j] = true;
      mu[j] = -mu[j];
    }
    for (u64 j = i * i; j <= M; j += i * i) mu[j] = 0;
  }
  double s = 0;
  for (u64 m = 1; m <= M; m += 2) s += mu[m] / (static_cast<double>(m) * static_cast<double>(m));
  CHECK(std::abs(s - 1.0 / zeta_S(c, 2)) < 1e-4);
}

TEST_CASE("hensel square roots") {
  auto r7 = hensel_sqrt_unit(PadicValue::from_rational(mpq_class(8), 7, 2), 2);
  CHECK(r7.unit_mod(2) == 29);
  auto r2 = hensel_sqrt_unit(PadicValue::from_rational(mpq_class(9), 2, 6), 5);
  CHECK(r2.unit_mod(5) == 29);
  // exhaustive: the only root mod 32 that is 1 mod 4 and lifts mod 64
  for (u64 y = 1; y < 32; y += 4)
    if ((y * y) % 32 == 9) CHECK((y == 29 || (y * y) % 64 != 9));
  auto r5 = hensel_sqrt_unit(PadicValue::from_rational(mpq_class(1), 5, 10), 10);
  CHECK(r5.unit_mod(10) == 1);
  CHECK_THROWS_AS(hensel_sqrt_unit(PadicValue::from_rational(mpq_class(3), 7, 5), 5), Error);
  CHECK_THROWS_AS(hensel_sqrt_unit(PadicValue::from_rational(mpq_class(5), 2, 5), 4), Error);
}

TEST_CASE("hensel: roots square back, property") {
  RngStream rng(4, 0);
  for (u64 p : {2u, 3u, 5u, 7u, 11u}) {
    const int m = capped_precision(p, 12);
    const u64 mod = checked_pow(p, m), L = p == 2 ? 8 : p;
    for (int i = 0; i < 200; ++i) {
      u64 u = 1 + L * rng.below(mod / L);
      PadicValue pu = PadicValue::from_unit_digits(p, 0, u, m);
      PadicValue y = hensel_sqrt_unit(pu, m);
      int t = y.prec;
      u64 mt = checked_pow(p, t);
      CHECK(mulmod(y.unit_mod(t), y.unit_mod(t), mt) == u % mt);
      CHECK(y.unit_mod(1) % (p == 2 ? 1 : p) == (p == 2 ? 0u : 1u));
      if (p == 2) CHECK(y.unit_mod(2) == 1);
    }
  }
}

TEST_CASE("cone_sqrt") {
  Context c7({7});
  QSElement v;
  v.real = 1.0;
  v.finite.push_back(PadicValue::from_rational(mpq_class(8), 7, 2));
  QSElement r = cone_sqrt(c7, v);
  CHECK(r.real == 1.0);
  CHECK(r.finite[0].unit_mod(2) == 29);
  Context c23({2, 3});
  QSElement q = QSElement::ones(c23);
  q.real = 0.25;
  QSElement rq = cone_sqrt(c23, q);
  CHECK(rq.real == 0.5);
  CHECK(rq.finite[0].unit_mod(rq.finite[0].prec) == 1);
  CHECK(rq.finite[1].unit_mod(rq.finite[1].prec) == 1);
  QSElement bad = QSElement::ones(c23);
  bad.finite[1] = PadicValue::from_rational(mpq_class(2), 3, 10);
  CHECK_THROWS_AS(cone_sqrt(c23, bad), Error);
  bad = QSElement::ones(c23);
  bad.real = 1.5;
  CHECK_THROWS_AS(cone_sqrt(c23, bad), Error);
  // property: squaring reproduces v
  RngStream rng(5, 0);
  for (int i = 0; i < 100; ++i) {
    QSElement w;
    w.real = rng.uniform_pos();
    for (std::size_t k = 0; k < c23.s(); ++k) {
      u64 L = c23.L_p(k), mod = c23.modulus(k);
      w.finite.push_back(PadicValue::from_unit_digits(c23.prime(k), 0, 1 + L * rng.below(mod / L), c23.precision(k)));
    }
    QSElement s = cone_sqrt(c23, w);
    QSElement sq = s * s;
    CHECK(sq.real == doctest::Approx(w.real).epsilon(1e-12));
    for (std::size_t k = 0; k < c23.s(); ++k) {
      int t = sq.finite[k].prec;
      CHECK(sq.finite[k].unit_mod(t) == w.finite[k].unit_mod(t));
    }
  }
}
