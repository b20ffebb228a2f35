#include "sarith/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace sarith {

const char* errc_name(Errc e) {
  switch (e) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ZeroComponent: return "ZeroComponent";
    case Errc::InvalidExponent: return "InvalidExponent";
    case Errc::NotInDomain: return "NotInDomain";
    case Errc::NotInI1: return "NotInI1";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::NotPrimitive: return "NotPrimitive";
    case Errc::WrongDimension: return "WrongDimension";
    case Errc::DependentPair: return "DependentPair";
    case Errc::ZeroDeterminant: return "ZeroDeterminant";
    case Errc::BadModulus: return "BadModulus";
    case Errc::BadResidue: return "BadResidue";
    case Errc::MalformedRegion: return "MalformedRegion";
    case Errc::UnboundedRegion: return "UnboundedRegion";
    case Errc::PrecisionExceeded: return "PrecisionExceeded";
    case Errc::UnsupportedShape: return "UnsupportedShape";
    case Errc::FactorialNotInvertible: return "FactorialNotInvertible";
    case Errc::DivergenceCheckFailed: return "DivergenceCheckFailed";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 m) {
  i128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    i128 q = r / nr;
    i128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw Error(Errc::InvalidArgument, "invmod: not a unit");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

u64 mod_of(i64 a, u64 m) {
  i128 r = static_cast<i128>(a) % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 checked_pow(u64 p, int k) {
  if (k < 0) throw Error(Errc::InvalidArgument, "checked_pow: negative exponent");
  u128 r = 1;
  for (int i = 0; i < k; ++i) {
    r *= p;
    if (r > (static_cast<u128>(1) << 62))
      throw Error(Errc::PrecisionExceeded, "p^k exceeds 2^62");
  }
  return static_cast<u64>(r);
}

int valuation_u64(u64 n, u64 p) {
  if (n == 0) return 1 << 30;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

int capped_precision(u64 p, int requested) {
  int m = 0;
  u128 r = 1;
  while (m < requested) {
    r *= p;
    if (r >= (static_cast<u128>(1) << 62)) break;
    ++m;
  }
  return m;
}

Context::Context(std::vector<u64> primes, int precision)
    : Context(primes, std::vector<int>(primes.size(), precision)) {}

Context::Context(std::vector<u64> primes, std::vector<int> precision) {
  if (precision.size() != primes.size())
    throw Error(Errc::InvalidArgument, "precision list does not match prime list");
  std::vector<std::size_t> order(primes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return primes[a] < primes[b]; });
  auto d = std::make_shared<Data>();
  for (auto i : order) {
    u64 p = primes[i];
    if (!is_prime_u64(p)) throw Error(Errc::InvalidArgument, "not a prime: " + std::to_string(p));
    if (!d->primes.empty() && d->primes.back() == p)
      throw Error(Errc::InvalidArgument, "duplicate prime " + std::to_string(p));
    int m = capped_precision(p, precision[i]);
    if (m < 3) throw Error(Errc::InvalidArgument, "p-adic precision must be at least 3");
    d->primes.push_back(p);
    d->precision.push_back(m);
    d->modulus.push_back(checked_pow(p, m));
    u64 lp = p == 2 ? 8 : p;
    if (d->L > (u64{1} << 40) / lp) throw Error(Errc::InvalidArgument, "L_S too large");
    d->L *= lp;
  }
  plist_ = std::make_shared<const std::vector<u64>>(d->primes);
  d_ = std::move(d);
}

std::optional<std::size_t> Context::index_of(u64 p) const {
  for (std::size_t i = 0; i < s(); ++i)
    if (prime(i) == p) return i;
  return std::nullopt;
}

bool Context::in_NS(u64 m) const {
  for (u64 p : primes())
    if (m % p == 0) return false;
  return true;
}

u64 Context::ns_part(u64 m) const {
  if (m == 0) return 0;
  for (u64 p : primes())
    while (m % p == 0) m /= p;
  return m;
}

std::string Context::label() const {
  std::string s = "{inf";
  for (u64 p : primes()) s += "," + std::to_string(p);
  return s + "}";
}

long padic_valuation(const mpz_class& z, u64 p) {
  mpz_class t = z, pz = static_cast<unsigned long>(p);
  return static_cast<long>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), pz.get_mpz_t()));
}

std::optional<long> padic_valuation(const mpq_class& q, u64 p) {
  if (q == 0) return std::nullopt;
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

// ---- SInteger ----

SInteger::SInteger(const Context& ctx, const mpq_class& q) : primes_(ctx.prime_list()) { assign(q); }

SInteger::SInteger(std::shared_ptr<const std::vector<u64>> primes, mpq_class q)
    : primes_(std::move(primes)) {
  assign(q);
}

void SInteger::assign(const mpq_class& q) {
  const auto& ps = *primes_;
  k_.assign(ps.size(), 0);
  if (q == 0) {
    num_ = 0;
    return;
  }
  mpz_class a = q.get_num(), b = q.get_den();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    mpz_class pz = static_cast<unsigned long>(ps[i]);
    long alpha = static_cast<long>(mpz_remove(a.get_mpz_t(), a.get_mpz_t(), pz.get_mpz_t()));
    long beta = static_cast<long>(mpz_remove(b.get_mpz_t(), b.get_mpz_t(), pz.get_mpz_t()));
    k_[i] = static_cast<int>(beta - alpha);
  }
  if (b != 1) throw Error(Errc::NotInDomain, "denominator is not S-smooth");
  num_ = a;
}

mpq_class SInteger::to_mpq() const {
  mpz_class n = num_, d = 1;
  const auto& ps = *primes_;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), ps[i], static_cast<unsigned long>(std::abs(k_[i])));
    if (k_[i] > 0) d *= pk;
    else n *= pk;
  }
  mpq_class q(n, d);
  q.canonicalize();
  return q;
}

std::string SInteger::str() const { return to_mpq().get_str(); }

SInteger SInteger::unit_inverse() const {
  if (!is_unit()) throw Error(Errc::NotInDomain, "not an S-unit");
  return SInteger(primes_, 1 / to_mpq());
}

SInteger operator+(const SInteger& a, const SInteger& b) {
  return SInteger(a.primes_, a.to_mpq() + b.to_mpq());
}
SInteger operator-(const SInteger& a, const SInteger& b) {
  return SInteger(a.primes_, a.to_mpq() - b.to_mpq());
}
SInteger operator*(const SInteger& a, const SInteger& b) {
  SInteger r = a;
  r.num_ = a.num_ * b.num_;
  if (r.num_ == 0) {
    std::fill(r.k_.begin(), r.k_.end(), 0);
    return r;
  }
  for (std::size_t i = 0; i < r.k_.size(); ++i) r.k_[i] += b.k_[i];
  return r;
}
SInteger SInteger::operator-() const {
  SInteger r = *this;
  r.num_ = -num_;
  return r;
}

bool is_s_unit(const SInteger& q) { return q.is_unit(); }

// ---- PadicValue ----

PadicValue PadicValue::zero_value(u64 p, int prec) {
  PadicValue z;
  z.p = p;
  z.prec = prec;
  return z;
}

PadicValue PadicValue::from_unit_digits(u64 p, long val, u64 unit, int prec) {
  u64 m = checked_pow(p, prec);
  unit %= m;
  if (unit % p == 0) throw Error(Errc::InvalidArgument, "unit digits divisible by p");
  PadicValue x;
  x.p = p;
  x.zero = false;
  x.val = val;
  x.unit = unit;
  x.prec = prec;
  return x;
}

PadicValue PadicValue::from_rational(const mpq_class& q, u64 p, int prec) {
  if (q == 0) return zero_value(p, prec);
  mpz_class a = q.get_num(), b = q.get_den(), pz = static_cast<unsigned long>(p);
  long alpha = static_cast<long>(mpz_remove(a.get_mpz_t(), a.get_mpz_t(), pz.get_mpz_t()));
  long beta = static_cast<long>(mpz_remove(b.get_mpz_t(), b.get_mpz_t(), pz.get_mpz_t()));
  u64 m = checked_pow(p, prec);
  mpz_class mz = static_cast<unsigned long>(m), ar, br;
  mpz_fdiv_r(ar.get_mpz_t(), a.get_mpz_t(), mz.get_mpz_t());
  mpz_fdiv_r(br.get_mpz_t(), b.get_mpz_t(), mz.get_mpz_t());
  u64 unit = mulmod(ar.get_ui(), invmod(br.get_ui(), m), m);
  return from_unit_digits(p, alpha - beta, unit, prec);
}

double PadicValue::norm() const {
  if (zero) return 0.0;
  return std::pow(static_cast<double>(p), static_cast<double>(-val));
}

u64 PadicValue::unit_mod(int k) const {
  if (k > prec) throw Error(Errc::PrecisionExceeded, "unit digits requested beyond precision");
  return unit % checked_pow(p, k);
}

PadicValue operator*(const PadicValue& a, const PadicValue& b) {
  int prec = std::min(a.prec, b.prec);
  if (a.zero || b.zero) return PadicValue::zero_value(a.p, prec);
  u64 m = checked_pow(a.p, prec);
  return PadicValue::from_unit_digits(a.p, a.val + b.val, mulmod(a.unit % m, b.unit % m, m), prec);
}

PadicValue negate(const PadicValue& a) {
  if (a.zero) return a;
  PadicValue r = a;
  u64 m = a.modulus();
  r.unit = (m - a.unit % m) % m;
  return r;
}

PadicValue operator+(const PadicValue& a, const PadicValue& b) {
  if (a.zero) return b;
  if (b.zero) return a;
  long v = std::min(a.val, b.val);
  // absolute precision of each summand
  long abs_a = a.val + a.prec, abs_b = b.val + b.prec;
  long abs_r = std::min(abs_a, abs_b);
  int cap = std::max(a.prec, b.prec);
  int rel = static_cast<int>(std::min<long>(abs_r - v, cap));
  u64 m = checked_pow(a.p, rel);
  auto lift = [&](const PadicValue& x) {
    long sh = x.val - v;
    if (sh >= rel) return u64{0};
    return mulmod(x.unit % m, checked_pow(x.p, static_cast<int>(sh)) % m, m);
  };
  u64 s = (lift(a) + lift(b)) % m;
  if (s == 0) return PadicValue::zero_value(a.p, 0);
  int e = valuation_u64(s, a.p);
  u64 pe = checked_pow(a.p, e);
  return PadicValue::from_unit_digits(a.p, v + e, s / pe, rel - e);
}

PadicValue operator-(const PadicValue& a, const PadicValue& b) { return a + negate(b); }

// ---- QSElement ----

QSElement QSElement::diag(const Context& ctx, const mpq_class& q) {
  QSElement x;
  x.real = q.get_d();
  for (std::size_t i = 0; i < ctx.s(); ++i)
    x.finite.push_back(PadicValue::from_rational(q, ctx.prime(i), ctx.precision(i)));
  return x;
}

QSElement QSElement::ones(const Context& ctx) { return diag(ctx, mpq_class(1)); }

bool QSElement::has_zero_component() const {
  if (real == 0.0) return true;
  for (const auto& f : finite)
    if (f.zero) return true;
  return false;
}

QSElement operator*(const QSElement& a, const QSElement& b) {
  QSElement r;
  r.real = a.real * b.real;
  for (std::size_t i = 0; i < a.finite.size(); ++i) r.finite.push_back(a.finite[i] * b.finite[i]);
  return r;
}

double s_covolume(const QSElement& x) {
  if (x.has_zero_component()) throw Error(Errc::ZeroComponent, "s_covolume: zero component");
  // exact power of p product first, then one multiplication by |x_inf|
  long double f = 1.0L;
  for (const auto& c : x.finite) f *= std::pow(static_cast<long double>(c.p), -static_cast<long double>(c.val));
  return static_cast<double>(std::fabs(static_cast<long double>(x.real)) * f);
}

// ---- zeta ----

double riemann_zeta(int d) {
  if (d < 2) throw Error(Errc::InvalidExponent, "zeta needs d >= 2");
  // Euler-Maclaurin with N = 20 and Bernoulli terms through B_16
  static const long double B[] = {1.0L / 6,     -1.0L / 30,  1.0L / 42,       -1.0L / 30,
                                  5.0L / 66,    -691.0L / 2730, 7.0L / 6,     -3617.0L / 510};
  const int N = 20;
  const long double s = d;
  long double sum = 0;
  for (int n = N - 1; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -s);
  long double Nl = N;
  sum += std::pow(Nl, 1 - s) / (s - 1) + std::pow(Nl, -s) / 2;
  long double rising = s;  // s (s+1) ... (s+2k-2)
  long double fact = 2;    // (2k)!
  for (int k = 1; k <= 8; ++k) {
    sum += B[k - 1] / fact * rising * std::pow(Nl, -s - 2 * k + 1);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    fact *= (2 * k + 1) * (2 * k + 2);
  }
  return static_cast<double>(sum);
}

double zeta_S(const Context& ctx, int d, double tol) {
  if (d < 2) throw Error(Errc::InvalidExponent, "zeta_S needs d >= 2");
  if (!(tol > 0)) throw Error(Errc::InvalidArgument, "tol must be positive");
  long double z = riemann_zeta(d);
  for (u64 p : ctx.primes()) z *= 1.0L - std::pow(static_cast<long double>(p), -static_cast<long double>(d));
  return static_cast<double>(z);
}

// ---- square roots ----

PadicValue hensel_sqrt_unit(const PadicValue& u, int target_precision) {
  const u64 p = u.p;
  if (u.zero || u.val != 0) throw Error(Errc::NotInDomain, "hensel_sqrt_unit: not a unit");
  if (target_precision < 1) throw Error(Errc::InvalidArgument, "target precision must be positive");
  if (p == 2) {
    if (u.prec < 3 || u.unit % 8 != 1) throw Error(Errc::NotInDomain, "2-adic square root needs u = 1 mod 8");
    int t = std::min(target_precision, u.prec - 1);
    int n = t + 1;
    u64 mod_n = checked_pow(2, n);
    u64 uu = u.unit % mod_n;
    u64 y = 1;
    for (int i = 3; i <= n - 1; ++i) {
      u64 mi = u64{1} << (i + 1);
      if ((mulmod(y, y, mod_n) + mod_n - uu) % mi != 0) y += u64{1} << (i - 1);
    }
    return PadicValue::from_unit_digits(2, 0, y % checked_pow(2, t), t);
  }
  if (u.unit % p != 1) throw Error(Errc::NotInDomain, "p-adic square root needs u = 1 mod p");
  int t = std::min(target_precision, u.prec);
  u64 m = checked_pow(p, t);
  u64 uu = u.unit % m, y = 1;
  for (int it = 0; it < 8; ++it) {
    u64 f = (mulmod(y, y, m) + m - uu) % m;
    if (f == 0) break;
    u64 step = mulmod(f, invmod(mulmod(2, y, m), m), m);
    y = (y + m - step) % m;
  }
  if (mulmod(y, y, m) != uu) throw Error(Errc::NotInDomain, "Hensel iteration did not converge");
  return PadicValue::from_unit_digits(p, 0, y, t);
}

bool in_I1(const Context& ctx, const QSElement& v) {
  if (!(v.real > 0.0 && v.real <= 1.0)) return false;
  if (v.finite.size() != ctx.s()) return false;
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    const auto& f = v.finite[i];
    if (f.zero || f.val != 0) return false;
    u64 lp = ctx.L_p(i);
    if (f.prec < (ctx.prime(i) == 2 ? 3 : 1)) return false;
    if (f.unit % lp != 1 % lp) return false;
  }
  return true;
}

QSElement cone_sqrt(const Context& ctx, const QSElement& v) {
  if (!in_I1(ctx, v)) throw Error(Errc::NotInI1, "cone_sqrt: v not in I_1");
  QSElement r;
  r.real = std::sqrt(v.real);
  for (const auto& f : v.finite) r.finite.push_back(hensel_sqrt_unit(f, f.prec));
  return r;
}

}  // namespace sarith
