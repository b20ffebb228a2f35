// S-arithmetic number core: prime sets, S-integers, truncated p-adic values.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sarith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

enum class Errc {
  InvalidArgument = 1,
  ZeroComponent,
  InvalidExponent,
  NotInDomain,
  NotInI1,
  ZeroVector,
  NotPrimitive,
  WrongDimension,
  DependentPair,
  ZeroDeterminant,
  BadModulus,
  BadResidue,
  MalformedRegion,
  UnboundedRegion,
  PrecisionExceeded,
  UnsupportedShape,
  FactorialNotInvertible,
  DivergenceCheckFailed,
  ConfigError,
};

const char* errc_name(Errc e);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Modular helpers; moduli must stay below 2^63.
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 invmod(u64 a, u64 m);  // throws InvalidArgument when a is not a unit
u64 mod_of(i64 a, u64 m);
u64 checked_pow(u64 p, int k);  // throws PrecisionExceeded past 2^62
int valuation_u64(u64 n, u64 p);
bool is_prime_u64(u64 n);
u64 gcd_u64(u64 a, u64 b);

class Context {
 public:
  static constexpr int kDefaultPrecision = 24;

  Context() : Context(std::vector<u64>{}) {}
  explicit Context(std::vector<u64> primes, int precision = kDefaultPrecision);
  Context(std::vector<u64> primes, std::vector<int> precision);

  const std::vector<u64>& primes() const { return d_->primes; }
  std::size_t s() const { return d_->primes.size(); }
  u64 prime(std::size_t i) const { return d_->primes[i]; }
  u64 L_S() const { return d_->L; }
  u64 L_p(std::size_t i) const { return d_->primes[i] == 2 ? 8 : d_->primes[i]; }
  int precision(std::size_t i) const { return d_->precision[i]; }
  u64 modulus(std::size_t i) const { return d_->modulus[i]; }
  std::optional<std::size_t> index_of(u64 p) const;

  bool in_NS(u64 m) const;
  u64 ns_part(u64 m) const;  // strip every prime of S
  bool s_smooth(u64 m) const { return ns_part(m) == 1; }

  std::string label() const;  // "{inf,2,3}"
  bool same_primes(const Context& o) const { return d_->primes == o.d_->primes; }
  std::shared_ptr<const std::vector<u64>> prime_list() const { return plist_; }

 private:
  struct Data {
    std::vector<u64> primes;
    std::vector<int> precision;
    std::vector<u64> modulus;
    u64 L = 1;
  };
  std::shared_ptr<const Data> d_;
  std::shared_ptr<const std::vector<u64>> plist_;
};

// Largest precision m with p^m < 2^62, capped at the requested value.
int capped_precision(u64 p, int requested);

std::optional<long> padic_valuation(const mpq_class& q, u64 p);  // nullopt for zero
long padic_valuation(const mpz_class& z, u64 p);                 // z != 0

// Element of Z_S: numerator * prod p_i^{-k_i}, numerator coprime to S.
class SInteger {
 public:
  SInteger() = default;
  SInteger(const Context& ctx, const mpq_class& q);  // NotInDomain if denominator not S-smooth
  SInteger(const Context& ctx, long n) : SInteger(ctx, mpq_class(n)) {}

  const mpz_class& numerator() const { return num_; }
  const std::vector<int>& exponents() const { return k_; }
  const std::vector<u64>& primes() const { return *primes_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return sgn(num_); }
  mpq_class to_mpq() const;
  double to_double() const { return to_mpq().get_d(); }
  std::string str() const;

  bool is_unit() const { return num_ == 1 || num_ == -1; }
  SInteger unit_inverse() const;  // NotInDomain unless is_unit()

  friend SInteger operator+(const SInteger& a, const SInteger& b);
  friend SInteger operator-(const SInteger& a, const SInteger& b);
  friend SInteger operator*(const SInteger& a, const SInteger& b);
  SInteger operator-() const;
  friend bool operator==(const SInteger& a, const SInteger& b) {
    return a.num_ == b.num_ && a.k_ == b.k_;
  }
  friend bool operator!=(const SInteger& a, const SInteger& b) { return !(a == b); }

 private:
  SInteger(std::shared_ptr<const std::vector<u64>> primes, mpq_class q);
  void assign(const mpq_class& q);

  mpz_class num_{0};
  std::vector<int> k_;
  std::shared_ptr<const std::vector<u64>> primes_;
};

bool is_s_unit(const SInteger& q);

// p-adic number p^val * unit with unit known mod p^prec (relative precision).
struct PadicValue {
  u64 p = 2;
  bool zero = true;
  long val = 0;
  u64 unit = 0;
  int prec = 0;

  static PadicValue from_rational(const mpq_class& q, u64 p, int prec);
  static PadicValue from_unit_digits(u64 p, long val, u64 unit, int prec);
  static PadicValue zero_value(u64 p, int prec);

  double norm() const;  // |x|_p, 0 for zero
  u64 modulus() const { return checked_pow(p, prec); }
  // residue of the unit part mod p^k, k <= prec
  u64 unit_mod(int k) const;
};

PadicValue operator*(const PadicValue& a, const PadicValue& b);
PadicValue operator-(const PadicValue& a, const PadicValue& b);
PadicValue operator+(const PadicValue& a, const PadicValue& b);
PadicValue negate(const PadicValue& a);

struct QSElement {
  double real = 0.0;
  std::vector<PadicValue> finite;  // aligned with Context::primes()

  static QSElement diag(const Context& ctx, const mpq_class& q);
  static QSElement ones(const Context& ctx);
  bool has_zero_component() const;
};

QSElement operator*(const QSElement& a, const QSElement& b);

double s_covolume(const QSElement& x);  // ZeroComponent if a place vanishes

double riemann_zeta(int d);
double zeta_S(const Context& ctx, int d, double tol = 1e-12);

// y with y^2 = u, y = 1 mod p (odd p) or y = 1 mod 4 (p = 2).
// For p = 2 the result carries at most prec(u) - 1 digits.
PadicValue hensel_sqrt_unit(const PadicValue& u, int target_precision);

bool in_I1(const Context& ctx, const QSElement& v);
QSElement cone_sqrt(const Context& ctx, const QSElement& v);

}  // namespace sarith
