// S-gcd, primitivity, unit/primitive splitting and Gamma_2 orbit labels.
#pragma once

#include <span>
#include <vector>

#include "sarith/core.hpp"

namespace sarith {

struct SVector {
  std::vector<SInteger> coords;
  int dim() const { return static_cast<int>(coords.size()); }
  bool is_zero() const;
  std::vector<mpq_class> to_mpq() const;
  friend bool operator==(const SVector& a, const SVector& b) { return a.coords == b.coords; }
};

SVector make_svector(const Context& ctx, const std::vector<mpq_class>& q);
SVector make_svector(const Context& ctx, std::initializer_list<long> q);

// Square matrix over Z_S, row-major.
struct SMatrix {
  int n = 0;
  std::vector<SInteger> e;
  const SInteger& at(int i, int j) const { return e[static_cast<std::size_t>(i * n + j)]; }
  SInteger& at(int i, int j) { return e[static_cast<std::size_t>(i * n + j)]; }
  static SMatrix identity(const Context& ctx, int n);
  static SMatrix from_mpq(const Context& ctx, int n, const std::vector<mpq_class>& rowmajor);
  SInteger det2() const;
  SMatrix inverse2() const;  // det must be a unit
  friend bool operator==(const SMatrix& a, const SMatrix& b) { return a.n == b.n && a.e == b.e; }
};

SMatrix operator*(const SMatrix& a, const SMatrix& b);
SVector operator*(const SMatrix& a, const SVector& v);

struct OrbitLabel {
  SInteger n;
  mpz_class ell;
  friend bool operator==(const OrbitLabel& a, const OrbitLabel& b) { return a.n == b.n && a.ell == b.ell; }
};

struct UnitSplit {
  SInteger unit;
  std::vector<mpz_class> w;
};

mpz_class s_gcd(const SVector& v);
bool is_primitive(const SVector& v);
UnitSplit split_unit_primitive(const Context& ctx, const SVector& v);
SMatrix bezout_complete(const Context& ctx, const SVector& v);
SInteger det_pair(const SVector& v1, const SVector& v2);
OrbitLabel canonical_pair(const Context& ctx, const SVector& v1, const SVector& v2);
std::vector<SMatrix> orbit_representatives(const Context& ctx, const SInteger& n);
bool in_congruence_class(const Context& ctx, std::span<const i64> v, std::span<const i64> v0, u64 N);

// N_S-part of |numerator|, i.e. d(n) for n in Z_S.
mpz_class d_of(const SInteger& n);

}  // namespace sarith
