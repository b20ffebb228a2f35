// S-lattices, product regions, primitive/all lattice point enumeration, alpha_1, unipotent flows.
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "sarith/core.hpp"
#include "sarith/primvec.hpp"

namespace sarith {

enum class NormKind { Euclidean, Sup };

// psi on the real place: 1 on [0,1], q^{-exponent} beyond (or 0 beyond for ZeroBeyondOne).
struct PsiFunction {
  enum class Kind { Power, ZeroBeyondOne };
  Kind kind = Kind::Power;
  double exponent = 1.0;
  double operator()(double q) const;
  double integral(double T) const;  // int_0^T psi
};

// psi at a prime: psi(p^j) = p^{-a(j)}, a(j) = floor(exponent * j) for j >= 1, a(j) = 0 for j <= 0.
struct PsiFunctionP {
  enum class Kind { Power, ZeroBeyondOne };
  Kind kind = Kind::Power;
  double exponent = 1.0;
  std::optional<long> neg_log(long j) const;  // nullopt means psi(p^j) = 0
};

struct ApproximationFunction {
  PsiFunction inf;
  std::map<u64, PsiFunctionP> finite;
};

struct RealBox {
  std::vector<double> lo, hi;
};
struct RealBall {
  std::vector<double> center;
  double radius = 1.0;
  NormKind norm = NormKind::Euclidean;
};
struct RealShell {  // r_in <= |x|_2 <= r_out
  double r_in = 0.0, r_out = 1.0;
};
struct RealPsi {  // d = 2: |x| <= psi(|y|), |y| <= T
  PsiFunction psi;
  double T = 1.0;
};
using RealRegion = std::variant<RealBox, RealBall, RealShell, RealPsi>;

struct PadicBall {  // p^k Z_p^d
  int k = 0;
};
struct PadicShell {  // |x|_p = p^k exactly
  int k = 0;
};
struct PadicCoset {  // v0 + p^k Z_p^d
  std::vector<i64> v0;
  int k = 0;
};
struct PadicPsi {  // d = 2: |x|_p <= psi_p(|y|_p), |y|_p <= p^t
  PsiFunctionP psi;
  int t = 0;
};
using PadicRegion = std::variant<PadicBall, PadicShell, PadicCoset, PadicPsi>;

struct ProductRegion {
  int d = 2;
  RealRegion real = RealBall{};
  std::map<u64, PadicRegion> finite;  // primes not listed carry Z_p^d

  PadicRegion at(u64 p) const;
};

ProductRegion ball_region(int d, double radius);
ProductRegion box_region(int d, double half_width);

void validate_region(const Context& ctx, const ProductRegion& A);
double real_volume(const RealRegion& r, int d);
double padic_volume(const PadicRegion& r, u64 p, int d);
double region_volume(const Context& ctx, const ProductRegion& A);
bool real_contains(const RealRegion& r, std::span<const double> y);
bool real_contains_exact(const RealRegion& r, std::span<const mpq_class> y);
// (1/l) A for l in N_S
ProductRegion shrink_region(const Context& ctx, const ProductRegion& A, u64 l);

// Finite-place matrix h = p^shift H with h^{-1} = p^inv_shift Hinv, H entries mod p^prec.
struct PadicMatrix {
  u64 p = 2;
  int prec = 1;
  u64 mod = 2;
  int d = 2;
  int shift = 0;
  std::vector<u64> H;
  int inv_shift = 0;
  std::vector<u64> Hinv;

  bool compact() const { return shift == 0 && inv_shift == 0; }
  u64 h(int i, int j) const { return H[static_cast<std::size_t>(i * d + j)]; }
  u64 hinv(int i, int j) const { return Hinv[static_cast<std::size_t>(i * d + j)]; }

  static PadicMatrix identity(u64 p, int prec, int d);
  // g in SL_d(Z/p^prec); det must be 1 mod p^prec
  static PadicMatrix from_sl(u64 p, int prec, int d, const std::vector<u64>& g);
  // m over Q with inverse minv (both rational, row-major)
  static PadicMatrix from_rational(u64 p, int prec, int d, const std::vector<mpq_class>& m,
                                   const std::vector<mpq_class>& minv);
  PadicMatrix operator*(const PadicMatrix& o) const;
  PadicMatrix scaled(const PadicValue& unit) const;
  void normalize();
};

u64 det_mod(const std::vector<u64>& a, int d, u64 mod);
double det_real(const std::vector<double>& a, int d);
std::vector<double> inverse_real(const std::vector<double>& a, int d);
std::vector<mpq_class> inverse_exact(const std::vector<mpq_class>& a, int d);
std::vector<u64> adjugate_mod(const std::vector<u64>& a, int d, u64 mod);

class SLattice {
 public:
  SLattice(const Context& ctx, int d);  // g = identity
  SLattice(const Context& ctx, int d, std::vector<double> g_inf, std::vector<PadicMatrix> finite);

  static SLattice identity(const Context& ctx, int d) { return SLattice(ctx, d); }

  const Context& context() const { return ctx_; }
  int dim() const { return d_; }
  const std::vector<double>& g_inf() const { return g_inf_; }
  const std::optional<std::vector<mpq_class>>& g_inf_exact() const { return exact_; }
  const std::vector<PadicMatrix>& finite() const { return finite_; }
  const std::optional<QSElement>& cone_scale() const { return cone_; }

  SLattice& set_exact_real(const std::vector<mpq_class>& g);
  SLattice with_real(const std::vector<double>& g) const;  // drops the exact form
  SLattice with_cone(const QSElement& v) const;
  SLattice without_cone() const;
  SLattice right_multiply(const SMatrix& gamma) const;
  SLattice left_multiply_real(const std::vector<double>& a) const;
  SLattice left_multiply_real_exact(const std::vector<mpq_class>& a) const;
  SLattice left_multiply_finite(std::size_t i, const PadicMatrix& a) const;

  // Matrices with the cone scaling folded in.
  std::vector<double> effective_real() const;
  PadicMatrix effective_finite(std::size_t i) const;
  // d(v) of the cone point (1 without cone scaling)
  double cone_covolume() const;

 private:
  Context ctx_;
  int d_;
  std::vector<double> g_inf_;
  std::optional<std::vector<mpq_class>> exact_;
  std::vector<PadicMatrix> finite_;
  std::optional<QSElement> cone_;
  std::optional<QSElement> cone_root_;
};

struct EnumOptions {
  bool primitive_only = false;
  u64 max_denominator = 0;  // 0: no cap
};

struct ScanInfo {
  u64 M = 1;  // common denominator: v = w / M
  bool truncated = false;
  u64 visited = 0;
};

// Visitor gets the cleared coordinates w (v = w / M) and the real image of v; return false to stop.
using PointVisitor = std::function<bool(std::span<const i64> w, std::span<const double> y)>;

ScanInfo scan_points(const SLattice& L, const ProductRegion& A, const EnumOptions& opt, const PointVisitor& visit);
std::vector<SVector> enumerate_points(const SLattice& L, const ProductRegion& A, bool primitive_only);
u64 primitive_count(const SLattice& L, const ProductRegion& A);
u64 all_count(const SLattice& L, const ProductRegion& A);
bool avoids_primitive(const SLattice& L, const ProductRegion& A);

double diagonal_term(const Context& ctx, const ProductRegion& A, double tol);

struct Alpha1Result {
  double value = 0;
  bool certified = false;
  double search_radius = 0;
  std::vector<double> witness;  // real image of the optimizer
};
Alpha1Result alpha_1(const SLattice& L, u64 denominator_bound);
// Real-place reduction for S = {inf}, d = 2 (Lagrange-Gauss).
double alpha_1_real2(const double g[4]);

// blocks: one partition of d per place (index 0 = real, i + 1 = prime i) or a single shared partition.
SLattice unipotent_apply(const QSElement& x, const std::vector<std::vector<int>>& blocks, const SLattice& L);

struct QSVector {
  std::vector<double> real;
  std::vector<std::vector<PadicValue>> finite;  // per prime, d values
};
QSElement det_pair(const Context& ctx, const QSVector& x, const QSVector& y);

}  // namespace sarith
