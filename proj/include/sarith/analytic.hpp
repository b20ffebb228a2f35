// Totient machinery and the density Phi_S.
#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "sarith/core.hpp"

namespace sarith {

u64 totient(u64 m);
int mobius(u64 m);

// phi(m) for m in [lo, hi), lo >= 1, by a segmented sieve.
std::vector<u64> totient_segment(u64 lo, u64 hi);

struct TotientSummatoryResult {
  i64 exact_sum = 0;
  double main_term = 0;
  double error = 0;
  i64 N = 0;
  u64 m0 = 0;
  u64 L_S = 1;
};

TotientSummatoryResult totient_summatory_cong(const Context& ctx, double N, u64 m0);
// Same sums for an increasing grid of N in one sieve pass.
std::vector<TotientSummatoryResult> totient_summatory_cong_grid(const Context& ctx, const std::vector<double>& Ns,
                                                                u64 m0);

// CRT residue of sign(x_inf) x_p prod|x_q|_q mod L_S; 0 when S = {inf}.
u64 residue_class_m0(const Context& ctx, const QSElement& x);

struct PhiSEvaluation {
  double value = 0;
  double dx = 0;
  u64 m0 = 0;
  double tail_bound = 0;
  bool zero_flag = false;
  u64 cutoff = 0;  // last m summed
};

// Rigorous bound R(M) on |sum_{m>M, m=m0 (L)} phi(m)/m^3 - 1/(L zeta_S(2) M)|.
double phi_tail_remainder(u64 L, double M);

// Prefix sums of phi(m)/m^3 along residue classes mod L_S, up to max_m.
class PhiSTable {
 public:
  PhiSTable(const Context& ctx, u64 max_m);
  u64 max_m() const { return max_m_; }
  u64 L() const { return L_; }
  // sum over lo <= m <= hi, m = r mod L (hi <= max_m)
  double range_sum(u64 lo, u64 hi, u64 r) const;

 private:
  double prefix(u64 n, u64 r) const;

  u64 L_;
  u64 max_m_;
  u64 dense_max_;
  static constexpr u64 kBlock = 4096;
  std::vector<double> dense_;   // class-wise cumulative sums for m <= dense_max_
  std::vector<u64> classes_;    // coprime residues
  std::vector<int> class_idx_;  // residue -> index or -1
  std::vector<double> ckpt_;    // per block boundary, per coprime class
  std::vector<u64> primes_;     // up to sqrt(max_m_)
};

class PhiSEvaluator {
 public:
  explicit PhiSEvaluator(const Context& ctx, u64 table_max = u64{1} << 22);
  PhiSEvaluation operator()(const QSElement& x, double tol) const;
  // Evaluate with residue and d(x) supplied directly; cutoff forces M >= min_cutoff.
  PhiSEvaluation evaluate(double dx, u64 m0, double tol, u64 min_cutoff = 0) const;
  const Context& context() const { return ctx_; }

 private:
  double class_sum(u64 lo, u64 hi, u64 r) const;

  Context ctx_;
  double zeta2_;
  std::shared_ptr<const PhiSTable> table_;
};

PhiSEvaluation phi_S(const Context& ctx, const QSElement& x, double tol);

}  // namespace sarith
