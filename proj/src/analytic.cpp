#include "sarith/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace sarith {

namespace {

std::vector<u64> small_primes(u64 limit) {
  std::vector<char> comp(limit + 1, 0);
  std::vector<u64> out;
  for (u64 i = 2; i <= limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) comp[j] = 1;
  }
  return out;
}

u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// phi on [lo, hi) into out; primes must cover sqrt(hi - 1)
void sieve_phi(u64 lo, u64 hi, const std::vector<u64>& primes, std::vector<u64>& phi, std::vector<u64>& rem) {
  const u64 n = hi - lo;
  phi.resize(n);
  rem.resize(n);
  for (u64 i = 0; i < n; ++i) phi[i] = rem[i] = lo + i;
  for (u64 p : primes) {
    if (p * p > hi - 1) break;
    u64 start = (lo + p - 1) / p * p;
    for (u64 m = start; m < hi; m += p) {
      u64 i = m - lo;
      phi[i] -= phi[i] / p;
      do rem[i] /= p;
      while (rem[i] % p == 0);
    }
  }
  for (u64 i = 0; i < n; ++i)
    if (rem[i] > 1) phi[i] -= phi[i] / rem[i];
}

inline double f3(u64 m, u64 phi) {
  double md = static_cast<double>(m);
  return static_cast<double>(phi) / (md * md * md);
}

}  // namespace

u64 totient(u64 m) {
  if (m == 0) throw Error(Errc::InvalidArgument, "totient(0)");
  u64 r = m;
  for (u64 q = 2; q * q <= m; ++q) {
    if (m % q) continue;
    while (m % q == 0) m /= q;
    r -= r / q;
  }
  if (m > 1) r -= r / m;
  return r;
}

int mobius(u64 m) {
  if (m == 0) throw Error(Errc::InvalidArgument, "mobius(0)");
  int s = 1;
  for (u64 q = 2; q * q <= m; ++q) {
    if (m % q) continue;
    m /= q;
    if (m % q == 0) return 0;
    s = -s;
  }
  if (m > 1) s = -s;
  return s;
}

std::vector<u64> totient_segment(u64 lo, u64 hi) {
  if (lo == 0 || hi < lo) throw Error(Errc::InvalidArgument, "totient_segment range");
  std::vector<u64> phi, rem;
  if (hi == lo) return phi;
  sieve_phi(lo, hi, small_primes(isqrt(hi - 1) + 1), phi, rem);
  return phi;
}

static void check_residue(const Context& ctx, u64 m0) {
  u64 L = ctx.L_S();
  if (L == 1) {
    if (m0 != 0) throw Error(Errc::BadResidue, "S = {inf} uses the sentinel m0 = 0");
    return;
  }
  if (m0 == 0 || m0 >= L || gcd_u64(m0, L) != 1) throw Error(Errc::BadResidue, "m0 must be a unit mod L_S");
}

std::vector<TotientSummatoryResult> totient_summatory_cong_grid(const Context& ctx, const std::vector<double>& Ns,
                                                                u64 m0) {
  check_residue(ctx, m0);
  const u64 L = ctx.L_S();
  const double z2 = zeta_S(ctx, 2);
  std::vector<TotientSummatoryResult> out;
  if (Ns.empty()) return out;
  std::vector<u64> ints;
  for (double N : Ns) {
    if (!(N >= 1) || N > 4e9) throw Error(Errc::InvalidArgument, "N must lie in [1, 4e9]");
    ints.push_back(static_cast<u64>(std::floor(N)));
    if (ints.size() > 1 && ints.back() < ints[ints.size() - 2])
      throw Error(Errc::InvalidArgument, "N grid must be non-decreasing");
  }
  const u64 top = ints.back();
  const auto primes = small_primes(isqrt(top) + 1);
  const u64 block = u64{1} << 16;
  std::vector<u64> phi, rem;
  u128 acc = 0;
  std::size_t next = 0;
  for (u64 lo = 1; lo <= top && next < ints.size(); lo += block) {
    u64 hi = std::min(top + 1, lo + block);
    sieve_phi(lo, hi, primes, phi, rem);
    for (u64 m = lo; m < hi; ++m) {
      while (next < ints.size() && ints[next] < m) {
        out.push_back({static_cast<i64>(acc), 0, 0, static_cast<i64>(ints[next]), m0, L});
        ++next;
      }
      if (L == 1 || m % L == m0) acc += phi[m - lo];
    }
  }
  while (next < ints.size()) {
    out.push_back({static_cast<i64>(acc), 0, 0, static_cast<i64>(ints[next]), m0, L});
    ++next;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    double N = Ns[i];
    out[i].main_term = N * N / (2.0 * static_cast<double>(L) * z2);
    out[i].error = static_cast<double>(out[i].exact_sum) - out[i].main_term;
  }
  return out;
}

TotientSummatoryResult totient_summatory_cong(const Context& ctx, double N, u64 m0) {
  return totient_summatory_cong_grid(ctx, {N}, m0).front();
}

u64 residue_class_m0(const Context& ctx, const QSElement& x) {
  if (x.has_zero_component()) throw Error(Errc::ZeroComponent, "residue_class_m0: zero component");
  if (ctx.s() == 0) return 0;
  const u64 L = ctx.L_S();
  u64 result = 0, mod_so_far = 1;
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    const u64 lp = ctx.L_p(i);
    const auto& xi = x.finite[i];
    u64 r = xi.unit_mod(ctx.prime(i) == 2 ? 3 : 1) % lp;
    if (x.real < 0) r = (lp - r) % lp;
    // x_p * prod_q |x_q|_q: the p-part cancels, the other primes leave q^{-v_q}
    for (std::size_t j = 0; j < ctx.s(); ++j) {
      if (j == i) continue;
      long v = x.finite[j].val;
      u64 q = ctx.prime(j) % lp;
      u64 f = powmod(v >= 0 ? invmod(q, lp) : q, static_cast<u64>(v >= 0 ? v : -v), lp);
      r = mulmod(r, f, lp);
    }
    // CRT merge
    u64 t = mulmod((r + lp - result % lp) % lp, invmod(mod_so_far % lp, lp), lp);
    result += mod_so_far * t;
    mod_so_far *= lp;
  }
  return result % L;
}

// ---- Phi_S ----

double phi_tail_remainder(u64 L, double M) {
  double c1 = static_cast<double>(L) / 8.0 + 1.0 / (2.0 * static_cast<double>(L));
  return (1.25 * std::log(M) + 1.625 + 2.5 * c1) / (M * M);
}

PhiSTable::PhiSTable(const Context& ctx, u64 max_m) : L_(ctx.L_S()) {
  if (max_m < kBlock) max_m = kBlock;
  max_m_ = (max_m + kBlock - 1) / kBlock * kBlock;
  dense_max_ = std::min<u64>(max_m_, u64{1} << 20);
  class_idx_.assign(L_, -1);
  for (u64 r = 0; r < L_; ++r)
    if (gcd_u64(r, L_) == 1) {
      class_idx_[r] = static_cast<int>(classes_.size());
      classes_.push_back(r);
    }
  const std::size_t nc = classes_.size();
  dense_.assign(dense_max_ + 1, 0.0);
  ckpt_.assign((max_m_ / kBlock + 1) * nc, 0.0);
  std::vector<long double> run(nc, 0.0L);
  primes_ = small_primes(isqrt(max_m_) + 1);
  const auto& primes = primes_;
  const u64 seg = u64{1} << 16;
  std::vector<u64> phi, rem;
  for (u64 lo = 1; lo <= max_m_; lo += seg) {
    u64 hi = std::min(max_m_ + 1, lo + seg);
    sieve_phi(lo, hi, primes, phi, rem);
    for (u64 m = lo; m < hi; ++m) {
      double f = f3(m, phi[m - lo]);
      u64 r = m % L_;
      if (m <= dense_max_) dense_[m] = (m >= L_ ? dense_[m - L_] : 0.0) + f;
      int ci = class_idx_[r];
      if (ci >= 0) run[static_cast<std::size_t>(ci)] += f;
      if (m % kBlock == 0)
        for (std::size_t c = 0; c < nc; ++c) ckpt_[(m / kBlock) * nc + c] = static_cast<double>(run[c]);
    }
  }
}

double PhiSTable::prefix(u64 n, u64 r) const {
  r %= L_;
  if (n == 0) return 0.0;
  if (n <= dense_max_) {
    if (n < r) return 0.0;
    u64 mp = n - (n - r) % L_;
    return dense_[mp];
  }
  int ci = class_idx_[r];
  if (ci < 0) throw Error(Errc::BadResidue, "PhiSTable: residue not coprime to L_S");
  const std::size_t nc = classes_.size();
  u64 b = n / kBlock;
  double s = ckpt_[b * nc + static_cast<std::size_t>(ci)];
  u64 lo = b * kBlock + 1;
  if (lo <= n) {
    std::vector<u64> phi, rem;
    sieve_phi(lo, n + 1, primes_, phi, rem);
    for (u64 m = lo; m <= n; ++m)
      if (m % L_ == r) s += f3(m, phi[m - lo]);
  }
  return s;
}

double PhiSTable::range_sum(u64 lo, u64 hi, u64 r) const {
  if (hi > max_m_) throw Error(Errc::InvalidArgument, "PhiSTable range beyond table");
  if (lo > hi) return 0.0;
  return prefix(hi, r) - prefix(lo - 1, r);
}

namespace {
std::mutex g_table_mu;
std::map<std::pair<std::vector<u64>, u64>, std::shared_ptr<const PhiSTable>> g_tables;

std::shared_ptr<const PhiSTable> shared_table(const Context& ctx, u64 max_m) {
  std::lock_guard<std::mutex> lk(g_table_mu);
  auto key = std::make_pair(ctx.primes(), max_m);
  auto it = g_tables.find(key);
  if (it != g_tables.end()) return it->second;
  auto t = std::make_shared<const PhiSTable>(ctx, max_m);
  g_tables.emplace(key, t);
  return t;
}
}  // namespace

PhiSEvaluator::PhiSEvaluator(const Context& ctx, u64 table_max)
    : ctx_(ctx), zeta2_(zeta_S(ctx, 2)), table_(shared_table(ctx, table_max)) {}

double PhiSEvaluator::class_sum(u64 lo, u64 hi, u64 r) const {
  if (lo > hi) return 0.0;
  double s = 0.0;
  const u64 tmax = table_->max_m();
  if (lo <= tmax) {
    s += table_->range_sum(lo, std::min(hi, tmax), r);
    lo = tmax + 1;
  }
  if (lo > hi) return s;
  const u64 L = ctx_.L_S();
  const auto primes = small_primes(isqrt(hi) + 1);
  const u64 seg = u64{1} << 18;
  std::vector<u64> phi, rem;
  long double acc = 0.0L;
  for (u64 a = lo; a <= hi; a += seg) {
    u64 b = std::min(hi + 1, a + seg);
    sieve_phi(a, b, primes, phi, rem);
    for (u64 m = a; m < b; ++m)
      if (m % L == r) acc += f3(m, phi[m - a]);
  }
  return s + static_cast<double>(acc);
}

PhiSEvaluation PhiSEvaluator::evaluate(double dx, u64 m0, double tol, u64 min_cutoff) const {
  if (!(tol > 0)) throw Error(Errc::InvalidArgument, "phi_S: tol must be positive");
  if (!(dx > 0) || !std::isfinite(dx)) throw Error(Errc::InvalidArgument, "phi_S: d(x) must be positive");
  const u64 L = ctx_.L_S();
  PhiSEvaluation ev;
  ev.dx = dx;
  ev.m0 = m0;
  const u64 r = L == 1 ? 0 : m0 % L;
  if (L > 1 && gcd_u64(r, L) != 1) throw Error(Errc::BadResidue, "phi_S: m0 not coprime to L_S");
  const double startd = std::max(1.0, std::ceil(dx));
  if (startd > 4e18) throw Error(Errc::InvalidArgument, "phi_S: d(x) too large");
  const u64 start = static_cast<u64>(startd);
  u64 M = std::max<u64>({start, min_cutoff, 16});
  if (dx * phi_tail_remainder(L, static_cast<double>(M)) >= tol) {
    u64 hi = M;
    while (dx * phi_tail_remainder(L, static_cast<double>(hi)) >= tol) {
      if (hi > (u64{1} << 40)) throw Error(Errc::PrecisionExceeded, "phi_S: tolerance unreachable");
      hi *= 2;
    }
    u64 lo = hi / 2;
    while (hi - lo > 1) {
      u64 mid = lo + (hi - lo) / 2;
      if (dx * phi_tail_remainder(L, static_cast<double>(mid)) < tol) hi = mid;
      else lo = mid;
    }
    M = std::max(M, hi);
  }
  double partial = class_sum(start, M, r);
  double tail = 1.0 / (static_cast<double>(L) * zeta2_ * static_cast<double>(M));
  ev.value = dx * (partial + tail);
  ev.tail_bound = dx * phi_tail_remainder(L, static_cast<double>(M));
  ev.cutoff = M;
  return ev;
}

PhiSEvaluation PhiSEvaluator::operator()(const QSElement& x, double tol) const {
  if (x.has_zero_component()) {
    PhiSEvaluation ev;
    ev.zero_flag = true;
    return ev;
  }
  return evaluate(s_covolume(x), residue_class_m0(ctx_, x), tol);
}

PhiSEvaluation phi_S(const Context& ctx, const QSElement& x, double tol) {
  PhiSEvaluator ev(ctx, u64{1} << 20);
  return ev(x, tol);
}

}  // namespace sarith
