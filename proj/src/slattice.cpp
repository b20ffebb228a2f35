#include "sarith/slattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace sarith {

namespace {

std::size_t ix(int i, int j, int d) { return static_cast<std::size_t>(i * d + j); }

u64 det_rec(const std::vector<u64>& a, int n, u64 mod) {
  if (n == 1) return a[0] % mod;
  if (n == 2) {
    u64 x = mulmod(a[0], a[3], mod), y = mulmod(a[1], a[2], mod);
    return (x + mod - y) % mod;
  }
  u64 acc = 0;
  std::vector<u64> minor(static_cast<std::size_t>((n - 1) * (n - 1)));
  for (int c = 0; c < n; ++c) {
    std::size_t t = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != c) minor[t++] = a[ix(i, j, n)];
    u64 term = mulmod(a[ix(0, c, n)], det_rec(minor, n - 1, mod), mod);
    acc = (c % 2 == 0) ? (acc + term) % mod : (acc + mod - term) % mod;
  }
  return acc;
}

// entry = p^val * unit (unit coprime to p) or zero
struct PEntry {
  bool zero = true;
  long val = 0;
  u64 unit = 0;
};

PEntry entry_of(const mpq_class& q, u64 p, int prec) {
  PEntry e;
  if (q == 0) return e;
  PadicValue v = PadicValue::from_rational(q, p, prec);
  e.zero = false;
  e.val = v.val;
  e.unit = v.unit;
  return e;
}

// Pack entries as p^shift H with H integral and some entry a unit.
void pack(const std::vector<PEntry>& es, u64 p, int prec, int& shift, std::vector<u64>& H) {
  long mn = 0;
  bool any = false;
  for (const auto& e : es)
    if (!e.zero) {
      mn = any ? std::min(mn, e.val) : e.val;
      any = true;
    }
  if (!any) throw Error(Errc::InvalidArgument, "singular p-adic matrix");
  shift = static_cast<int>(mn);
  u64 mod = checked_pow(p, prec);
  H.assign(es.size(), 0);
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].zero) continue;
    long r = es[i].val - mn;
    if (r >= prec) continue;
    H[i] = mulmod(checked_pow(p, static_cast<int>(r)), es[i].unit % mod, mod);
  }
}

PadicMatrix from_entries(u64 p, int prec, int d, const std::vector<PEntry>& m, const std::vector<PEntry>& minv) {
  PadicMatrix r;
  r.p = p;
  r.prec = prec;
  r.mod = checked_pow(p, prec);
  r.d = d;
  pack(m, p, prec, r.shift, r.H);
  pack(minv, p, prec, r.inv_shift, r.Hinv);
  r.normalize();
  return r;
}

std::vector<u64> matmul_mod(const std::vector<u64>& a, const std::vector<u64>& b, int d, u64 mod) {
  std::vector<u64> c(static_cast<std::size_t>(d * d), 0);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      u64 aik = a[ix(i, k, d)] % mod;
      if (aik == 0) continue;
      for (int j = 0; j < d; ++j) c[ix(i, j, d)] = (c[ix(i, j, d)] + mulmod(aik, b[ix(k, j, d)] % mod, mod)) % mod;
    }
  return c;
}

}  // namespace

u64 det_mod(const std::vector<u64>& a, int d, u64 mod) {
  if (a.size() != static_cast<std::size_t>(d * d)) throw Error(Errc::WrongDimension, "det_mod size");
  return det_rec(a, d, mod);
}

std::vector<u64> adjugate_mod(const std::vector<u64>& a, int d, u64 mod) {
  std::vector<u64> adj(static_cast<std::size_t>(d * d), 0);
  if (d == 1) {
    adj[0] = 1 % mod;
    return adj;
  }
  std::vector<u64> minor(static_cast<std::size_t>((d - 1) * (d - 1)));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      std::size_t t = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (i != r && j != c) minor[t++] = a[ix(i, j, d)];
      u64 m = det_rec(minor, d - 1, mod);
      // adj[c][r] = (-1)^{r+c} M_{rc}
      adj[ix(c, r, d)] = ((r + c) % 2 == 0) ? m : (mod - m) % mod;
    }
  return adj;
}

double det_real(const std::vector<double>& a, int d) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(a.data(), d, d);
  return m.determinant();
}

std::vector<double> inverse_real(const std::vector<double>& a, int d) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(a.data(), d, d);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> inv = m.inverse();
  return std::vector<double>(inv.data(), inv.data() + d * d);
}

std::vector<mpq_class> inverse_exact(const std::vector<mpq_class>& a, int d) {
  std::vector<mpq_class> m = a, inv(static_cast<std::size_t>(d * d), mpq_class(0));
  for (int i = 0; i < d; ++i) inv[ix(i, i, d)] = 1;
  for (int c = 0; c < d; ++c) {
    int piv = -1;
    for (int r = c; r < d; ++r)
      if (m[ix(r, c, d)] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error(Errc::InvalidArgument, "singular matrix");
    for (int j = 0; j < d; ++j) {
      std::swap(m[ix(c, j, d)], m[ix(piv, j, d)]);
      std::swap(inv[ix(c, j, d)], inv[ix(piv, j, d)]);
    }
    mpq_class f = 1 / m[ix(c, c, d)];
    for (int j = 0; j < d; ++j) {
      m[ix(c, j, d)] *= f;
      inv[ix(c, j, d)] *= f;
    }
    for (int r = 0; r < d; ++r) {
      if (r == c || m[ix(r, c, d)] == 0) continue;
      mpq_class g = m[ix(r, c, d)];
      for (int j = 0; j < d; ++j) {
        m[ix(r, j, d)] -= g * m[ix(c, j, d)];
        inv[ix(r, j, d)] -= g * inv[ix(c, j, d)];
      }
    }
  }
  return inv;
}

// ---- PadicMatrix ----

PadicMatrix PadicMatrix::identity(u64 p, int prec, int d) {
  PadicMatrix r;
  r.p = p;
  r.prec = prec;
  r.mod = checked_pow(p, prec);
  r.d = d;
  r.H.assign(static_cast<std::size_t>(d * d), 0);
  for (int i = 0; i < d; ++i) r.H[ix(i, i, d)] = 1;
  r.Hinv = r.H;
  return r;
}

PadicMatrix PadicMatrix::from_sl(u64 p, int prec, int d, const std::vector<u64>& g) {
  if (g.size() != static_cast<std::size_t>(d * d)) throw Error(Errc::WrongDimension, "from_sl size");
  PadicMatrix r;
  r.p = p;
  r.prec = prec;
  r.mod = checked_pow(p, prec);
  r.d = d;
  r.H.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) r.H[i] = g[i] % r.mod;
  if (det_mod(r.H, d, r.mod) != 1 % r.mod) throw Error(Errc::InvalidArgument, "finite part must have det 1");
  r.Hinv = adjugate_mod(r.H, d, r.mod);
  return r;
}

PadicMatrix PadicMatrix::from_rational(u64 p, int prec, int d, const std::vector<mpq_class>& m,
                                       const std::vector<mpq_class>& minv) {
  std::vector<PEntry> a, b;
  for (const auto& q : m) a.push_back(entry_of(q, p, prec));
  for (const auto& q : minv) b.push_back(entry_of(q, p, prec));
  return from_entries(p, prec, d, a, b);
}

void PadicMatrix::normalize() {
  auto all_div = [&](const std::vector<u64>& v) {
    return std::all_of(v.begin(), v.end(), [&](u64 x) { return x % p == 0; });
  };
  auto reduce = [&](std::vector<u64>& v) {
    for (auto& x : v) x %= mod;
  };
  while (prec > 1 && all_div(H)) {
    for (auto& x : H) x /= p;
    ++shift;
    --prec;
    mod /= p;
    reduce(Hinv);
  }
  while (prec > 1 && all_div(Hinv)) {
    for (auto& x : Hinv) x /= p;
    ++inv_shift;
    --prec;
    mod /= p;
    reduce(H);
  }
}

PadicMatrix PadicMatrix::operator*(const PadicMatrix& o) const {
  if (p != o.p || d != o.d) throw Error(Errc::WrongDimension, "p-adic matrix product mismatch");
  PadicMatrix r;
  r.p = p;
  r.d = d;
  r.prec = std::min(prec, o.prec);
  r.mod = checked_pow(p, r.prec);
  r.H = matmul_mod(H, o.H, d, r.mod);
  r.Hinv = matmul_mod(o.Hinv, Hinv, d, r.mod);
  r.shift = shift + o.shift;
  r.inv_shift = inv_shift + o.inv_shift;
  r.normalize();
  return r;
}

PadicMatrix PadicMatrix::scaled(const PadicValue& unit) const {
  if (unit.zero || unit.val != 0 || unit.p != p) throw Error(Errc::InvalidArgument, "scaling must be a p-adic unit");
  PadicMatrix r = *this;
  r.prec = std::min(prec, unit.prec);
  r.mod = checked_pow(p, r.prec);
  u64 s = unit.unit % r.mod, si = invmod(s, r.mod);
  for (auto& x : r.H) x = mulmod(x % r.mod, s, r.mod);
  for (auto& x : r.Hinv) x = mulmod(x % r.mod, si, r.mod);
  return r;
}

// ---- SLattice ----

SLattice::SLattice(const Context& ctx, int d) : ctx_(ctx), d_(d) {
  if (d < 2) throw Error(Errc::WrongDimension, "lattice dimension must be >= 2");
  g_inf_.assign(static_cast<std::size_t>(d * d), 0.0);
  std::vector<mpq_class> e(static_cast<std::size_t>(d * d), mpq_class(0));
  for (int i = 0; i < d; ++i) {
    g_inf_[ix(i, i, d)] = 1.0;
    e[ix(i, i, d)] = 1;
  }
  exact_ = e;
  for (std::size_t i = 0; i < ctx.s(); ++i) finite_.push_back(PadicMatrix::identity(ctx.prime(i), ctx.precision(i), d));
}

SLattice::SLattice(const Context& ctx, int d, std::vector<double> g_inf, std::vector<PadicMatrix> finite)
    : ctx_(ctx), d_(d), g_inf_(std::move(g_inf)), finite_(std::move(finite)) {
  if (d < 2 || g_inf_.size() != static_cast<std::size_t>(d * d)) throw Error(Errc::WrongDimension, "real part size");
  if (std::abs(det_real(g_inf_, d) - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "real part must have det 1");
  if (finite_.size() != ctx.s()) throw Error(Errc::WrongDimension, "one finite part per prime");
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    const auto& h = finite_[i];
    if (h.p != ctx.prime(i) || h.d != d) throw Error(Errc::WrongDimension, "finite part prime/dimension mismatch");
    if (h.compact() && det_mod(h.H, d, h.mod) != 1 % h.mod)
      throw Error(Errc::InvalidArgument, "finite part must have det 1");
  }
}

SLattice& SLattice::set_exact_real(const std::vector<mpq_class>& g) {
  if (g.size() != static_cast<std::size_t>(d_ * d_)) throw Error(Errc::WrongDimension, "real part size");
  if (d_ == 2 && g[0] * g[3] - g[1] * g[2] != 1) throw Error(Errc::InvalidArgument, "real part must have det 1");
  exact_ = g;
  for (std::size_t i = 0; i < g.size(); ++i) g_inf_[i] = g[i].get_d();
  if (std::abs(det_real(g_inf_, d_) - 1.0) > 1e-9) throw Error(Errc::InvalidArgument, "real part must have det 1");
  return *this;
}

SLattice SLattice::with_real(const std::vector<double>& g) const {
  SLattice r(ctx_, d_, g, finite_);
  r.cone_ = cone_;
  r.cone_root_ = cone_root_;
  return r;
}

SLattice SLattice::with_cone(const QSElement& v) const {
  if (d_ != 2) throw Error(Errc::WrongDimension, "cone scaling needs d = 2");
  SLattice r = *this;
  r.cone_root_ = cone_sqrt(ctx_, v);
  r.cone_ = v;
  return r;
}

SLattice SLattice::without_cone() const {
  SLattice r = *this;
  r.cone_.reset();
  r.cone_root_.reset();
  return r;
}

SLattice SLattice::right_multiply(const SMatrix& gamma) const {
  if (gamma.n != d_) throw Error(Errc::WrongDimension, "right_multiply size");
  std::vector<mpq_class> gq;
  for (const auto& e : gamma.e) gq.push_back(e.to_mpq());
  std::vector<mpq_class> gi = inverse_exact(gq, d_);
  SLattice r = *this;
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j) {
      double s = 0;
      for (int k = 0; k < d_; ++k) s += g_inf_[ix(i, k, d_)] * gq[ix(k, j, d_)].get_d();
      r.g_inf_[ix(i, j, d_)] = s;
    }
  if (exact_) {
    std::vector<mpq_class> e(static_cast<std::size_t>(d_ * d_), mpq_class(0));
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j)
        for (int k = 0; k < d_; ++k) e[ix(i, j, d_)] += (*exact_)[ix(i, k, d_)] * gq[ix(k, j, d_)];
    r.exact_ = e;
    for (std::size_t t = 0; t < e.size(); ++t) r.g_inf_[t] = e[t].get_d();
  }
  for (std::size_t i = 0; i < ctx_.s(); ++i) {
    PadicMatrix gp = PadicMatrix::from_rational(ctx_.prime(i), finite_[i].prec, d_, gq, gi);
    r.finite_[i] = finite_[i] * gp;
  }
  return r;
}

SLattice SLattice::left_multiply_real(const std::vector<double>& a) const {
  if (a.size() != g_inf_.size()) throw Error(Errc::WrongDimension, "left_multiply_real size");
  std::vector<double> g(g_inf_.size(), 0.0);
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) g[ix(i, j, d_)] += a[ix(i, k, d_)] * g_inf_[ix(k, j, d_)];
  SLattice r = *this;
  r.g_inf_ = g;
  r.exact_.reset();
  return r;
}

SLattice SLattice::left_multiply_real_exact(const std::vector<mpq_class>& a) const {
  if (!exact_) {
    std::vector<double> ad;
    for (const auto& q : a) ad.push_back(q.get_d());
    return left_multiply_real(ad);
  }
  std::vector<mpq_class> e(static_cast<std::size_t>(d_ * d_), mpq_class(0));
  for (int i = 0; i < d_; ++i)
    for (int j = 0; j < d_; ++j)
      for (int k = 0; k < d_; ++k) e[ix(i, j, d_)] += a[ix(i, k, d_)] * (*exact_)[ix(k, j, d_)];
  SLattice r = *this;
  r.exact_ = e;
  for (std::size_t t = 0; t < e.size(); ++t) r.g_inf_[t] = e[t].get_d();
  return r;
}

SLattice SLattice::left_multiply_finite(std::size_t i, const PadicMatrix& a) const {
  SLattice r = *this;
  r.finite_.at(i) = a * finite_.at(i);
  return r;
}

std::vector<double> SLattice::effective_real() const {
  if (!cone_root_) return g_inf_;
  std::vector<double> g = g_inf_;
  for (auto& x : g) x *= cone_root_->real;
  return g;
}

PadicMatrix SLattice::effective_finite(std::size_t i) const {
  if (!cone_root_) return finite_[i];
  return finite_[i].scaled(cone_root_->finite[i]);
}

double SLattice::cone_covolume() const { return cone_ ? s_covolume(*cone_) : 1.0; }

// ---- unipotent flows ----

namespace {

void check_partition(const std::vector<int>& b, int d) {
  int s = 0;
  for (int k : b) {
    if (k < 1) throw Error(Errc::InvalidArgument, "Jordan block sizes must be positive");
    s += k;
  }
  if (s != d) throw Error(Errc::InvalidArgument, "Jordan block sizes must sum to d");
}

}  // namespace

SLattice unipotent_apply(const QSElement& x, const std::vector<std::vector<int>>& blocks, const SLattice& L) {
  const Context& ctx = L.context();
  int d = L.dim();
  if (x.finite.size() != ctx.s()) throw Error(Errc::WrongDimension, "x must have one component per prime");
  if (blocks.size() != 1 && blocks.size() != ctx.s() + 1)
    throw Error(Errc::InvalidArgument, "give one block partition, or one per place");
  auto part = [&](std::size_t place) -> const std::vector<int>& {
    return blocks.size() == 1 ? blocks[0] : blocks[place];
  };
  for (std::size_t k = 0; k <= ctx.s(); ++k) check_partition(part(k), d);

  SLattice r = L;
  // real place
  if (x.real != 0.0) {
    const auto& b = part(0);
    if (L.g_inf_exact()) {
      mpq_class t(x.real);
      std::vector<mpq_class> U(static_cast<std::size_t>(d * d), mpq_class(0));
      int b0 = 0;
      for (int sz : b) {
        for (int i = 0; i < sz; ++i) {
          mpq_class term = 1;
          for (int j = i; j < sz; ++j) {
            U[ix(b0 + i, b0 + j, d)] = term;
            term = term * t / (j - i + 1);
          }
        }
        b0 += sz;
      }
      r = r.left_multiply_real_exact(U);
    } else {
      std::vector<double> U(static_cast<std::size_t>(d * d), 0.0);
      int b0 = 0;
      for (int sz : b) {
        for (int i = 0; i < sz; ++i) {
          double term = 1;
          for (int j = i; j < sz; ++j) {
            U[ix(b0 + i, b0 + j, d)] = term;
            term = term * x.real / (j - i + 1);
          }
        }
        b0 += sz;
      }
      r = r.left_multiply_real(U);
    }
  }
  // finite places
  for (std::size_t pi = 0; pi < ctx.s(); ++pi) {
    const PadicValue& t = x.finite[pi];
    if (t.zero) continue;
    u64 p = ctx.prime(pi);
    int prec = std::min(L.finite()[pi].prec, t.prec);
    u64 mod = checked_pow(p, prec);
    const auto& b = part(pi + 1);
    std::vector<PEntry> U(static_cast<std::size_t>(d * d)), Ui(static_cast<std::size_t>(d * d));
    int b0 = 0;
    for (int sz : b) {
      for (int i = 0; i < sz; ++i)
        for (int j = i; j < sz; ++j) {
          int k = j - i;
          // t^k / k! = p^{k val - v_p(k!)} * u^k / c
          long vf = 0;
          u64 c = 1;
          for (int m = 2; m <= k; ++m) {
            u64 mm = static_cast<u64>(m);
            while (mm % p == 0) {
              mm /= p;
              ++vf;
            }
            c = mulmod(c, mm % mod, mod);
          }
          if (vf >= prec) throw Error(Errc::FactorialNotInvertible, "k! loses all p-adic digits");
          u64 u = mulmod(powmod(t.unit % mod, static_cast<u64>(k), mod), invmod(c, mod), mod);
          PEntry e{false, static_cast<long>(k) * t.val - vf, u};
          PEntry ei{false, e.val, (k % 2 == 0) ? u : (mod - u) % mod};
          U[ix(b0 + i, b0 + j, d)] = e;
          Ui[ix(b0 + i, b0 + j, d)] = ei;
        }
      b0 += sz;
    }
    PadicMatrix up = from_entries(p, prec, d, U, Ui);
    r = r.left_multiply_finite(pi, up);
  }
  return r;
}

QSElement det_pair(const Context& ctx, const QSVector& x, const QSVector& y) {
  if (x.real.size() != 2 || y.real.size() != 2) throw Error(Errc::WrongDimension, "det_pair needs d = 2");
  if (x.finite.size() != ctx.s() || y.finite.size() != ctx.s())
    throw Error(Errc::WrongDimension, "det_pair: one finite vector per prime");
  QSElement r;
  r.real = x.real[0] * y.real[1] - x.real[1] * y.real[0];
  for (std::size_t i = 0; i < ctx.s(); ++i) {
    const auto& a = x.finite[i];
    const auto& b = y.finite[i];
    r.finite.push_back(a[0] * b[1] - a[1] * b[0]);
  }
  return r;
}

}  // namespace sarith
