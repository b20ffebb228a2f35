#include <algorithm>
#include <cmath>
#include <numbers>

#include "sarith/slattice.hpp"

namespace sarith {

double PsiFunction::operator()(double q) const {
  q = std::abs(q);
  if (q <= 1.0) return 1.0;
  if (kind == Kind::ZeroBeyondOne) return 0.0;
  return std::pow(q, -exponent);
}

double PsiFunction::integral(double T) const {
  if (T <= 1.0) return std::max(T, 0.0);
  if (kind == Kind::ZeroBeyondOne) return 1.0;
  if (exponent == 1.0) return 1.0 + std::log(T);
  return 1.0 + (std::pow(T, 1.0 - exponent) - 1.0) / (1.0 - exponent);
}

std::optional<long> PsiFunctionP::neg_log(long j) const {
  if (j <= 0) return 0L;
  if (kind == Kind::ZeroBeyondOne) return std::nullopt;
  return static_cast<long>(std::floor(exponent * static_cast<double>(j)));
}

PadicRegion ProductRegion::at(u64 p) const {
  auto it = finite.find(p);
  if (it == finite.end()) return PadicBall{0};
  return it->second;
}

ProductRegion ball_region(int d, double radius) {
  ProductRegion A;
  A.d = d;
  A.real = RealBall{std::vector<double>(static_cast<std::size_t>(d), 0.0), radius, NormKind::Euclidean};
  return A;
}

ProductRegion box_region(int d, double half_width) {
  ProductRegion A;
  A.d = d;
  A.real = RealBox{std::vector<double>(static_cast<std::size_t>(d), -half_width),
                   std::vector<double>(static_cast<std::size_t>(d), half_width)};
  return A;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::MalformedRegion, what);
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw Error(Errc::UnboundedRegion, "region parameter is not finite");
}

}  // namespace

void validate_region(const Context& ctx, const ProductRegion& A) {
  require(A.d >= 2, "dimension must be >= 2");
  std::size_t d = static_cast<std::size_t>(A.d);
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          require(r.lo.size() == d && r.hi.size() == d, "box dimension mismatch");
          for (std::size_t i = 0; i < d; ++i) {
            require_finite(r.lo[i]);
            require_finite(r.hi[i]);
            require(r.lo[i] <= r.hi[i], "box lo > hi");
          }
        } else if constexpr (std::is_same_v<T, RealBall>) {
          require(r.center.size() == d, "ball center dimension mismatch");
          for (double c : r.center) require_finite(c);
          require_finite(r.radius);
          require(r.radius >= 0, "negative radius");
        } else if constexpr (std::is_same_v<T, RealShell>) {
          require_finite(r.r_out);
          require(r.r_in >= 0 && r.r_in <= r.r_out, "shell radii out of order");
        } else {
          require(d == 2, "psi region needs d = 2");
          require_finite(r.T);
          require(r.T >= 0, "negative T");
          require(r.psi.exponent >= 0, "psi exponent must be non-negative");
        }
      },
      A.real);
  for (const auto& [p, reg] : A.finite) {
    if (!ctx.index_of(p)) throw Error(Errc::MalformedRegion, "finite part at a prime outside S");
    if (const auto* c = std::get_if<PadicCoset>(&reg)) require(c->v0.size() == d, "coset dimension mismatch");
    if (std::holds_alternative<PadicPsi>(reg)) require(d == 2, "p-adic psi region needs d = 2");
    if (const auto* q = std::get_if<PadicPsi>(&reg)) require(q->psi.exponent >= 0, "psi exponent must be non-negative");
  }
}

double real_volume(const RealRegion& r, int d) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          double v = 1;
          for (std::size_t i = 0; i < x.lo.size(); ++i) v *= x.hi[i] - x.lo[i];
          return v;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          if (x.norm == NormKind::Sup) return std::pow(2 * x.radius, d);
          double unit = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
          return unit * std::pow(x.radius, d);
        } else if constexpr (std::is_same_v<T, RealShell>) {
          double unit = std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
          return unit * (std::pow(x.r_out, d) - std::pow(x.r_in, d));
        } else {
          // |x| <= psi(|y|), |y| <= T
          return 4.0 * x.psi.integral(x.T);
        }
      },
      r);
}

double padic_volume(const PadicRegion& r, u64 p, int d) {
  double pd = std::pow(static_cast<double>(p), d);
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, PadicBall>) {
          return std::pow(pd, -x.k);
        } else if constexpr (std::is_same_v<T, PadicShell>) {
          return std::pow(pd, x.k) * (1.0 - 1.0 / pd);
        } else if constexpr (std::is_same_v<T, PadicCoset>) {
          return std::pow(pd, -x.k);
        } else {
          double pp = static_cast<double>(p);
          double v = 1.0;  // |y| <= 1 with |x| <= 1
          for (long j = 1; j <= x.t; ++j) {
            auto a = x.psi.neg_log(j);
            if (!a) continue;
            v += (std::pow(pp, j) - std::pow(pp, j - 1)) * std::pow(pp, -static_cast<double>(*a));
          }
          return v;
        }
      },
      r);
}

double region_volume(const Context& ctx, const ProductRegion& A) {
  validate_region(ctx, A);
  double v = real_volume(A.real, A.d);
  for (std::size_t i = 0; i < ctx.s(); ++i) v *= padic_volume(A.at(ctx.prime(i)), ctx.prime(i), A.d);
  return v;
}

bool real_contains(const RealRegion& r, std::span<const double> y) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] < x.lo[i] || y[i] > x.hi[i]) return false;
          return true;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          if (x.norm == NormKind::Sup) {
            for (std::size_t i = 0; i < y.size(); ++i)
              if (std::abs(y[i] - x.center[i]) > x.radius) return false;
            return true;
          }
          double s = 0;
          for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - x.center[i]) * (y[i] - x.center[i]);
          return s <= x.radius * x.radius;
        } else if constexpr (std::is_same_v<T, RealShell>) {
          double s = 0;
          for (double c : y) s += c * c;
          return s >= x.r_in * x.r_in && s <= x.r_out * x.r_out;
        } else {
          return std::abs(y[1]) <= x.T && std::abs(y[0]) <= x.psi(y[1]);
        }
      },
      r);
}

bool real_contains_exact(const RealRegion& r, std::span<const mpq_class> y) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] < mpq_class(x.lo[i]) || y[i] > mpq_class(x.hi[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          mpq_class rad(x.radius);
          if (x.norm == NormKind::Sup) {
            for (std::size_t i = 0; i < y.size(); ++i)
              if (abs(y[i] - mpq_class(x.center[i])) > rad) return false;
            return true;
          }
          mpq_class s = 0;
          for (std::size_t i = 0; i < y.size(); ++i) {
            mpq_class t = y[i] - mpq_class(x.center[i]);
            s += t * t;
          }
          return s <= rad * rad;
        } else if constexpr (std::is_same_v<T, RealShell>) {
          mpq_class s = 0, a(x.r_in), b(x.r_out);
          for (const auto& c : y) s += c * c;
          return s >= a * a && s <= b * b;
        } else {
          mpq_class ay = abs(y[1]), ax = abs(y[0]);
          if (ay > mpq_class(x.T)) return false;
          if (ay <= 1) return ax <= 1;
          if (x.psi.kind == PsiFunction::Kind::ZeroBeyondOne) return ax == 0;
          if (x.psi.exponent == 1.0) return ax * ay <= 1;
          return ax.get_d() <= x.psi(ay.get_d());
        }
      },
      r);
}

ProductRegion shrink_region(const Context& ctx, const ProductRegion& A, u64 l) {
  if (l == 0 || !ctx.in_NS(l)) throw Error(Errc::InvalidArgument, "shrink factor must lie in N_S");
  ProductRegion B = A;
  double s = 1.0 / static_cast<double>(l);
  std::visit(
      [&](auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          for (auto& v : x.lo) v *= s;
          for (auto& v : x.hi) v *= s;
        } else if constexpr (std::is_same_v<T, RealBall>) {
          for (auto& v : x.center) v *= s;
          x.radius *= s;
        } else if constexpr (std::is_same_v<T, RealShell>) {
          x.r_in *= s;
          x.r_out *= s;
        } else {
          throw Error(Errc::UnsupportedShape, "shrink_region: psi regions are not closed under scaling");
        }
      },
      B.real);
  // l is a p-adic unit: balls, shells and psi regions are unchanged; cosets move to v0 / l
  for (auto& [p, reg] : B.finite) {
    if (auto* c = std::get_if<PadicCoset>(&reg); c && c->k > 0) {
      u64 m = checked_pow(p, c->k);
      u64 li = invmod(l % m, m);
      for (auto& v : c->v0) v = static_cast<i64>(mulmod(mod_of(v, m), li, m));
    }
  }
  return B;
}

}  // namespace sarith
