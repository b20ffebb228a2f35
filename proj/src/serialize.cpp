#include "sarith/serialize.hpp"

#include <json.hpp>

namespace sarith {

using nlohmann::json;

namespace {

[[noreturn]] void bad_region(const std::string& what) { throw Error(Errc::MalformedRegion, "region json: " + what); }
[[noreturn]] void bad_lattice(const std::string& what) { throw Error(Errc::InvalidArgument, "lattice json: " + what); }

json psi_json(PsiFunction::Kind kind, double e) {
  return {{"kind", kind == PsiFunction::Kind::Power ? "power" : "zero_beyond_one"}, {"exponent", e}};
}

template <class Psi>
Psi psi_from(const json& j) {
  Psi f;
  std::string kind = j.value("kind", "power");
  if (kind == "power") f.kind = Psi::Kind::Power;
  else if (kind == "zero_beyond_one") f.kind = Psi::Kind::ZeroBeyondOne;
  else bad_region("unknown psi kind " + kind);
  f.exponent = j.value("exponent", 1.0);
  return f;
}

RealRegion real_from(const json& j, int d) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") return RealBox{j.at("lo").get<std::vector<double>>(), j.at("hi").get<std::vector<double>>()};
  if (kind == "ball") {
    RealBall b;
    b.center = j.contains("center") ? j.at("center").get<std::vector<double>>()
                                    : std::vector<double>(static_cast<std::size_t>(d), 0.0);
    b.radius = j.at("radius").get<double>();
    std::string norm = j.value("norm", "euclidean");
    if (norm == "euclidean") b.norm = NormKind::Euclidean;
    else if (norm == "sup") b.norm = NormKind::Sup;
    else bad_region("unknown norm " + norm);
    return b;
  }
  if (kind == "shell") return RealShell{j.value("r_in", 0.0), j.at("r_out").get<double>()};
  if (kind == "psi") return RealPsi{psi_from<PsiFunction>(j.at("psi")), j.at("T").get<double>()};
  bad_region("unknown real kind " + kind);
}

PadicRegion padic_from(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "ball") return PadicBall{j.value("k", 0)};
  if (kind == "shell") return PadicShell{j.value("k", 0)};
  if (kind == "coset") return PadicCoset{j.at("v0").get<std::vector<i64>>(), j.value("k", 0)};
  if (kind == "psi") return PadicPsi{psi_from<PsiFunctionP>(j.at("psi")), j.value("t", 0)};
  bad_region("unknown finite kind " + kind);
}

}  // namespace

std::string region_to_json(const ProductRegion& A) {
  json j;
  j["d"] = A.d;
  j["real"] = std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealBox>) {
          return {{"kind", "box"}, {"lo", x.lo}, {"hi", x.hi}};
        } else if constexpr (std::is_same_v<T, RealBall>) {
          return {{"kind", "ball"},
                  {"center", x.center},
                  {"radius", x.radius},
                  {"norm", x.norm == NormKind::Sup ? "sup" : "euclidean"}};
        } else if constexpr (std::is_same_v<T, RealShell>) {
          return {{"kind", "shell"}, {"r_in", x.r_in}, {"r_out", x.r_out}};
        } else {
          return {{"kind", "psi"}, {"psi", psi_json(x.psi.kind, x.psi.exponent)}, {"T", x.T}};
        }
      },
      A.real);
  json fin = json::object();
  for (const auto& [p, r] : A.finite) {
    fin[std::to_string(p)] = std::visit(
        [](const auto& x) -> json {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, PadicBall>) {
            return {{"kind", "ball"}, {"k", x.k}};
          } else if constexpr (std::is_same_v<T, PadicShell>) {
            return {{"kind", "shell"}, {"k", x.k}};
          } else if constexpr (std::is_same_v<T, PadicCoset>) {
            return {{"kind", "coset"}, {"v0", x.v0}, {"k", x.k}};
          } else {
            auto kind = x.psi.kind == PsiFunctionP::Kind::Power ? PsiFunction::Kind::Power
                                                                : PsiFunction::Kind::ZeroBeyondOne;
            return {{"kind", "psi"}, {"psi", psi_json(kind, x.psi.exponent)}, {"t", x.t}};
          }
        },
        r);
  }
  j["finite"] = fin;
  return j.dump();
}

ProductRegion region_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    ProductRegion A;
    A.d = j.value("d", 2);
    if (A.d < 2 || A.d > 16) bad_region("dimension out of range");
    A.real = real_from(j.at("real"), A.d);
    if (j.contains("finite")) {
      for (const auto& [key, val] : j.at("finite").items()) {
        u64 p = std::stoull(key);
        if (!is_prime_u64(p)) bad_region("finite key " + key + " is not a prime");
        A.finite[p] = padic_from(val);
      }
    }
    std::vector<u64> keys;
    for (const auto& kv : A.finite) keys.push_back(kv.first);
    validate_region(Context(keys), A);
    return A;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    bad_region(e.what());
  }
}

std::string lattice_to_json(const SLattice& L) {
  const Context& ctx = L.context();
  json j;
  j["d"] = L.dim();
  j["primes"] = ctx.primes();
  std::vector<int> prec;
  for (std::size_t i = 0; i < ctx.s(); ++i) prec.push_back(ctx.precision(i));
  j["precision"] = prec;
  j["real"] = L.g_inf();
  if (L.g_inf_exact()) {
    std::vector<std::string> ex;
    for (const auto& q : *L.g_inf_exact()) ex.push_back(q.get_str());
    j["real_exact"] = ex;
  }
  json fin = json::array();
  for (const auto& h : L.finite())
    fin.push_back({{"p", h.p}, {"prec", h.prec}, {"shift", h.shift}, {"H", h.H}, {"inv_shift", h.inv_shift},
                   {"Hinv", h.Hinv}});
  j["finite"] = fin;
  if (const auto& c = L.cone_scale()) {
    json cf = json::array();
    for (const auto& v : c->finite) cf.push_back({{"p", v.p}, {"val", v.val}, {"unit", v.unit}, {"prec", v.prec}});
    j["cone"] = {{"real", c->real}, {"finite", cf}};
  }
  return j.dump();
}

SLattice lattice_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    int d = j.at("d").get<int>();
    if (d < 1 || d > 16) bad_lattice("dimension out of range");
    auto primes = j.value("primes", std::vector<u64>{});
    std::vector<int> prec = j.contains("precision") ? j.at("precision").get<std::vector<int>>()
                                                    : std::vector<int>(primes.size(), Context::kDefaultPrecision);
    if (prec.size() != primes.size()) bad_lattice("precision list length");
    Context ctx(primes, prec);
    std::vector<PadicMatrix> fin;
    for (const auto& f : j.value("finite", json::array())) {
      PadicMatrix h;
      h.p = f.at("p").get<u64>();
      h.prec = f.at("prec").get<int>();
      h.mod = checked_pow(h.p, h.prec);
      h.d = d;
      h.shift = f.value("shift", 0);
      h.inv_shift = f.value("inv_shift", 0);
      h.H = f.at("H").get<std::vector<u64>>();
      h.Hinv = f.at("Hinv").get<std::vector<u64>>();
      if (h.H.size() != static_cast<std::size_t>(d * d) || h.Hinv.size() != h.H.size()) bad_lattice("finite matrix size");
      fin.push_back(std::move(h));
    }
    SLattice L(ctx, d, j.at("real").get<std::vector<double>>(), std::move(fin));
    if (j.contains("real_exact")) {
      std::vector<mpq_class> ex;
      for (const auto& s : j.at("real_exact").get<std::vector<std::string>>()) {
        mpq_class q(s);
        q.canonicalize();
        ex.push_back(q);
      }
      L.set_exact_real(ex);
    }
    if (j.contains("cone")) {
      QSElement v;
      v.real = j.at("cone").at("real").get<double>();
      for (const auto& f : j.at("cone").value("finite", json::array()))
        v.finite.push_back(PadicValue::from_unit_digits(f.at("p").get<u64>(), f.at("val").get<long>(),
                                                        f.at("unit").get<u64>(), f.at("prec").get<int>()));
      L = L.with_cone(v);
    }
    return L;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    bad_lattice(e.what());
  }
}

}  // namespace sarith
