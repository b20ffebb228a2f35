#include <cmath>

#include <json.hpp>

#include "common.hpp"
#include "sarith/haar.hpp"
#include "sarith/serialize.hpp"

namespace sarith::xcli {

namespace {

struct RegionCase {
  std::string name;
  std::vector<u64> primes;
  ProductRegion region;
};

std::vector<RegionCase> read_cases(const Config& cfg) {
  std::vector<RegionCase> out;
  for (const auto& text : cfg.table_array_json("regions")) {
    nlohmann::json j = nlohmann::json::parse(text);
    RegionCase c;
    c.name = j.value("name", "region" + std::to_string(out.size()));
    try {
      for (auto p : j.value("primes", std::vector<i64>{})) {
        if (p < 2 || !is_prime_u64(static_cast<u64>(p))) config_error("region primes must be primes");
        c.primes.push_back(static_cast<u64>(p));
      }
    } catch (const nlohmann::json::exception& e) {
      config_error(std::string("region primes: ") + e.what());
    }
    std::sort(c.primes.begin(), c.primes.end());
    j.erase("name");
    j.erase("primes");
    try {
      c.region = region_from_json(j.dump());
    } catch (const Error& e) {
      config_error("region '" + c.name + "': " + e.what());
    }
    out.push_back(std::move(c));
  }
  if (out.empty()) config_error("mean_value needs at least one [[regions]] entry");
  return out;
}

}  // namespace

ExperimentReport exp_mean_value(const Config& cfg, u64 seed, int threads) {
  const u64 n = cfg.count("samples", 10000);
  const double nsigma = cfg.num("nsigma", 3.0);
  auto cases = read_cases(cfg);
  std::vector<Context> ctxs;
  for (const auto& c : cases) {
    ctxs.push_back(cfg.context(c.primes));
    if (c.region.d != 2) config_error("mean_value needs d = 2");
    try {
      validate_region(ctxs.back(), c.region);
    } catch (const Error& e) {
      config_error("region '" + c.name + "': " + e.what());
    }
  }
  cfg.reject_unknown();

  ExperimentReport r;
  r.columns = {"region", "primes", "volume", "samples", "observed", "predicted", "se", "z", "abs_error", "rel_error",
               "all_observed", "all_predicted", "all_se", "all_z", "pass"};
  int passed = 0;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const Context& ctx = ctxs[ci];
    const ProductRegion& A = cases[ci].region;
    std::vector<double> prim(n), all(n);
    parallel_for(n, threads, [&](std::size_t i) {
      RngStream rng(seed, stream_id(ci, i));
      SLattice L = sample_lattice2(ctx, rng);
      prim[i] = static_cast<double>(primitive_count(L, A));
      all[i] = static_cast<double>(all_count(L, A));
    });
    Moments mp = moments(prim), ma = moments(all);
    double vol = region_volume(ctx, A);
    double pred = vol / zeta_S(ctx, 2);
    auto zscore = [](double obs, double want, double se) {
      if (se > 0) return (obs - want) / se;
      return obs == want ? 0.0 : std::copysign(INFINITY, obs - want);
    };
    double z = zscore(mp.mean, pred, mp.se);
    double za = zscore(ma.mean, vol, ma.se);
    bool ok = std::abs(z) <= nsigma;
    passed += ok;
    r.rows.push_back({cases[ci].name, primes_label(ctx.primes()), fmt(vol), fmt_int(static_cast<i64>(n)), fmt(mp.mean),
                      fmt(pred), fmt(mp.se), fmt(z), fmt(std::abs(mp.mean - pred)),
                      pred != 0 ? fmt(std::abs(mp.mean - pred) / pred) : "0", fmt(ma.mean), fmt(vol), fmt(ma.se),
                      fmt(za), ok ? "1" : "0"});
  }
  r.pass = passed == static_cast<int>(cases.size());
  add_summary(r, "regions_passed", std::to_string(passed) + "/" + std::to_string(cases.size()));
  add_summary(r, "samples_per_region", static_cast<double>(n));
  add_summary(r, "nsigma", nsigma);
  return r;
}

}  // namespace sarith::xcli
