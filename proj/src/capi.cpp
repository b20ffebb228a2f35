#include <cstring>
#include <string>

#include "sarith/analytic.hpp"
#include "sarith/haar.hpp"
#include "sarith/sarith.h"
#include "sarith/serialize.hpp"
#include "sarith/xcli.hpp"

struct sarith_context {
  sarith::Context ctx;
};
struct sarith_region {
  sarith::ProductRegion region;
};
struct sarith_lattice {
  sarith::SLattice lattice;
};
struct sarith_report {
  sarith::ExperimentReport report;
};

namespace {

thread_local std::string last_error;

template <class F>
int guard(F&& f) {
  try {
    f();
    last_error.clear();
    return SARITH_OK;
  } catch (const sarith::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SARITH_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SARITH_E_INTERNAL;
  }
}

int copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || cap < s.size() + 1) {
    last_error = "buffer too small";
    return SARITH_E_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return SARITH_OK;
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = sarith::experiment_names();
  return n;
}

}  // namespace

extern "C" {

const char* sarith_last_error(void) { return last_error.c_str(); }

const char* sarith_error_name(int code) {
  switch (code) {
    case SARITH_OK: return "Ok";
    case SARITH_E_NULL_POINTER: return "NullPointer";
    case SARITH_E_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case SARITH_E_INTERNAL: return "Internal";
    default:
      if (code >= SARITH_E_INVALID_ARGUMENT && code <= SARITH_E_CONFIG)
        return sarith::errc_name(static_cast<sarith::Errc>(code));
      return "Unknown";
  }
}

int sarith_context_new(const uint64_t* primes, size_t n, int precision, sarith_context** out) {
  if (!out || (n && !primes)) return SARITH_E_NULL_POINTER;
  return guard([&] {
    std::vector<sarith::u64> ps(primes, primes + n);
    std::vector<int> prec;
    for (auto p : ps) prec.push_back(sarith::capped_precision(p, precision));
    *out = new sarith_context{sarith::Context(ps, prec)};
  });
}

void sarith_context_free(sarith_context* ctx) { delete ctx; }

int sarith_context_l_s(const sarith_context* ctx, uint64_t* out) {
  if (!ctx || !out) return SARITH_E_NULL_POINTER;
  *out = ctx->ctx.L_S();
  return SARITH_OK;
}

int sarith_zeta_s(const sarith_context* ctx, int d, double* out) {
  if (!ctx || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = sarith::zeta_S(ctx->ctx, d); });
}

int sarith_phi_s_rational(const sarith_context* ctx, int64_t num, int64_t den, double tol, double* out) {
  if (!ctx || !out) return SARITH_E_NULL_POINTER;
  return guard([&] {
    if (den == 0) throw sarith::Error(sarith::Errc::InvalidArgument, "zero denominator");
    mpq_class q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q.canonicalize();
    *out = sarith::phi_S(ctx->ctx, sarith::QSElement::diag(ctx->ctx, q), tol).value;
  });
}

int sarith_totient_sum(const sarith_context* ctx, double N, uint64_t m0, int64_t* exact_sum, double* main_term,
                       double* error) {
  if (!ctx) return SARITH_E_NULL_POINTER;
  return guard([&] {
    auto r = sarith::totient_summatory_cong(ctx->ctx, N, m0);
    if (exact_sum) *exact_sum = r.exact_sum;
    if (main_term) *main_term = r.main_term;
    if (error) *error = r.error;
  });
}

int sarith_is_primitive(const sarith_context* ctx, const int64_t* num, const int64_t* den, size_t d, int* out) {
  if (!ctx || !num || !den || !out) return SARITH_E_NULL_POINTER;
  return guard([&] {
    std::vector<mpq_class> v;
    for (size_t i = 0; i < d; ++i) {
      if (den[i] == 0) throw sarith::Error(sarith::Errc::InvalidArgument, "zero denominator");
      mpq_class q(mpz_class(static_cast<long>(num[i])), mpz_class(static_cast<long>(den[i])));
      q.canonicalize();
      v.push_back(q);
    }
    *out = sarith::is_primitive(sarith::make_svector(ctx->ctx, v)) ? 1 : 0;
  });
}

int sarith_region_from_json(const char* json, sarith_region** out) {
  if (!json || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = new sarith_region{sarith::region_from_json(json)}; });
}

int sarith_region_to_json(const sarith_region* r, char* buf, size_t cap, size_t* needed) {
  if (!r) return SARITH_E_NULL_POINTER;
  std::string s;
  int rc = guard([&] { s = sarith::region_to_json(r->region); });
  return rc ? rc : copy_out(s, buf, cap, needed);
}

int sarith_region_volume(const sarith_context* ctx, const sarith_region* r, double* out) {
  if (!ctx || !r || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = sarith::region_volume(ctx->ctx, r->region); });
}

void sarith_region_free(sarith_region* r) { delete r; }

int sarith_lattice_identity(const sarith_context* ctx, int d, sarith_lattice** out) {
  if (!ctx || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = new sarith_lattice{sarith::SLattice(ctx->ctx, d)}; });
}

int sarith_lattice_from_json(const char* json, sarith_lattice** out) {
  if (!json || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = new sarith_lattice{sarith::lattice_from_json(json)}; });
}

int sarith_lattice_to_json(const sarith_lattice* L, char* buf, size_t cap, size_t* needed) {
  if (!L) return SARITH_E_NULL_POINTER;
  std::string s;
  int rc = guard([&] { s = sarith::lattice_to_json(L->lattice); });
  return rc ? rc : copy_out(s, buf, cap, needed);
}

int sarith_lattice_sample2(const sarith_context* ctx, uint64_t seed, uint64_t stream, sarith_lattice** out) {
  if (!ctx || !out) return SARITH_E_NULL_POINTER;
  return guard([&] {
    sarith::RngStream rng(seed, stream);
    *out = new sarith_lattice{sarith::sample_lattice2(ctx->ctx, rng)};
  });
}

int sarith_primitive_count(const sarith_lattice* L, const sarith_region* r, uint64_t* out) {
  if (!L || !r || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = sarith::primitive_count(L->lattice, r->region); });
}

int sarith_all_count(const sarith_lattice* L, const sarith_region* r, uint64_t* out) {
  if (!L || !r || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = sarith::all_count(L->lattice, r->region); });
}

int sarith_alpha1(const sarith_lattice* L, uint64_t denominator_bound, double* value, int* certified) {
  if (!L || !value) return SARITH_E_NULL_POINTER;
  return guard([&] {
    auto a = sarith::alpha_1(L->lattice, denominator_bound);
    *value = a.value;
    if (certified) *certified = a.certified ? 1 : 0;
  });
}

void sarith_lattice_free(sarith_lattice* L) { delete L; }

size_t sarith_experiment_count(void) { return names().size(); }

const char* sarith_experiment_name(size_t i) { return i < names().size() ? names()[i].c_str() : nullptr; }

int sarith_run_experiment(const char* name, const char* toml, uint64_t seed, int threads, sarith_report** out) {
  if (!name || !toml || !out) return SARITH_E_NULL_POINTER;
  return guard([&] { *out = new sarith_report{sarith::run_experiment(name, toml, seed, threads)}; });
}

int sarith_report_pass(const sarith_report* r, int* out) {
  if (!r || !out) return SARITH_E_NULL_POINTER;
  *out = r->report.pass ? 1 : 0;
  return SARITH_OK;
}

int sarith_report_csv(const sarith_report* r, char* buf, size_t cap, size_t* needed) {
  if (!r) return SARITH_E_NULL_POINTER;
  return copy_out(sarith::report_csv(r->report), buf, cap, needed);
}

int sarith_report_summary(const sarith_report* r, char* buf, size_t cap, size_t* needed) {
  if (!r) return SARITH_E_NULL_POINTER;
  return copy_out(sarith::report_summary(r->report), buf, cap, needed);
}

void sarith_report_free(sarith_report* r) { delete r; }

}  // extern "C"
