#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <toml.hpp>

#include "sarith/serialize.hpp"

namespace sarith::xcli {

struct Config::Impl {
  toml::table tbl;
};

void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

Config::Config(const std::string& text) : impl_(std::make_unique<Impl>()) {
  try {
    impl_->tbl = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "toml: " << e.description() << " at line " << e.source().begin.line;
    config_error(os.str());
  }
}

Config::~Config() = default;

bool Config::has(const std::string& key) const {
  used_.insert(key);
  return impl_->tbl.contains(key);
}

double Config::num(const std::string& key, double def) const {
  if (!has(key)) return def;
  auto v = impl_->tbl[key].value<double>();
  if (!v || !std::isfinite(*v)) config_error("key '" + key + "' must be a finite number");
  return *v;
}

double Config::num(const std::string& key) const {
  if (!has(key)) config_error("missing key '" + key + "'");
  return num(key, 0.0);
}

i64 Config::integer(const std::string& key, i64 def) const {
  if (!has(key)) return def;
  auto v = impl_->tbl[key].value<i64>();
  if (!v || !impl_->tbl[key].is_integer()) config_error("key '" + key + "' must be an integer");
  return *v;
}

u64 Config::count(const std::string& key, u64 def) const {
  i64 v = integer(key, static_cast<i64>(def));
  if (v <= 0) config_error("key '" + key + "' must be positive");
  return static_cast<u64>(v);
}

std::string Config::str(const std::string& key, const std::string& def) const {
  if (!has(key)) return def;
  auto v = impl_->tbl[key].value<std::string>();
  if (!v) config_error("key '" + key + "' must be a string");
  return *v;
}

namespace {

template <class T>
std::vector<T> array_of(const toml::node& n, const std::string& key) {
  const auto* arr = n.as_array();
  if (!arr) config_error("key '" + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : *arr) {
    if constexpr (std::is_same_v<T, i64>) {
      if (!e.is_integer()) config_error("key '" + key + "' must hold integers");
    }
    auto v = e.value<T>();
    if (!v) config_error("key '" + key + "' has an element of the wrong type");
    out.push_back(*v);
  }
  return out;
}

std::vector<u64> to_primes(const std::vector<i64>& xs) {
  std::vector<u64> ps;
  for (i64 x : xs) {
    if (x < 2 || !is_prime_u64(static_cast<u64>(x))) config_error("prime list holds " + std::to_string(x));
    ps.push_back(static_cast<u64>(x));
  }
  std::vector<u64> sorted = ps;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) config_error("prime list has duplicates");
  return sorted;
}

std::string to_json(const toml::table& t) {
  std::ostringstream os;
  os << toml::json_formatter{t};
  return os.str();
}

}  // namespace

std::vector<i64> Config::ints(const std::string& key, std::vector<i64> def) const {
  if (!has(key)) return def;
  return array_of<i64>(*impl_->tbl.get(key), key);
}

std::vector<double> Config::nums(const std::string& key, std::vector<double> def) const {
  if (!has(key)) return def;
  return array_of<double>(*impl_->tbl.get(key), key);
}

std::vector<std::vector<u64>> Config::prime_sets() const {
  if (has("prime_sets")) {
    if (has("primes")) config_error("give either 'primes' or 'prime_sets'");
    const auto* arr = impl_->tbl.get("prime_sets")->as_array();
    if (!arr || arr->empty()) config_error("'prime_sets' must be a non-empty array of arrays");
    std::vector<std::vector<u64>> out;
    for (const auto& e : *arr) out.push_back(to_primes(array_of<i64>(e, "prime_sets")));
    return out;
  }
  return {primes()};
}

std::vector<u64> Config::primes() const { return to_primes(ints("primes", {})); }

static Context context_with(const std::vector<u64>& primes, int prec) {
  std::vector<int> ps;
  for (u64 p : primes) ps.push_back(capped_precision(p, prec));
  return Context(primes, ps);
}

Context Config::context(const std::vector<u64>& primes) const {
  i64 prec = integer("precision", Context::kDefaultPrecision);
  if (prec < 2 || prec > 62) config_error("'precision' must lie in [2, 62]");
  return context_with(primes, static_cast<int>(prec));
}

ProductRegion Config::region(const std::string& key) const {
  if (!has(key)) config_error("missing table '" + key + "'");
  const auto* t = impl_->tbl.get(key)->as_table();
  if (!t) config_error("'" + key + "' must be a table");
  try {
    return region_from_json(to_json(*t));
  } catch (const Error& e) {
    config_error("region '" + key + "': " + e.what());
  }
}

std::vector<std::string> Config::table_array_json(const std::string& key) const {
  if (!has(key)) return {};
  const auto* arr = impl_->tbl.get(key)->as_array();
  if (!arr) config_error("'" + key + "' must be an array of tables");
  std::vector<std::string> out;
  for (const auto& e : *arr) {
    const auto* t = e.as_table();
    if (!t) config_error("'" + key + "' must be an array of tables");
    out.push_back(to_json(*t));
  }
  return out;
}

void Config::reject_unknown() const {
  std::string extra;
  for (const auto& [k, v] : impl_->tbl) {
    std::string key(k.str());
    if (!used_.count(key)) extra += (extra.empty() ? "" : ", ") + key;
  }
  if (!extra.empty()) config_error("unknown config keys: " + extra);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f) {
  std::size_t workers = static_cast<std::size_t>(std::max(threads, 1));
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.n = static_cast<double>(xs.size());
  if (xs.empty()) return m;
  double s = 0;
  for (double x : xs) s += x;
  m.mean = s / m.n;
  if (xs.size() > 1) {
    double q = 0;
    for (double x : xs) q += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(q / (m.n - 1));
    m.se = m.sd / std::sqrt(m.n);
  }
  return m;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  f.n = x.size();
  if (x.size() < 2) return f;
  double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (x.size() > 2) {
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      double r = y[i] - f.intercept - f.slope * x[i];
      rss += r * r;
    }
    f.slope_se = std::sqrt(rss / (n - 2) / sxx);
  }
  return f;
}

double median(std::vector<double> xs) {
  if (xs.empty()) return std::nan("");
  std::sort(xs.begin(), xs.end());
  std::size_t h = xs.size() / 2;
  return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (n == 1) return {hi};
  std::vector<double> g;
  double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) g.push_back(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1)));
  g.back() = hi;
  return g;
}

std::string fmt(double x) { return format_num(x); }
std::string fmt_int(i64 x) { return std::to_string(x); }

std::string primes_label(const std::vector<u64>& primes) {
  std::string s = "inf";
  for (u64 p : primes) s += " " + std::to_string(p);
  return s;
}

void add_summary(ExperimentReport& r, const std::string& key, const std::string& value) {
  r.summary.emplace_back(key, value);
}
void add_summary(ExperimentReport& r, const std::string& key, double value) { r.summary.emplace_back(key, fmt(value)); }

}  // namespace sarith::xcli

namespace sarith {

std::string format_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<std::string> experiment_names() {
  return {"mean_value", "second_moment_cone", "schmidt_count", "kg", "loglaw", "random_minkowski"};
}

ExperimentReport run_experiment(const std::string& name, const std::string& toml_text, u64 seed, int threads) {
  using namespace xcli;
  Config cfg(toml_text);
  if (threads < 1) config_error("thread count must be positive");
  ExperimentReport r;
  if (name == "mean_value") r = exp_mean_value(cfg, seed, threads);
  else if (name == "second_moment_cone") r = exp_second_moment_cone(cfg, seed, threads);
  else if (name == "schmidt_count") r = exp_schmidt_count(cfg, seed, threads);
  else if (name == "kg") r = exp_kg(cfg, seed, threads);
  else if (name == "loglaw") r = exp_loglaw(cfg, seed, threads);
  else if (name == "random_minkowski") r = exp_random_minkowski(cfg, seed, threads);
  else config_error("unknown experiment '" + name + "'");
  r.experiment = name;
  return r;
}

std::string report_csv(const ExperimentReport& r) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out;
  for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + cell(r.columns[i]);
  out += "\n";
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell(row[i]);
    out += "\n";
  }
  return out;
}

std::string report_summary(const ExperimentReport& r) {
  std::string out = r.experiment + ": " + (r.pass ? "PASS" : "FAIL") + "\n";
  for (const auto& [k, v] : r.summary) out += "  " + k + " = " + v + "\n";
  return out;
}

}  // namespace sarith
