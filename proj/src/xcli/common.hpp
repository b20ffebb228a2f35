// Shared plumbing for the experiment drivers.
#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "sarith/haar.hpp"
#include "sarith/slattice.hpp"
#include "sarith/xcli.hpp"

namespace sarith::xcli {

// Typed access to a TOML document; every key read is remembered so leftovers can be rejected.
class Config {
 public:
  explicit Config(const std::string& text);
  ~Config();
  Config(const Config&) = delete;
  Config& operator=(const Config&) = delete;

  bool has(const std::string& key) const;
  double num(const std::string& key, double def) const;
  double num(const std::string& key) const;
  i64 integer(const std::string& key, i64 def) const;
  u64 count(const std::string& key, u64 def) const;  // > 0
  std::string str(const std::string& key, const std::string& def) const;
  std::vector<i64> ints(const std::string& key, std::vector<i64> def) const;
  std::vector<double> nums(const std::string& key, std::vector<double> def) const;

  // "prime_sets" (array of arrays) or "primes" (one array); default {{}}.
  std::vector<std::vector<u64>> prime_sets() const;
  std::vector<u64> primes() const;
  Context context(const std::vector<u64>& primes) const;  // honours "precision"
  ProductRegion region(const std::string& key) const;     // table with d / real / finite
  // [[key]] array of tables, each converted to JSON text
  std::vector<std::string> table_array_json(const std::string& key) const;

  void reject_unknown() const;  // ConfigError naming unread top-level keys

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable std::set<std::string> used_;
};

[[noreturn]] void config_error(const std::string& what);

// Run f(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f);

struct Moments {
  double n = 0, mean = 0, sd = 0, se = 0;
};
Moments moments(const std::vector<double>& xs);  // sequential, order-fixed

struct LineFit {
  double slope = 0, intercept = 0, slope_se = 0;
  std::size_t n = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> xs);
std::vector<double> log_grid(double lo, double hi, std::size_t n);

// Stream ids: experiment-local block in the high bits, trial index in the low bits.
inline u64 stream_id(u64 block, u64 trial) { return (block << 40) | trial; }

// Gaussian matrix rescaled to determinant 1.
std::vector<double> generic_real_sl(int d, RngStream& rng);

std::string fmt(double x);
std::string fmt_int(i64 x);
std::string primes_label(const std::vector<u64>& primes);
void add_summary(ExperimentReport& r, const std::string& key, const std::string& value);
void add_summary(ExperimentReport& r, const std::string& key, double value);

ExperimentReport exp_mean_value(const Config& cfg, u64 seed, int threads);
ExperimentReport exp_second_moment_cone(const Config& cfg, u64 seed, int threads);
ExperimentReport exp_schmidt_count(const Config& cfg, u64 seed, int threads);
ExperimentReport exp_kg(const Config& cfg, u64 seed, int threads);
ExperimentReport exp_loglaw(const Config& cfg, u64 seed, int threads);
ExperimentReport exp_random_minkowski(const Config& cfg, u64 seed, int threads);

}  // namespace sarith::xcli
