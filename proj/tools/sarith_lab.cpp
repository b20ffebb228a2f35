// sarith-lab <experiment> --config x.toml --out x.csv --seed N [--threads N]
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sarith/sarith.h"

namespace {

std::string fetch(int (*get)(const sarith_report*, char*, size_t, size_t*), const sarith_report* r) {
  size_t need = 0;
  get(r, nullptr, 0, &need);
  std::vector<char> buf(need);
  if (get(r, buf.data(), buf.size(), &need) != SARITH_OK) return {};
  return std::string(buf.data());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-arithmetic primitive lattice experiments"};
  std::vector<std::string> names;
  for (size_t i = 0; i < sarith_experiment_count(); ++i) names.emplace_back(sarith_experiment_name(i));
  std::string experiment, config, out;
  uint64_t seed = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("experiment", experiment, "experiment name")->required()->check(CLI::IsMember(names));
  app.add_option("--config", config, "TOML configuration")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "CSV output path")->required();
  app.add_option("--seed", seed, "random seed")->required();
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::ifstream in(config, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  if (!in) {
    std::cerr << "cannot read " << config << "\n";
    return 1;
  }

  sarith_report* rep = nullptr;
  int rc = sarith_run_experiment(experiment.c_str(), ss.str().c_str(), seed, threads, &rep);
  if (rc == SARITH_E_DIVERGENCE_CHECK_FAILED) {
    std::cerr << experiment << ": FAIL (" << sarith_last_error() << ")\n";
    return 2;
  }
  if (rc != SARITH_OK) {
    std::cerr << "error [" << sarith_error_name(rc) << "]: " << sarith_last_error() << "\n";
    return 1;
  }
  std::string csv = fetch(sarith_report_csv, rep);
  std::string summary = fetch(sarith_report_summary, rep);
  int pass = 0;
  sarith_report_pass(rep, &pass);
  sarith_report_free(rep);

  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  os << csv;
  os.close();
  if (!os) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  std::cout << summary;
  return pass ? 0 : 2;
}
