//
// Copyright 2026 The urnflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// urnflow command-line front end. Talks to the library only through the C
// interface.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "urnflow/urnflow.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Usage-type problems exit with 2, everything else with 1.
int exit_code(urnflow_status status) {
  switch (status) {
    case URNFLOW_OK:
      return kExitOk;
    case URNFLOW_ERR_PARSE:
    case URNFLOW_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    default:
      return kExitFailure;
  }
}

int report(urnflow_status status) {
  std::cerr << "urnflow: " << urnflow_status_string(status) << ": " << urnflow_last_error()
            << "\n";
  return exit_code(status);
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool write_output(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return std::fflush(stdout) == 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    std::cerr << "urnflow: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// RAII for strings handed out by the library.
struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { urnflow_string_free(s); }
};

struct Distribution {
  urnflow_distribution* d = nullptr;
  ~Distribution() { urnflow_distribution_free(d); }
};

struct Ensemble {
  urnflow_ensemble* e = nullptr;
  ~Ensemble() { urnflow_ensemble_free(e); }
};

// Flag value if given, else the config-file value, else the default.
template <class T>
std::optional<T> pick(const std::optional<T>& flag, const json& file, const char* key) {
  if (flag) return flag;
  if (file.contains(key)) {
    try {
      return file.at(key).get<T>();
    } catch (const json::exception&) {
      throw UsageError(std::string("config: bad value for '") + key + "'");
    }
  }
  return std::nullopt;
}

struct SimulateArgs {
  std::optional<std::string> dist, model, population, format, output;
  std::optional<std::int64_t> colors, trials;
  std::optional<double> p;
  std::optional<std::uint64_t> seed;
  std::optional<int> j_max, threads;
  bool keep_trials = false;
  std::string config;
};

int run_simulate(const SimulateArgs& a) {
  json file = json::object();
  if (!a.config.empty()) {
    try {
      file = json::parse(read_file(a.config));
    } catch (const json::exception& e) {
      throw UsageError(std::string("config: ") + e.what());
    }
  }
  const auto dist = pick(a.dist, file, "dist");
  const auto colors = pick(a.colors, file, "colors");
  const auto p = pick(a.p, file, "p");
  if (!dist) throw UsageError("missing --dist");
  if (!colors) throw UsageError("missing --colors");
  if (!p) throw UsageError("missing --p");
  const std::string model = pick(a.model, file, "model").value_or("uniform");
  const std::string population = pick(a.population, file, "population").value_or("redrawn");
  const std::string format = pick(a.format, file, "format").value_or("json");
  const std::string output = pick(a.output, file, "output").value_or("-");

  urnflow_sampling_config cfg;
  urnflow_sampling_config_init(&cfg);
  cfg.p = *p;
  cfg.trials = pick(a.trials, file, "trials").value_or(1);
  cfg.seed = pick(a.seed, file, "seed").value_or(0);
  cfg.j_max = pick(a.j_max, file, "j_max").value_or(64);
  cfg.threads = pick(a.threads, file, "threads").value_or(0);
  if (model == "uniform") {
    cfg.model = URNFLOW_MODEL_UNIFORM;
  } else if (model == "probabilistic") {
    cfg.model = URNFLOW_MODEL_PROBABILISTIC;
  } else {
    throw UsageError("--model must be uniform or probabilistic");
  }
  if (population == "redrawn") {
    cfg.population = URNFLOW_POPULATION_REDRAWN;
  } else if (population == "fixed") {
    cfg.population = URNFLOW_POPULATION_FIXED;
  } else {
    throw UsageError("--population must be redrawn or fixed");
  }
  if (format != "json" && format != "csv") throw UsageError("--format must be json or csv");
  cfg.keep_trials = (a.keep_trials || format == "csv") ? 1 : 0;

  Distribution d;
  if (auto s = urnflow_distribution_parse(dist->c_str(), &d.d); s != URNFLOW_OK) {
    return report(s);
  }
  Ensemble e;
  if (auto s = urnflow_simulate(d.d, *colors, &cfg, &e.e); s != URNFLOW_OK) {
    // Bad parameters are usage errors here; failures inside a trial are not.
    const int code = report(s);
    return s == URNFLOW_ERR_DOMAIN ? kExitUsage : code;
  }
  OwnedString text;
  const auto s = format == "csv" ? urnflow_ensemble_to_csv(e.e, &text.s)
                                 : urnflow_ensemble_to_json(e.e, &text.s);
  if (s != URNFLOW_OK) return report(s);
  return write_output(output, text.s) ? kExitOk : kExitFailure;
}

int run_theory(const std::string& dist, double p, int j_max, double alpha,
               const std::string& output) {
  Distribution d;
  if (auto s = urnflow_distribution_parse(dist.c_str(), &d.d); s != URNFLOW_OK) return report(s);
  OwnedString text;
  if (auto s = urnflow_theory_table_json(d.d, p, j_max, alpha, &text.s); s != URNFLOW_OK) {
    const int code = report(s);
    return s == URNFLOW_ERR_DOMAIN ? kExitUsage : code;
  }
  return write_output(output, text.s) ? kExitOk : kExitFailure;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--j-range expects lo:hi");
  try {
    std::size_t used = 0;
    const int lo = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw UsageError("--j-range expects lo:hi");
    const std::string rest = text.substr(colon + 1);
    const int hi = std::stoi(rest, &used);
    if (used != rest.size()) throw UsageError("--j-range expects lo:hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--j-range expects lo:hi");
  }
}

int run_estimate(const std::string& input, const std::string& range, const std::string& model,
                 const std::string& output) {
  std::string text;
  try {
    text = input == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                        : read_file(input);
  } catch (const UsageError&) {
    std::cerr << "urnflow: cannot read " << input << "\n";
    return kExitUsage;
  }
  int lo = 0;
  int hi = 0;
  if (!range.empty()) {
    std::tie(lo, hi) = parse_range(range);
  } else if (model == "pareto") {
    lo = 3;
    hi = 10;
  }
  Ensemble e;
  if (auto s = urnflow_ensemble_from_json(text.c_str(), &e.e); s != URNFLOW_OK) return report(s);
  OwnedString out;
  int valid = 0;
  if (auto s = urnflow_estimate_json(e.e, lo, hi, model.c_str(), &out.s, &valid);
      s != URNFLOW_OK) {
    return report(s);
  }
  if (!write_output(output, out.s)) return kExitFailure;
  if (!valid) {
    std::cerr << "urnflow: fitted model rejected (see warnings)\n";
    return kExitFailure;
  }
  return kExitOk;
}

int run_verify(const std::string& suite, bool quick, std::uint64_t seed, int threads,
               const std::string& output) {
  OwnedString out;
  const auto s = urnflow_verify_json(suite.c_str(), quick ? 1 : 0, seed, threads, &out.s);
  if (out.s == nullptr) return report(s);
  try {
    const auto r = json::parse(out.s);
    for (const auto& c : r.at("criteria")) {
      std::cerr << (c.at("passed").get<bool>() ? "PASS" : "FAIL") << " criterion "
                << c.at("id").get<int>() << ": " << c.at("title").get<std::string>() << "\n";
    }
  } catch (const json::exception&) {
  }
  if (!write_output(output, out.s)) return kExitFailure;
  return s == URNFLOW_OK ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"urnflow: sampled occupancy statistics, theory and estimation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", urnflow_version());

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run sampling trials and write the ensemble");
  simulate->add_option("--dist", sim.dist, "Flow-size law, e.g. pareto:a=1.5,b=1");
  simulate->add_option("--colors,-K", sim.colors, "Number of colors K");
  simulate->add_option("--p", sim.p, "Sampling fraction in (0, 1)");
  simulate->add_option("--model", sim.model, "uniform | probabilistic");
  simulate->add_option("--trials", sim.trials, "Number of trials");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--j-max", sim.j_max, "Largest j tracked");
  simulate->add_option("--population", sim.population, "redrawn | fixed");
  simulate->add_option("--threads", sim.threads, "Worker threads (0: URNFLOW_THREADS or all)");
  simulate->add_option("--format", sim.format, "json | csv");
  simulate->add_option("--output,-o", sim.output, "Output file, - for stdout");
  simulate->add_flag("--keep-trials", sim.keep_trials, "Store per-trial statistics in JSON");
  simulate->add_option("--config", sim.config, "JSON file with defaults; flags take precedence");

  std::string th_dist;
  double th_p = 0.0;
  int th_jmax = 20;
  double th_alpha = 0.6;
  std::string th_out = "-";
  auto* theory = app.add_subcommand("theory", "Tabulate Q_j, bounds and asymptotics");
  theory->add_option("--dist", th_dist, "Flow-size law")->required();
  theory->add_option("--p", th_p, "Sampling fraction")->required();
  theory->add_option("--j-max", th_jmax, "Largest j");
  theory->add_option("--alpha", th_alpha, "Exponent of the ratio bounds, in (1/2, 1)");
  theory->add_option("--output,-o", th_out, "Output file, - for stdout");

  std::string est_in;
  std::string est_range;
  std::string est_model = "pareto";
  std::string est_out = "-";
  auto* estimate = app.add_subcommand("estimate", "Estimate law parameters from an ensemble");
  estimate->add_option("input", est_in, "Ensemble JSON, - for stdin")->required();
  estimate->add_option("--j-range", est_range, "lo:hi (pareto default 3:10)");
  estimate->add_option("--model", est_model, "pareto | weibull-tail")
      ->check(CLI::IsMember({"pareto", "weibull-tail"}));
  estimate->add_option("--output,-o", est_out, "Output file, - for stdout");

  std::string suite = "all";
  bool quick = false;
  std::uint64_t v_seed = 20260101;
  int v_threads = 0;
  std::string v_out = "-";
  auto* verify = app.add_subcommand("verify", "Run acceptance suites");
  verify->add_option("suite", suite, "means | estimators | poisson | tails | identities | all");
  verify->add_flag("--quick", quick, "Smaller ensembles");
  verify->add_option("--seed", v_seed, "Master seed");
  verify->add_option("--threads", v_threads, "Worker threads");
  verify->add_option("--output,-o", v_out, "Output file, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*theory) return run_theory(th_dist, th_p, th_jmax, th_alpha, th_out);
    if (*estimate) return run_estimate(est_in, est_range, est_model, est_out);
    if (*verify) return run_verify(suite, quick, v_seed, v_threads, v_out);
  } catch (const UsageError& e) {
    std::cerr << "urnflow: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }
  return kExitUsage;
}
