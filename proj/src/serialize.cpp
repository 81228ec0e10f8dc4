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

#include "urnflow/serialize.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "urnflow/error.hpp"
#include "urnflow/theory.hpp"

namespace urnflow::io {
namespace {

using nlohmann::json;

constexpr const char* kEnsembleFormat = "urnflow.ensemble/1";

json config_json(const TrialEnsemble& e) {
  const auto& c = e.config();
  return json{{"dist", e.distribution().to_string()},
              {"colors", e.colors()},
              {"p", c.p},
              {"model", to_string(c.model)},
              {"seed", c.seed},
              {"trials", c.trials},
              {"population", to_string(c.population)},
              {"j_max", e.j_max()},
              {"keep_trials", c.keep_trials}};
}

// Non-finite numbers become null rather than invalid JSON.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("ensemble JSON: missing field '") + key + "'");
  return j.at(key).get<T>();
}

}  // namespace

std::string ensemble_to_json(const TrialEnsemble& e) {
  json out;
  out["format"] = kEnsembleFormat;
  out["config"] = config_json(e);
  out["trials_completed"] = e.trials();
  out["k_tilde_mean"] = number(e.k_tilde_mean());
  out["k_tilde_var"] = number(e.k_tilde_var());
  json per_j = json::array();
  for (int j = 0; j <= e.j_max(); ++j) {
    per_j.push_back({{"j", j},
                     {"mean_w", number(e.mean_w(j))},
                     {"var_w", number(e.var_w(j))},
                     {"mean_wplus", number(e.mean_wplus(j))},
                     {"var_wplus", number(e.var_wplus(j))}});
  }
  out["per_j"] = std::move(per_j);
  const auto& s = e.sums();
  out["sums"] = {{"w", s.w},           {"w2", s.w2},
                 {"wplus", s.wplus},   {"wplus2", s.wplus2},
                 {"k_tilde", s.k_tilde}, {"k_tilde2", s.k_tilde2}};
  // wplus_empirical[j] lists [value, trials] pairs.
  json hist = json::array();
  for (int j = 0; j <= e.j_max(); ++j) {
    json h = json::array();
    for (const auto& [value, count] : e.wplus_histogram(j)) h.push_back({value, count});
    hist.push_back(std::move(h));
  }
  out["wplus_empirical"] = std::move(hist);
  json summaries = json::array();
  for (const auto& t : e.summaries()) summaries.push_back({t.total_balls, t.draws, t.k_tilde});
  out["summaries"] = std::move(summaries);
  if (!e.per_trial().empty()) {
    json trials = json::array();
    for (const auto& st : e.per_trial()) {
      trials.push_back({{"w", st.w},
                        {"w_plus", st.w_plus},
                        {"k_tilde", st.k_tilde},
                        {"overflow", st.overflow}});
    }
    out["trials"] = std::move(trials);
  }
  return out.dump(1) + "\n";
}

TrialEnsemble ensemble_from_json(std::string_view text) {
  json in;
  try {
    in = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("ensemble JSON: ") + ex.what());
  }
  try {
    if (field<std::string>(in, "format") != kEnsembleFormat) {
      throw ParseError("ensemble JSON: unsupported format");
    }
    const json& c = in.at("config");
    SamplingConfig config;
    config.p = field<double>(c, "p");
    config.model = parse_sampling_model(field<std::string>(c, "model"));
    config.seed = field<std::uint64_t>(c, "seed");
    config.trials = field<std::int64_t>(c, "trials");
    config.population = parse_population_mode(field<std::string>(c, "population"));
    config.keep_trials = field<bool>(c, "keep_trials");
    const auto dist = FlowSizeDistribution::parse(field<std::string>(c, "dist"));
    const int j_max = field<int>(c, "j_max");
    TrialEnsemble e(dist, field<std::int64_t>(c, "colors"), config, j_max);

    const json& s = in.at("sums");
    TrialEnsemble::Sums sums;
    sums.w = field<std::vector<std::uint64_t>>(s, "w");
    sums.w2 = field<std::vector<std::uint64_t>>(s, "w2");
    sums.wplus = field<std::vector<std::uint64_t>>(s, "wplus");
    sums.wplus2 = field<std::vector<std::uint64_t>>(s, "wplus2");
    sums.k_tilde = field<std::uint64_t>(s, "k_tilde");
    sums.k_tilde2 = field<std::uint64_t>(s, "k_tilde2");
    const auto width = static_cast<std::size_t>(j_max) + 1;
    if (sums.w.size() != width || sums.w2.size() != width || sums.wplus.size() != width ||
        sums.wplus2.size() != width) {
      throw ParseError("ensemble JSON: sums do not match j_max");
    }

    std::vector<std::map<std::int64_t, std::int64_t>> hist;
    for (const auto& h : in.at("wplus_empirical")) {
      std::map<std::int64_t, std::int64_t> m;
      for (const auto& pair : h) m[pair.at(0).get<std::int64_t>()] = pair.at(1).get<std::int64_t>();
      hist.push_back(std::move(m));
    }
    if (hist.size() != width) throw ParseError("ensemble JSON: histograms do not match j_max");

    std::vector<TrialSummary> summaries;
    for (const auto& t : in.at("summaries")) {
      summaries.push_back({t.at(0).get<std::int64_t>(), t.at(1).get<std::int64_t>(),
                           t.at(2).get<std::int64_t>()});
    }
    std::vector<OccupancyStats> per_trial;
    if (in.contains("trials")) {
      for (const auto& t : in.at("trials")) {
        OccupancyStats st;
        st.w = field<std::vector<std::int64_t>>(t, "w");
        st.w_plus = field<std::vector<std::int64_t>>(t, "w_plus");
        st.k_tilde = field<std::int64_t>(t, "k_tilde");
        st.overflow = field<std::int64_t>(t, "overflow");
        per_trial.push_back(std::move(st));
      }
    }
    e.restore(field<std::int64_t>(in, "trials_completed"), std::move(sums), std::move(hist),
              std::move(summaries), std::move(per_trial));
    return e;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("ensemble JSON: ") + ex.what());
  } catch (const DomainError& ex) {
    throw ParseError(std::string("ensemble JSON: ") + ex.what());
  }
}

std::string ensemble_to_csv(const TrialEnsemble& e) {
  if (e.per_trial().empty()) {
    throw DomainError("CSV export needs per-trial statistics (run with keep_trials)");
  }
  std::ostringstream out;
  out << "trial,j,w,w_plus\n";
  for (std::size_t t = 0; t < e.per_trial().size(); ++t) {
    const auto& st = e.per_trial()[t];
    for (std::size_t j = 0; j < st.w.size(); ++j) {
      out << t << ',' << j << ',' << st.w[j] << ',' << st.w_plus[j] << '\n';
    }
  }
  return out.str();
}

std::string theory_table_json(const FlowSizeDistribution& dist, double p, int j_max,
                              double alpha) {
  if (j_max < 1) throw DomainError("theory table: j_max must be at least 1");
  json out;
  out["config"] = {{"dist", dist.to_string()}, {"p", p}, {"j_max", j_max}, {"alpha", alpha}};
  out["one_minus_q0"] = number(theory::one_minus_q0(dist, p));
  const auto* pareto = std::get_if<Pareto>(&dist.law());
  json rows = json::array();
  for (int j = 0; j <= j_max; ++j) {
    json row;
    json reasons = json::object();
    row["j"] = j;
    auto put = [&](const char* key, const std::function<double()>& f) {
      try {
        row[key] = number(f());
      } catch (const DomainError& ex) {
        row[key] = nullptr;
        reasons[key] = ex.what();
      }
    };
    put("q_j", [&] { return theory::q_j(dist, p, j); });
    put("q_tail", [&] { return theory::q_tail(dist, p, j); });
    put("chen_stein_bound", [&] { return theory::chen_stein_bound(dist, p, j); });
    if (pareto == nullptr) {
      row["wj_asymptotic"] = nullptr;
      row["wjplus_asymptotic"] = nullptr;
      reasons["wj_asymptotic"] = reasons["wjplus_asymptotic"] = "Pareto law only";
    } else if (!(j > pareto->a)) {
      row["wj_asymptotic"] = nullptr;
      row["wjplus_asymptotic"] = nullptr;
      reasons["wj_asymptotic"] = reasons["wjplus_asymptotic"] = "j ≤ a";
    } else {
      try {
        const auto asym = theory::pareto_asymptotics(pareto->a, pareto->b, p, j);
        row["wj_asymptotic"] = number(asym.wj_over_k);
        row["wjplus_asymptotic"] = number(asym.wjplus_over_k);
      } catch (const DomainError& ex) {
        row["wj_asymptotic"] = nullptr;
        row["wjplus_asymptotic"] = nullptr;
        reasons["wj_asymptotic"] = reasons["wjplus_asymptotic"] = ex.what();
      }
    }
    try {
      const auto rb = theory::ratio_bounds(dist, p, j, alpha);
      row["a1"] = number(rb.a1);
      row["a2"] = number(rb.a2);
      row["b_upper"] = number(rb.b_upper);
    } catch (const DomainError& ex) {
      row["a1"] = row["a2"] = row["b_upper"] = nullptr;
      reasons["a1"] = reasons["a2"] = reasons["b_upper"] = ex.what();
    }
    if (!reasons.empty()) row["reasons"] = std::move(reasons);
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out.dump(1) + "\n";
}

std::string estimation_report_json(const inference::EstimationReport& r,
                                   const TrialEnsemble& e) {
  json out;
  out["model"] = "pareto";
  out["config"] = config_json(e);
  out["j_range"] = {r.shape.j_lo, r.shape.j_hi};
  out["a_hat"] = number(r.shape.a_hat);
  out["valid"] = r.shape.valid;
  json per = json::array();
  for (const auto& s : r.shape.per_j) per.push_back({{"j", s.j}, {"a_hat", number(s.a_hat)}, {"used", s.used}});
  out["a_hat_per_j"] = std::move(per);
  out["k_tilde_observed"] = number(e.k_tilde_mean());
  if (r.per_j.empty()) {
    out["b_hat"] = nullptr;
    out["k_hat"] = nullptr;
  } else {
    out["b_hat"] = number(r.b_hat);
    out["k_hat"] = number(r.k_hat);
  }
  json scale = json::array();
  for (const auto& s : r.per_j) {
    scale.push_back({{"j", s.j},
                     {"b_hat", number(s.b_hat)},
                     {"k_hat", number(s.k_hat)},
                     {"residual_wplus", number(s.residual_wplus)},
                     {"residual_k_tilde", number(s.residual_k_tilde)},
                     {"remainder_magnitude", number(s.remainder_magnitude)}});
  }
  out["scale_per_j"] = std::move(scale);
  out["warnings"] = r.warnings;
  return out.dump(1) + "\n";
}

std::string weibull_fit_json(const inference::WeibullFit& fit,
                             const std::vector<inference::TailPoint>& points,
                             const TrialEnsemble& e) {
  json out;
  out["model"] = "weibull-tail";
  out["config"] = config_json(e);
  out["beta"] = number(fit.beta);
  out["eta"] = number(fit.eta);
  out["rss"] = number(fit.rss);
  out["points_used"] = fit.points;
  json tail = json::array();
  for (const auto& pt : points) tail.push_back({{"j", pt.j}, {"x", pt.x}, {"p_hat", number(pt.p_hat)}});
  out["tail"] = std::move(tail);
  return out.dump(1) + "\n";
}

}  // namespace urnflow::io
