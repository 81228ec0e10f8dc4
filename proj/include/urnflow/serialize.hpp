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

#ifndef URNFLOW_SERIALIZE_HPP_
#define URNFLOW_SERIALIZE_HPP_

#include <string>
#include <string_view>

#include "urnflow/inference.hpp"
#include "urnflow/simulator.hpp"

// JSON and CSV forms of ensembles, theory tables and estimation reports.
// Output is deterministic: same inputs give the same bytes.
namespace urnflow::io {

// Per-trial statistics are written when the ensemble kept them.
std::string ensemble_to_json(const TrialEnsemble& ensemble);
// Throws ParseError on malformed input.
TrialEnsemble ensemble_from_json(std::string_view text);
// Header `trial,j,w,w_plus`, one row per (trial, j). Needs per-trial stats.
std::string ensemble_to_csv(const TrialEnsemble& ensemble);

// Rows j = 0..j_max with q_j, q_tail, chen_stein_bound, wj_asymptotic,
// wjplus_asymptotic, a1, a2, b_upper. A value that does not exist for a row
// is null and its reason is listed under "reasons".
std::string theory_table_json(const FlowSizeDistribution& dist, double p, int j_max,
                              double alpha);

std::string estimation_report_json(const inference::EstimationReport& report,
                                   const TrialEnsemble& ensemble);
std::string weibull_fit_json(const inference::WeibullFit& fit,
                             const std::vector<inference::TailPoint>& points,
                             const TrialEnsemble& ensemble);

}  // namespace urnflow::io

#endif  // URNFLOW_SERIALIZE_HPP_
