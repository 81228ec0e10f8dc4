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

#ifndef URNFLOW_QUADRATURE_HPP_
#define URNFLOW_QUADRATURE_HPP_

#include <functional>
#include <span>

namespace urnflow {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // |K15 - G7| summed over the final partition
  int intervals = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 0.0;
  double rel_tol = 1e-11;
  int max_intervals = 5000;
};

// Globally adaptive Gauss-Kronrod (7/15) on the finite partition given by
// `breakpoints` (sorted, at least two entries). The interval with the largest
// error estimate is bisected until the summed estimate meets the tolerance.
QuadratureResult integrate(const std::function<double(double)>& f,
                           std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

}  // namespace urnflow

#endif  // URNFLOW_QUADRATURE_HPP_
