/*
 * Copyright 2026 The sdrmap Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SDRMAP_DIAGNOSTICS_HPP_
#define SDRMAP_DIAGNOSTICS_HPP_

#include "sdrmap/admm.hpp"

namespace sdrmap {

struct Diagnostics {
  double gap = 0.0;
  double primal_inf = 0.0;
  double dual_inf = 0.0;
  double inf = 0.0;  // max(primal_inf, dual_inf)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
};

/// Scale-normalized duality gap and infeasibility:
///
///   gap = |<b,y> - <C,X>| / (1 + |<b,y>| + |<C,X>|)
///   inf = max( (||A(X)-b|| + ||min(P(X),0)||) / (1 + ||b||),
///              ||Cmin + A^*(y) - P^*(z) - S||_F / (1 + ||C||_F) )
///
/// where Cmin = -C is the cost of the equivalent minimization. Throws
/// DiagnosticsUnavailable when the duals are missing or mis-sized.
Diagnostics diagnostics(const SdrProblem& problem, const LiftedSolution& sol,
                        const DualCertificate& duals);

}  // namespace sdrmap

#endif  // SDRMAP_DIAGNOSTICS_HPP_
