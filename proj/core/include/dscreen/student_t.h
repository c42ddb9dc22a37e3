// Copyright 2026 The dscreen Authors
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

#ifndef DSCREEN_STUDENT_T_H_
#define DSCREEN_STUDENT_T_H_

namespace dscreen {

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double RegularizedIncompleteBeta(double a, double b, double x);

// Two-sided p-value 2 * (1 - CDF(|t|; df)) of Student's t distribution,
// computed as I_{df/(df+t^2)}(df/2, 1/2). Throws std::invalid_argument for
// df < 1 or non-finite t.
double StudentTTwoSidedP(double t, double df);

}  // namespace dscreen

#endif  // DSCREEN_STUDENT_T_H_
