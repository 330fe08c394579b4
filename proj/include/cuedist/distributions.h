// Copyright 2026 The cuedist Authors. All Rights Reserved.
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

// Distribution functions needed by the statistics module.

#ifndef CUEDIST_DISTRIBUTIONS_H_
#define CUEDIST_DISTRIBUTIONS_H_

namespace cuedist {

double NormalCdf(double z);

// I_x(a, b) for a, b > 0 and x in [0, 1].
double RegularizedIncompleteBeta(double a, double b, double x);

// P(F > f) for F ~ F(df1, df2).
double FUpperTail(double f, double df1, double df2);

// P(|T| >= |t|) for T ~ t(df).
double StudentTwoSided(double t, double df);

// P(T <= t).
double StudentCdf(double t, double df);

// Inverse of StudentCdf for p in (0, 1).
double StudentQuantile(double p, double df);

}  // namespace cuedist

#endif  // CUEDIST_DISTRIBUTIONS_H_
