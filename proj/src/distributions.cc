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

#include "cuedist/distributions.h"

#include <cmath>

#include "cuedist/error.h"

namespace cuedist {

namespace {

// Continued fraction for I_x(a, b), modified Lentz; converges quickly for
// x < (a + 1) / (a + b + 2).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) return h;
  }
  Fail(ErrorKind::kDegenerate, "incomplete beta continued fraction did not converge");
}

}  // namespace

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double RegularizedIncompleteBeta(double a, double b, double x) {
  Require(a > 0.0 && b > 0.0, "incomplete beta needs a, b > 0");
  Require(x >= 0.0 && x <= 1.0, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double FUpperTail(double f, double df1, double df2) {
  Require(df1 > 0.0 && df2 > 0.0, "F distribution needs positive df");
  if (std::isnan(f)) Fail(ErrorKind::kInvalidArgument, "F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return RegularizedIncompleteBeta(0.5 * df2, 0.5 * df1,
                                   df2 / (df2 + df1 * f));
}

double StudentTwoSided(double t, double df) {
  Require(df > 0.0, "t distribution needs positive df");
  if (std::isnan(t)) Fail(ErrorKind::kInvalidArgument, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(0.5 * df, 0.5, df / (df + t * t));
}

double StudentCdf(double t, double df) {
  const double tail = 0.5 * StudentTwoSided(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double StudentQuantile(double p, double df) {
  Require(p > 0.0 && p < 1.0, "quantile needs p in (0, 1)");
  Require(df > 0.0, "t distribution needs positive df");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -StudentQuantile(1.0 - p, df);
  // Bracket, then bisect; the CDF is monotone and cheap.
  double lo = -1.0, hi = 1.0;
  while (StudentCdf(lo, df) > p) lo *= 2.0;
  while (StudentCdf(hi, df) < p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (StudentCdf(mid, df) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cuedist
