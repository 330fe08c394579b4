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

#include <doctest.h>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <random>

namespace cuedist {
namespace {

namespace bm = boost::math;

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

TEST_CASE("F upper tail matches Boost") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> f_dist(0.05, 30.0);
  std::uniform_int_distribution<int> df_dist(1, 400);
  for (int i = 0; i < 20; ++i) {
    const double df1 = df_dist(rng) % 12 + 1;
    const double df2 = df_dist(rng);
    const double f = f_dist(rng);
    const double want = bm::cdf(bm::complement(bm::fisher_f(df1, df2), f));
    CAPTURE(df1);
    CAPTURE(df2);
    CAPTURE(f);
    CHECK(RelErr(FUpperTail(f, df1, df2), want) <= 1e-6);
  }
  CHECK(FUpperTail(0.0, 3, 10) == 1.0);
  // Tiny tails keep their relative precision.
  const double want = bm::cdf(bm::complement(bm::fisher_f(2, 400), 380.0));
  CHECK(RelErr(FUpperTail(380.0, 2, 400), want) <= 1e-6);
}

TEST_CASE("Student t matches Boost") {
  for (double df : {1.0, 2.0, 3.0, 6.0, 17.0, 120.0, 1000.0}) {
    const bm::students_t dist(df);
    for (double t : {-8.0, -2.5, -0.3, 0.0, 0.7, 1.96, 4.899, 12.0}) {
      CAPTURE(df);
      CAPTURE(t);
      CHECK(RelErr(StudentCdf(t, df), bm::cdf(dist, t)) <= 1e-6);
      CHECK(RelErr(StudentTwoSided(t, df),
                   2.0 * bm::cdf(bm::complement(dist, std::abs(t)))) <= 1e-6);
    }
    for (double p : {0.001, 0.025, 0.5, 0.9, 0.975}) {
      if (p == 0.5) {
        CHECK(StudentQuantile(p, df) == 0.0);
      } else {
        CHECK(RelErr(StudentQuantile(p, df), bm::quantile(dist, p)) <= 1e-6);
      }
    }
  }
  CHECK(StudentQuantile(0.975, 5.0) == -StudentQuantile(0.025, 5.0));
}

TEST_CASE("incomplete beta and normal cdf match Boost") {
  for (double a : {0.5, 1.0, 2.5, 30.0}) {
    for (double b : {0.5, 3.0, 50.0}) {
      for (double x : {0.01, 0.3, 0.5, 0.9, 0.999}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        CHECK(RelErr(RegularizedIncompleteBeta(a, b, x),
                     bm::cdf(bm::beta_distribution<>(a, b), x)) <= 1e-6);
      }
    }
  }
  CHECK(RegularizedIncompleteBeta(2.0, 3.0, 0.0) == 0.0);
  CHECK(RegularizedIncompleteBeta(2.0, 3.0, 1.0) == 1.0);
  for (double z : {-6.0, -1.0, 0.0, 0.5, 3.0}) {
    CHECK(RelErr(NormalCdf(z), bm::cdf(bm::normal(), z)) <= 1e-9);
  }
}

}  // namespace
}  // namespace cuedist
