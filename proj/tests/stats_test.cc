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

#include "cuedist/stats.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cuedist/error.h"

namespace cuedist {
namespace {

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

constexpr Level kLevels[] = {Level::kNull, Level::kMid, Level::kHigh};

// Three subjects, two items, full 3x3 grid; subject-major, then item, ICLD
// level, ICC level. Reference values below come from an independent OLS fit
// (sequential sums of squares) and standard t-test routines.
ScoreTable Fixture() {
  const int scores[] = {75, 66, 66, 68, 60, 51, 59, 41, 38, 75, 70, 68, 75, 59,
                        57, 63, 62, 56, 90, 77, 71, 70, 58, 54, 59, 53, 48, 81,
                        80, 61, 76, 73, 57, 74, 62, 54, 94, 83, 74, 77, 73, 64,
                        59, 51, 44, 89, 83, 70, 88, 71, 70, 77, 70, 55};
  ScoreTable t;
  size_t i = 0;
  for (const char* subject : {"P1", "P2", "P3"}) {
    for (const char* item : {"A", "B"}) {
      for (Level l : kLevels) {
        for (Level c : kLevels) {
          t.push_back({subject, item, l, c, ConditionLabel(l, c), scores[i++]});
        }
      }
    }
  }
  return t;
}

const AnovaRow& Row(const std::vector<AnovaRow>& rows, const std::string& name) {
  for (const AnovaRow& r : rows) {
    if (r.effect == name) return r;
  }
  FAIL("missing ANOVA row " << name);
  return rows.front();
}

TEST_CASE("one-way ANOVA example") {
  const std::vector<double> y = {1, 2, 3, 4, 5, 6};
  const std::vector<std::vector<std::string>> levels = {
      {"A"}, {"A"}, {"A"}, {"B"}, {"B"}, {"B"}};
  const auto rows = BalancedAnova({"g"}, levels, y, {{0}});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].f == doctest::Approx(13.5).epsilon(1e-12));
  CHECK(RelErr(rows[0].p, 0.0213116411288) <= 1e-6);
  CHECK(rows[1].effect == "Residual");
  CHECK(rows[1].df == 4);

  const std::vector<double> flat = {5, 5, 5, 5, 5, 5};
  const auto zero = BalancedAnova({"g"}, levels, flat, {{0}});
  CHECK(zero[0].f == 0.0);
  CHECK(zero[0].p == 1.0);
}

TEST_CASE("factorial ANOVA matches the reference fit") {
  const auto rows = AnovaFactorial(Fixture());
  struct Want {
    const char* name;
    double df, ss, f, p;
  };
  const Want want[] = {
      {"ICLDD", 2, 3364.14814815, 101.986053658, 5.30087432228e-16},
      {"ICCD", 2, 2357.14814815, 71.4582791632, 1.3298428003e-13},
      {"ICLDD:ICCD", 4, 9.51851851852, 0.144279635977, 0.964427110514},
      {"item:ICLDD", 2, 544.444444444, 16.5051412363, 6.93082241412e-06},
      {"item:ICCD", 2, 26.3333333333, 0.798309892448, 0.45749271287},
      {"subject", 2, 930.481481481, 28.2080723319, 3.09036192253e-08},
      {"item", 1, 433.5, 26.2835953197, 8.92992372655e-06},
  };
  for (const Want& w : want) {
    CAPTURE(w.name);
    const AnovaRow& r = Row(rows, w.name);
    CHECK(r.df == w.df);
    CHECK(RelErr(r.sum_sq, w.ss) <= 1e-9);
    CHECK(RelErr(r.f, w.f) <= 1e-6);
    CHECK(RelErr(r.p, w.p) <= 1e-6);
  }
  const AnovaRow& res = rows.back();
  CHECK(res.effect == "Residual");
  CHECK(res.df == 38);
  CHECK(RelErr(res.sum_sq, 626.740740741) <= 1e-9);
}

TEST_CASE("sums of squares add up to the total") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> score(0, 100);
  for (int trial = 0; trial < 20; ++trial) {
    ScoreTable t = Fixture();
    for (ScoreRow& r : t) r.score = score(rng);
    double mean = 0.0;
    for (const ScoreRow& r : t) mean += r.score;
    mean /= double(t.size());
    double total = 0.0;
    for (const ScoreRow& r : t) total += (r.score - mean) * (r.score - mean);
    double sum = 0.0, df = 0.0;
    for (const AnovaRow& r : AnovaFactorial(t)) {
      sum += r.sum_sq;
      df += r.df;
    }
    CHECK(std::abs(sum - total) <= 1e-9 * total);
    CHECK(df == double(t.size() - 1));
  }
}

TEST_CASE("an injected item by ICC interaction is detected") {
  ScoreTable t = Fixture();
  for (ScoreRow& r : t) {
    if (r.item_id == "B" && r.icc_level == Level::kHigh) r.score -= 25;
  }
  const auto rows = AnovaFactorial(t);
  CHECK(Row(rows, "item:ICCD").p < 1e-6);
  CHECK(Row(rows, "ICLDD:ICCD").p > 0.05);
}

TEST_CASE("unbalanced or incomplete designs are rejected") {
  ScoreTable t = Fixture();
  t.pop_back();
  CHECK_THROWS_AS(AnovaFactorial(t), Error);
  t = Fixture();
  t.push_back(t.front());
  CHECK_THROWS_AS(AnovaFactorial(t), Error);
}

TEST_CASE("paired t examples") {
  const std::vector<double> d = {1, 2, 3, 2}, zero(4, 0.0);
  const TTestResult r = PairedT(d, zero);
  CHECK(RelErr(r.t, 4.89897948557) <= 1e-9);
  CHECK(r.df == 3);
  CHECK(RelErr(r.p, 0.0162766034594) <= 1e-6);

  const std::vector<double> x = {3.1, 4.7, 2.2, 5.9, 4.4, 3.3};
  const std::vector<double> y = {1.0, 2.5, 1.7, 2.2, 0.4, 1.9};
  const TTestResult xy = PairedT(x, y);
  CHECK(RelErr(xy.t, 4.24182844848) <= 1e-6);
  CHECK(RelErr(xy.p, 0.0081553145886) <= 1e-6);

  const TTestResult same = PairedT(x, x);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);
  const std::vector<double> base = {50, 61, 72, 40};
  const std::vector<double> shifted = {55, 66, 77, 45};
  CHECK_THROWS_AS(PairedT(shifted, base), Error);
}

TEST_CASE("independent t example") {
  const std::vector<double> x = {3.1, 4.7, 2.2, 5.9, 4.4, 3.3, 6.1, 2.8, 4.0, 5.2};
  const std::vector<double> y = {1.0, 2.5, 1.7, 2.2, 0.4, 1.9};
  const TTestResult r = IndependentT(x, y);
  CHECK(RelErr(r.t, 4.25901224161) <= 1e-6);
  CHECK(r.df == 14);
  CHECK(RelErr(r.p, 0.00079414474345) <= 1e-6);
}

TEST_CASE("Bonferroni pairwise comparisons on the fixture") {
  struct Want {
    double t, p, p_adj;
  };
  const Want icld[] = {{7.81818181818, 0.0159693535408, 0.0479080606223},
                       {10.7242037937, 0.00858322005532, 0.025749660166},
                       {4.00310278004, 0.0571097832452, 0.171329349736}};
  const Want icc[] = {{18.0091351088, 0.00306910225915, 0.00920730677746},
                      {10.7556694924, 0.00853371319259, 0.0256011395778},
                      {3.92087843107, 0.0593190013725, 0.177957004118}};
  for (Factor f : {Factor::kIcld, Factor::kIcc}) {
    const auto c = PairedTBonferroni(Fixture(), f);
    REQUIRE(c.size() == 3);
    const Want* w = f == Factor::kIcld ? icld : icc;
    for (size_t i = 0; i < 3; ++i) {
      CAPTURE(i);
      CHECK(RelErr(c[i].t, w[i].t) <= 1e-6);
      CHECK(c[i].df == 2);
      CHECK(RelErr(c[i].p_raw, w[i].p) <= 1e-6);
      CHECK(RelErr(c[i].p_adjusted, w[i].p_adj) <= 1e-6);
      CHECK(c[i].significant == (w[i].p_adj < 0.05));
    }
    CHECK(c[0].a == Level::kNull);
    CHECK(c[0].b == Level::kMid);
    CHECK(c[2].a == Level::kMid);
    CHECK(c[2].b == Level::kHigh);
  }
}

TEST_CASE("Bonferroni adjustment properties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> score(0, 100);
  for (int trial = 0; trial < 20; ++trial) {
    ScoreTable t = Fixture();
    for (ScoreRow& r : t) r.score = score(rng);
    for (double alpha : {0.01, 0.05}) {
      for (const Comparison& c : PairedTBonferroni(t, Factor::kIcld, alpha)) {
        CHECK(c.p_adjusted >= c.p_raw);
        CHECK(c.p_adjusted <= 1.0);
        CHECK(c.p_adjusted == std::min(1.0, 3.0 * c.p_raw));
        CHECK(c.significant == (c.p_adjusted < alpha));
      }
    }
  }
  ScoreTable missing;
  for (const ScoreRow& r : Fixture()) {
    if (!(r.subject_id == "P2" && r.icld_level == Level::kHigh)) missing.push_back(r);
  }
  CHECK_THROWS_AS(PairedTBonferroni(missing, Factor::kIcld), Error);
}

TEST_CASE("Hedges' g") {
  const std::vector<double> a = {1, 2, 3}, b = {2, 3, 4};
  const EffectSize e = HedgesG(a, b);
  CHECK(e.g == doctest::Approx(-0.8).epsilon(1e-12));
  CHECK(e.j == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(HedgesG(b, a).g == -e.g);

  const std::vector<double> x = {3.1, 4.7, 2.2, 5.9, 4.4, 3.3, 6.1, 2.8, 4.0, 5.2};
  const std::vector<double> y = {1.0, 2.5, 1.7, 2.2, 0.4, 1.9};
  CHECK(RelErr(HedgesG(x, y).g, 2.07938022089) <= 1e-9);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> normal(50.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(8), q(11);
    for (double& v : p) v = normal(rng);
    for (double& v : q) v = normal(rng);
    const double g = HedgesG(p, q).g;
    CHECK(HedgesG(q, p).g == -g);
    std::vector<double> p2 = p, q2 = q;
    for (double& v : p2) v = 2.5 * v - 7.0;
    for (double& v : q2) v = 2.5 * v - 7.0;
    CHECK(HedgesG(p2, q2).g == doctest::Approx(g).epsilon(1e-12));
  }
  const std::vector<double> c = {4, 4, 4};
  CHECK_THROWS_AS(HedgesG(c, c), Error);
  CHECK_THROWS_AS(HedgesG(std::vector<double>{1}, a), Error);
}

TEST_CASE("Lilliefors statistic and guards") {
  const std::vector<double> x = {3.1, 4.7, 2.2, 5.9, 4.4, 3.3, 6.1, 2.8, 4.0, 5.2};
  CHECK(RelErr(LillieforsStatistic(x), 0.144279633451) <= 1e-6);
  CHECK_THROWS_AS(LillieforsStatistic(std::vector<double>(4, 1.0)), Error);
  CHECK_THROWS_AS(LillieforsStatistic(std::vector<double>(10, 1.0)), Error);
  const LillieforsResult a = Lilliefors(x, 2000, 1);
  const LillieforsResult b = Lilliefors(x, 2000, 1);
  CHECK(a.p == b.p);
  CHECK(a.p > 0.0);
  CHECK(a.p <= 1.0);
}

TEST_CASE("Lilliefors calibration and power") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  int rejections = 0, detected = 0;
  const int reps = 1000;
  std::vector<double> x(100);
  for (int r = 0; r < reps; ++r) {
    for (double& v : x) v = normal(rng);
    rejections += Lilliefors(x).p < 0.05;
    for (double& v : x) v = uniform(rng);
    detected += Lilliefors(x).p < 0.05;
  }
  const double rate = double(rejections) / reps;
  CHECK(rate >= 0.035);
  CHECK(rate <= 0.065);
  CHECK(double(detected) / reps > 0.5);
}

TEST_CASE("pooled curves") {
  const auto curves = PooledCurves(Fixture());
  REQUIRE(curves.size() == 3);
  struct Want {
    double mean, lo, hi;
  };
  // icc-major, then icld.
  const Want want[] = {
      {84, 63.2533598645, 104.746640136},
      {75.6666666667, 60.8483462127, 90.4849871207},
      {65.1666666667, 56.0112345458, 74.3220987875},
      {76.5, 57.3785930141, 95.6214069859},
      {65.6666666667, 50.1366662908, 81.1966670425},
      {56.5, 45.1162508994, 67.8837491006},
      {68.3333333333, 60.347947822, 76.3187188447},
      {58.8333333333, 41.1656587937, 76.501007873},
      {49.1666666667, 44.1469051487, 54.1864281846},
  };
  size_t i = 0;
  for (const Curve& c : curves) {
    CHECK(c.icc_level == kLevels[i / 3]);
    REQUIRE(c.points.size() == 3);
    for (const CurvePoint& p : c.points) {
      CAPTURE(i);
      CHECK(p.icld_level == kLevels[i % 3]);
      CHECK(p.n == 3);
      CHECK(RelErr(p.mean, want[i].mean) <= 1e-9);
      CHECK(RelErr(p.ci_low, want[i].lo) <= 1e-9);
      CHECK(RelErr(p.ci_high, want[i].hi) <= 1e-9);
      ++i;
    }
  }

  ScoreTable flat = Fixture();
  for (ScoreRow& r : flat) r.score = 80;
  for (const Curve& c : PooledCurves(flat)) {
    for (const CurvePoint& p : c.points) {
      CHECK(p.mean == 80.0);
      CHECK(p.ci_low == 80.0);
      CHECK(p.ci_high == 80.0);
    }
  }
}

TEST_CASE("item grouping") {
  const auto groups = GroupItems(Fixture(), {{"A", "solo"}, {"B", "mix"}});
  REQUIRE(groups.size() == 2);
  CHECK(groups.at("solo").size() == 27);
  for (const ScoreRow& r : groups.at("mix")) CHECK(r.item_id == "B");
  CHECK_THROWS_AS(GroupItems(Fixture(), {{"A", "solo"}}), Error);
}

TEST_CASE("score table validation") {
  ScoreTable t = Fixture();
  t[3].score = 101;
  CHECK_THROWS_AS(ValidateScoreTable(t), Error);
  t = Fixture();
  t[5].subject_id = "";
  CHECK_THROWS_AS(ValidateScoreTable(t), Error);
  CHECK_NOTHROW(ValidateScoreTable(Fixture()));
}

}  // namespace
}  // namespace cuedist
