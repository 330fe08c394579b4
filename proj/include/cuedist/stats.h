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

// Statistics over MUSHRA score tables: Lilliefors normality test, balanced
// factorial ANOVA, Bonferroni-corrected pairwise t-tests, Hedges' g and
// pooled mean curves with t confidence intervals.

#ifndef CUEDIST_STATS_H_
#define CUEDIST_STATS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cuedist/distort.h"

namespace cuedist {

struct ScoreRow {
  std::string subject_id;
  std::string item_id;
  Level icld_level = Level::kNa;
  Level icc_level = Level::kNa;
  std::string condition_label;
  int score = 0;

  bool factorial() const {
    return icld_level != Level::kNa && icc_level != Level::kNa;
  }
  bool operator==(const ScoreRow&) const = default;
};

using ScoreTable = std::vector<ScoreRow>;

// Scores in [0, 100]; (subject, item, condition) unique; levels are either
// both set or both n/a. Throws Error(kData).
void ValidateScoreTable(const ScoreTable& table);

// ---------------------------------------------------------------- normality

struct LillieforsResult {
  double statistic = 0.0;
  double p = 1.0;
};

// Kolmogorov-Smirnov distance to the normal with the sample mean and
// standard deviation.
double LillieforsStatistic(std::span<const double> samples);

// p by Monte Carlo: the fraction of `reps` simulated normal samples of the
// same size whose statistic is at least the observed one, (k + 1) /
// (reps + 1). The null distribution depends only on (n, reps, seed) and is
// cached.
LillieforsResult Lilliefors(std::span<const double> samples,
                            int reps = 10000, uint64_t seed = 20240101);

// ------------------------------------------------------------------- ANOVA

struct AnovaRow {
  std::string effect;
  double sum_sq = 0.0;
  double df = 0.0;
  double mean_sq = 0.0;
  double f = 0.0;  // 0 for the residual row
  double p = 1.0;
};

// Balanced-design ANOVA. `levels[i][j]` is the level of factor j for
// observation i. Every combination of factor levels must occur equally
// often. `effects` lists factor index sets (main effects and interactions);
// the residual absorbs everything else. The last returned row is
// "Residual".
std::vector<AnovaRow> BalancedAnova(
    const std::vector<std::string>& factor_names,
    const std::vector<std::vector<std::string>>& levels,
    std::span<const double> y, const std::vector<std::vector<size_t>>& effects);

// Factorial rows only (anchor excluded): fixed ICLD and ICC levels with
// subject and item as blocking factors. Effects: ICLDD, ICCD, ICLDD:ICCD,
// item:ICLDD, item:ICCD, subject, item, Residual.
std::vector<AnovaRow> AnovaFactorial(const ScoreTable& table);

// ------------------------------------------------------------- comparisons

enum class Factor { kIcld, kIcc };
std::string_view FactorName(Factor factor);

struct Comparison {
  Level a = Level::kNull;
  Level b = Level::kNull;
  double t = 0.0;
  double df = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool significant = false;
};

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Paired t on the differences a - b. Zero differences give t = 0, p = 1;
// constant non-zero differences are degenerate (Error(kDegenerate)).
TTestResult PairedT(std::span<const double> a, std::span<const double> b);
// Two-sample t with pooled variance.
TTestResult IndependentT(std::span<const double> a, std::span<const double> b);

// All level pairs of `factor` among factorial rows. Each subject's scores are
// averaged over the remaining cells first. p_adjusted = min(1, m p_raw).
std::vector<Comparison> PairedTBonferroni(const ScoreTable& table,
                                          Factor factor, double alpha = 0.05,
                                          bool independent = false);

// ------------------------------------------------------------ effect sizes

struct EffectSize {
  double g = 0.0;
  size_t n1 = 0;
  size_t n2 = 0;
  double j = 1.0;
};

// g = J (mean_a - mean_b) / s_pooled, J = 1 - 3 / (4 (n1 + n2 - 2) - 1).
EffectSize HedgesG(std::span<const double> a, std::span<const double> b);

// -------------------------------------------------------------- the curves

struct CurvePoint {
  Level icld_level = Level::kNull;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  size_t n = 0;
};

struct Curve {
  Level icc_level = Level::kNull;
  std::vector<CurvePoint> points;  // null, mid, high
};

// One curve per ICC level. Each subject's scores in a cell are averaged over
// items first; means and 95% t intervals are taken across subjects.
std::vector<Curve> PooledCurves(const ScoreTable& table,
                                double confidence = 0.95);

// Splits rows by item group. Every item must be assigned.
std::map<std::string, ScoreTable> GroupItems(
    const ScoreTable& table, const std::map<std::string, std::string>& grouping);

}  // namespace cuedist

#endif  // CUEDIST_STATS_H_
