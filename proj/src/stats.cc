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

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <tuple>

#include "cuedist/distributions.h"
#include "cuedist/error.h"

namespace cuedist {

namespace {

double Mean(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Unbiased sample variance.
double Variance(std::span<const double> x) {
  const double m = Mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void ValidateScoreTable(const ScoreTable& table) {
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (size_t i = 0; i < table.size(); ++i) {
    const ScoreRow& r = table[i];
    const std::string where = "row " + std::to_string(i + 1) + ": ";
    if (r.score < 0 || r.score > 100) {
      Fail(ErrorKind::kData, where + "score " + std::to_string(r.score) +
                                 " outside [0, 100]");
    }
    if ((r.icld_level == Level::kNa) != (r.icc_level == Level::kNa)) {
      Fail(ErrorKind::kData, where + "levels must both be set or both be na");
    }
    if (r.subject_id.empty() || r.item_id.empty() || r.condition_label.empty()) {
      Fail(ErrorKind::kData, where + "empty identifier");
    }
    if (!seen.emplace(r.subject_id, r.item_id, r.condition_label).second) {
      Fail(ErrorKind::kData, where + "duplicate (subject, item, condition)");
    }
  }
}

// ---------------------------------------------------------------- normality

double LillieforsStatistic(std::span<const double> samples) {
  const size_t n = samples.size();
  if (n < 5) {
    Fail(ErrorKind::kInvalidArgument, "Lilliefors test needs at least 5 samples");
  }
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double m = Mean(x);
  const double sd = std::sqrt(Variance(x));
  if (!(sd > 0.0)) Fail(ErrorKind::kDegenerate, "samples have zero variance");
  const double nn = static_cast<double>(n);
  double d = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double cdf = NormalCdf((x[i] - m) / sd);
    d = std::max({d, static_cast<double>(i + 1) / nn - cdf,
                  cdf - static_cast<double>(i) / nn});
  }
  return d;
}

namespace {

const std::vector<double>& NullDistribution(size_t n, int reps, uint64_t seed) {
  static std::mutex mu;
  static std::map<std::tuple<size_t, int, uint64_t>, std::vector<double>> cache;
  std::lock_guard lock(mu);
  auto [it, inserted] = cache.try_emplace({n, reps, seed});
  if (!inserted) return it->second;
  std::vector<double>& stats = it->second;
  stats.resize(static_cast<size_t>(reps));
  std::vector<double> x(n);
  for (int r = 0; r < reps; ++r) {
    // One independent stream per replication.
    std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(static_cast<uint64_t>(r))));
    std::normal_distribution<double> normal;
    for (double& v : x) v = normal(rng);
    stats[static_cast<size_t>(r)] = LillieforsStatistic(x);
  }
  std::sort(stats.begin(), stats.end());
  return stats;
}

}  // namespace

LillieforsResult Lilliefors(std::span<const double> samples, int reps,
                            uint64_t seed) {
  Require(reps > 0, "Monte Carlo replications must be positive");
  LillieforsResult out;
  out.statistic = LillieforsStatistic(samples);
  const auto& null = NullDistribution(samples.size(), reps, seed);
  const auto first = std::lower_bound(null.begin(), null.end(), out.statistic);
  const auto at_least = static_cast<double>(null.end() - first);
  out.p = (at_least + 1.0) / (static_cast<double>(reps) + 1.0);
  return out;
}

// ------------------------------------------------------------------- ANOVA

std::vector<AnovaRow> BalancedAnova(
    const std::vector<std::string>& factor_names,
    const std::vector<std::vector<std::string>>& levels,
    std::span<const double> y, const std::vector<std::vector<size_t>>& effects) {
  const size_t k = factor_names.size();
  const size_t n = y.size();
  Require(k > 0 && k < 16, "ANOVA needs between 1 and 15 factors");
  Require(levels.size() == n, "one level vector per observation required");
  if (n < 2) Fail(ErrorKind::kData, "ANOVA needs at least 2 observations");

  // Level indices per factor.
  std::vector<std::map<std::string, size_t>> index(k);
  for (const auto& obs : levels) {
    Require(obs.size() == k, "level vector has wrong length");
    for (size_t j = 0; j < k; ++j) index[j].try_emplace(obs[j], index[j].size());
  }
  std::vector<size_t> count(k);
  for (size_t j = 0; j < k; ++j) count[j] = index[j].size();
  std::vector<std::vector<size_t>> code(n, std::vector<size_t>(k));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < k; ++j) code[i][j] = index[j].at(levels[i][j]);
  }

  // Marginal sums over every subset of factors, stored as flat arrays.
  const size_t subsets = size_t{1} << k;
  auto cells_of = [&](size_t mask) {
    size_t c = 1;
    for (size_t j = 0; j < k; ++j) if (mask >> j & 1) c *= count[j];
    return c;
  };
  auto flat = [&](size_t mask, const std::vector<size_t>& c) {
    size_t idx = 0;
    for (size_t j = 0; j < k; ++j) if (mask >> j & 1) idx = idx * count[j] + c[j];
    return idx;
  };
  std::vector<std::vector<double>> sum(subsets);
  std::vector<std::vector<size_t>> num(subsets);
  for (size_t mask = 0; mask < subsets; ++mask) {
    sum[mask].assign(cells_of(mask), 0.0);
    num[mask].assign(cells_of(mask), 0);
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t mask = 0; mask < subsets; ++mask) {
      const size_t idx = flat(mask, code[i]);
      sum[mask][idx] += y[i];
      ++num[mask][idx];
    }
  }
  const size_t full = subsets - 1;
  const size_t reps = num[full][0];
  for (size_t c : num[full]) {
    if (c == 0) Fail(ErrorKind::kData, "design has a missing cell");
    if (c != reps) Fail(ErrorKind::kData, "design is unbalanced");
  }

  const double grand = sum[0][0] / static_cast<double>(n);
  double total_ss = 0.0;
  for (double v : y) total_ss += (v - grand) * (v - grand);

  std::vector<AnovaRow> rows;
  double effect_ss = 0.0, effect_df = 0.0;
  for (const auto& effect : effects) {
    size_t mask = 0;
    std::string name;
    for (size_t j : effect) {
      Require(j < k, "effect refers to an unknown factor");
      Require(!(mask >> j & 1), "effect lists a factor twice");
      mask |= size_t{1} << j;
      name += (name.empty() ? "" : ":") + factor_names[j];
    }
    Require(mask != 0, "empty effect");
    // tau_E(c) = sum over F subset of E of (-1)^|E \ F| mean_F(c).
    double ss = 0.0;
    const size_t cells = cells_of(mask);
    std::vector<size_t> c(k, 0);
    for (size_t cell = 0; cell < cells; ++cell) {
      size_t rest = cell;
      for (size_t j = k; j-- > 0;) {
        if (mask >> j & 1) {
          c[j] = rest % count[j];
          rest /= count[j];
        }
      }
      double tau = 0.0;
      for (size_t f = mask;; f = (f - 1) & mask) {
        const size_t idx = flat(f, c);
        const double mean = sum[f][idx] / static_cast<double>(num[f][idx]);
        const int sign = std::popcount(mask & ~f) % 2 == 0 ? 1 : -1;
        tau += sign * mean;
        if (f == 0) break;
      }
      ss += static_cast<double>(num[mask][0]) * tau * tau;
    }
    double df = 1.0;
    for (size_t j : effect) {
      if (count[j] < 2) {
        Fail(ErrorKind::kData, "factor " + factor_names[j] + " has fewer than 2 levels");
      }
      df *= static_cast<double>(count[j] - 1);
    }
    rows.push_back({name, ss, df, ss / df, 0.0, 1.0});
    effect_ss += ss;
    effect_df += df;
  }

  AnovaRow residual;
  residual.effect = "Residual";
  residual.df = static_cast<double>(n - 1) - effect_df;
  if (residual.df < 1.0) {
    Fail(ErrorKind::kData, "no residual degrees of freedom left");
  }
  residual.sum_sq = std::max(0.0, total_ss - effect_ss);
  residual.mean_sq = residual.sum_sq / residual.df;
  // Rounding leaves residual noise of order eps * total; treat it as zero.
  const bool zero_residual = residual.sum_sq <= 1e-12 * total_ss ||
                             residual.sum_sq == 0.0;
  for (AnovaRow& r : rows) {
    if (r.sum_sq <= 1e-12 * total_ss || r.sum_sq == 0.0) {
      r.f = 0.0;
      r.p = 1.0;
    } else if (zero_residual) {
      Fail(ErrorKind::kDegenerate,
           "residual variance is zero; F ratios are undefined");
    } else {
      r.f = r.mean_sq / residual.mean_sq;
      r.p = FUpperTail(r.f, r.df, residual.df);
    }
  }
  residual.f = 0.0;
  residual.p = 1.0;
  rows.push_back(residual);
  return rows;
}

std::vector<AnovaRow> AnovaFactorial(const ScoreTable& table) {
  ValidateScoreTable(table);
  std::vector<std::vector<std::string>> levels;
  std::vector<double> y;
  for (const ScoreRow& r : table) {
    if (!r.factorial()) continue;
    levels.push_back({std::string(LevelName(r.icld_level)),
                      std::string(LevelName(r.icc_level)), r.subject_id,
                      r.item_id});
    y.push_back(r.score);
  }
  if (y.empty()) Fail(ErrorKind::kData, "no factorial rows to analyze");
  std::set<std::string> items;
  for (const auto& obs : levels) items.insert(obs[3]);
  if (items.size() == 1) {
    // A single item (e.g. a one-item group) has no item terms.
    for (auto& obs : levels) obs.pop_back();
    return BalancedAnova({"ICLDD", "ICCD", "subject"}, levels, y,
                         {{0}, {1}, {0, 1}, {2}});
  }
  return BalancedAnova({"ICLDD", "ICCD", "subject", "item"}, levels, y,
                       {{0}, {1}, {0, 1}, {3, 0}, {3, 1}, {2}, {3}});
}

// ------------------------------------------------------------- comparisons

std::string_view FactorName(Factor factor) {
  return factor == Factor::kIcld ? "ICLDD" : "ICCD";
}

TTestResult PairedT(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    Fail(ErrorKind::kData, "paired samples differ in length");
  }
  if (a.size() < 2) Fail(ErrorKind::kData, "paired t needs at least 2 pairs");
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double n = static_cast<double>(d.size());
  const double m = Mean(d);
  const double sd = std::sqrt(Variance(d));
  TTestResult out;
  out.df = n - 1.0;
  if (!(sd > 0.0)) {
    if (m == 0.0) return out;  // t = 0, p = 1
    Fail(ErrorKind::kDegenerate,
         "paired differences are constant and non-zero; t is undefined");
  }
  out.t = m / (sd / std::sqrt(n));
  out.p = StudentTwoSided(out.t, out.df);
  return out;
}

TTestResult IndependentT(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    Fail(ErrorKind::kData, "two-sample t needs at least 2 values per group");
  }
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double diff = Mean(a) - Mean(b);
  const double pooled =
      ((n1 - 1.0) * Variance(a) + (n2 - 1.0) * Variance(b)) / (n1 + n2 - 2.0);
  TTestResult out;
  out.df = n1 + n2 - 2.0;
  if (!(pooled > 0.0)) {
    if (diff == 0.0) return out;
    Fail(ErrorKind::kDegenerate, "groups have zero variance; t is undefined");
  }
  out.t = diff / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
  out.p = StudentTwoSided(out.t, out.df);
  return out;
}

std::vector<Comparison> PairedTBonferroni(const ScoreTable& table,
                                          Factor factor, double alpha,
                                          bool independent) {
  Require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  ValidateScoreTable(table);
  auto level_of = [factor](const ScoreRow& r) {
    return factor == Factor::kIcld ? r.icld_level : r.icc_level;
  };
  // subject -> level -> (sum, count)
  std::map<std::string, std::map<Level, std::pair<double, int>>> cells;
  std::set<Level> present;
  std::map<Level, std::vector<double>> raw;
  for (const ScoreRow& r : table) {
    if (!r.factorial()) continue;
    auto& c = cells[r.subject_id][level_of(r)];
    c.first += r.score;
    ++c.second;
    present.insert(level_of(r));
    raw[level_of(r)].push_back(r.score);
  }
  const std::vector<Level> lv(present.begin(), present.end());
  if (lv.size() < 2) Fail(ErrorKind::kData, "factor needs at least 2 levels");

  std::vector<Comparison> out;
  for (size_t i = 0; i < lv.size(); ++i) {
    for (size_t j = i + 1; j < lv.size(); ++j) {
      Comparison c;
      c.a = lv[i];
      c.b = lv[j];
      TTestResult t;
      if (independent) {
        t = IndependentT(raw[lv[i]], raw[lv[j]]);
      } else {
        std::vector<double> a, b;
        for (const auto& [subject, by_level] : cells) {
          const auto ia = by_level.find(lv[i]);
          const auto ib = by_level.find(lv[j]);
          if (ia == by_level.end() || ib == by_level.end()) {
            Fail(ErrorKind::kData, "subject " + subject + " lacks scores for level " +
                                       std::string(LevelName(
                                           ia == by_level.end() ? lv[i] : lv[j])));
          }
          a.push_back(ia->second.first / ia->second.second);
          b.push_back(ib->second.first / ib->second.second);
        }
        t = PairedT(a, b);
      }
      c.t = t.t;
      c.df = t.df;
      c.p_raw = t.p;
      out.push_back(c);
    }
  }
  const double m = static_cast<double>(out.size());
  for (Comparison& c : out) {
    c.p_adjusted = std::min(1.0, m * c.p_raw);
    c.significant = c.p_adjusted < alpha;
  }
  return out;
}

// ------------------------------------------------------------ effect sizes

EffectSize HedgesG(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    Fail(ErrorKind::kData, "Hedges' g needs at least 2 values per group");
  }
  EffectSize e;
  e.n1 = a.size();
  e.n2 = b.size();
  const double n1 = static_cast<double>(e.n1);
  const double n2 = static_cast<double>(e.n2);
  const double pooled =
      ((n1 - 1.0) * Variance(a) + (n2 - 1.0) * Variance(b)) / (n1 + n2 - 2.0);
  if (!(pooled > 0.0)) {
    Fail(ErrorKind::kDegenerate, "pooled variance is zero; g is undefined");
  }
  e.j = 1.0 - 3.0 / (4.0 * (n1 + n2 - 2.0) - 1.0);
  e.g = e.j * (Mean(a) - Mean(b)) / std::sqrt(pooled);
  return e;
}

// -------------------------------------------------------------- the curves

std::vector<Curve> PooledCurves(const ScoreTable& table, double confidence) {
  Require(confidence > 0.0 && confidence < 1.0, "confidence must lie in (0, 1)");
  ValidateScoreTable(table);
  // (icc, icld) -> subject -> (sum, count)
  std::map<std::pair<Level, Level>, std::map<std::string, std::pair<double, int>>>
      cells;
  for (const ScoreRow& r : table) {
    if (!r.factorial()) continue;
    auto& c = cells[{r.icc_level, r.icld_level}][r.subject_id];
    c.first += r.score;
    ++c.second;
  }
  if (cells.empty()) Fail(ErrorKind::kData, "no factorial rows for curves");
  std::vector<Curve> out;
  for (Level icc : {Level::kNull, Level::kMid, Level::kHigh}) {
    Curve curve;
    curve.icc_level = icc;
    for (Level icld : {Level::kNull, Level::kMid, Level::kHigh}) {
      const auto it = cells.find({icc, icld});
      if (it == cells.end()) {
        Fail(ErrorKind::kData, "empty cell " + ConditionLabel(icld, icc));
      }
      std::vector<double> means;
      for (const auto& [subject, c] : it->second) means.push_back(c.first / c.second);
      CurvePoint p;
      p.icld_level = icld;
      p.n = means.size();
      p.mean = Mean(means);
      p.ci_low = p.ci_high = p.mean;
      if (p.n >= 2) {
        const double df = static_cast<double>(p.n - 1);
        const double half = StudentQuantile(0.5 + 0.5 * confidence, df) *
                            std::sqrt(Variance(means) / static_cast<double>(p.n));
        p.ci_low = p.mean - half;
        p.ci_high = p.mean + half;
      }
      curve.points.push_back(p);
    }
    out.push_back(std::move(curve));
  }
  return out;
}

std::map<std::string, ScoreTable> GroupItems(
    const ScoreTable& table, const std::map<std::string, std::string>& grouping) {
  std::map<std::string, ScoreTable> out;
  for (const ScoreRow& r : table) {
    const auto it = grouping.find(r.item_id);
    if (it == grouping.end()) {
      Fail(ErrorKind::kData, "item " + r.item_id + " is not assigned to a group");
    }
    out[it->second].push_back(r);
  }
  return out;
}

}  // namespace cuedist
