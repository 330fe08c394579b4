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

// The full statistics battery over one score table, and its JSON and CSV
// renderings.

#ifndef CUEDIST_REPORT_H_
#define CUEDIST_REPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cuedist/stats.h"

namespace cuedist {

struct AnalysisOptions {
  double alpha = 0.05;
  int mc_reps = 10000;
  uint64_t mc_seed = 20240101;
  bool independent = false;  // two-sample instead of paired post-hoc tests
};

// Hedges' g of the hidden reference against a set of distorted conditions.
// cue is "ICLDD" (L_mid/L_high with C_null), "ICCD" (C_mid/C_high with
// L_null) or "all" (every other factorial cell). scope is "pooled" or an
// item id.
struct EffectSizeEntry {
  std::string scope;
  std::string cue;
  std::optional<EffectSize> value;  // empty when the pooled variance is 0
  double mean_reference = 0.0;
  double mean_distorted = 0.0;
};

// Lilliefors test of the scores of one (item, condition) across subjects.
struct NormalityEntry {
  std::string item;
  std::string label;
  size_t n = 0;
  std::optional<LillieforsResult> result;  // empty for constant scores
};

struct StatsReport {
  std::string group;
  size_t rows = 0;
  size_t subjects = 0;
  size_t items = 0;
  std::vector<AnovaRow> anova;
  std::vector<Comparison> icld_comparisons;
  std::vector<Comparison> icc_comparisons;
  std::vector<EffectSizeEntry> effect_sizes;
  std::vector<Curve> curves;
  std::vector<NormalityEntry> normality;
  size_t normality_rejections = 0;  // at alpha
  // Sections that could not be computed, with the reason.
  std::vector<std::string> notes;

  const AnovaRow* FindAnova(const std::string& effect) const;
  const EffectSizeEntry* FindEffect(const std::string& scope,
                                    const std::string& cue) const;
};

StatsReport AnalyzeScores(const ScoreTable& table, const std::string& group,
                          const AnalysisOptions& options = {});

std::string ReportToJson(const StatsReport& report,
                         const AnalysisOptions& options = {});
// icld_level,mean,ci_low,ci_high,n
std::string CurveToCsv(const Curve& curve);

// Writes report_<group>.json and curve_<group>_C_<level>.csv for "overall"
// and every group. Returns the reports, overall first.
std::vector<StatsReport> WriteAnalysis(
    const ScoreTable& table, const std::map<std::string, std::string>& grouping,
    const AnalysisOptions& options, const std::filesystem::path& out_dir);

}  // namespace cuedist

#endif  // CUEDIST_REPORT_H_
