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

#include "cuedist/report.h"

#include <cstdio>
#include <set>

#include <json.hpp>

#include "cuedist/error.h"
#include "cuedist/fileio.h"

namespace cuedist {

using nlohmann::json;

namespace {

std::vector<double> Scores(const ScoreTable& table, auto&& keep) {
  std::vector<double> out;
  for (const ScoreRow& r : table) {
    if (keep(r)) out.push_back(r.score);
  }
  return out;
}

double MeanOf(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

void AddEffectSizes(const ScoreTable& table, const std::string& scope,
                    StatsReport& report) {
  auto is_ref = [](const ScoreRow& r) {
    return r.icld_level == Level::kNull && r.icc_level == Level::kNull;
  };
  const std::vector<double> ref = Scores(table, is_ref);
  const std::pair<const char*, bool (*)(const ScoreRow&)> sets[] = {
      {"ICLDD",
       [](const ScoreRow& r) {
         return r.icc_level == Level::kNull &&
                (r.icld_level == Level::kMid || r.icld_level == Level::kHigh);
       }},
      {"ICCD",
       [](const ScoreRow& r) {
         return r.icld_level == Level::kNull &&
                (r.icc_level == Level::kMid || r.icc_level == Level::kHigh);
       }},
      {"all",
       [](const ScoreRow& r) {
         return r.factorial() &&
                !(r.icld_level == Level::kNull && r.icc_level == Level::kNull);
       }},
  };
  for (const auto& [cue, keep] : sets) {
    EffectSizeEntry e;
    e.scope = scope;
    e.cue = cue;
    const std::vector<double> distorted = Scores(table, keep);
    e.mean_reference = MeanOf(ref);
    e.mean_distorted = MeanOf(distorted);
    try {
      e.value = HedgesG(ref, distorted);
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::kInvalidArgument) throw;
      report.notes.push_back("Hedges' g " + scope + "/" + cue + ": " + err.what());
    }
    report.effect_sizes.push_back(std::move(e));
  }
}

json AnovaJson(const std::vector<AnovaRow>& rows) {
  json out = json::array();
  for (const AnovaRow& r : rows) {
    out.push_back({{"effect", r.effect},
                   {"sum_sq", r.sum_sq},
                   {"df", r.df},
                   {"mean_sq", r.mean_sq},
                   {"F", r.f},
                   {"p", r.p}});
  }
  return out;
}

json ComparisonsJson(const std::vector<Comparison>& rows) {
  json out = json::array();
  for (const Comparison& c : rows) {
    out.push_back({{"a", LevelName(c.a)},
                   {"b", LevelName(c.b)},
                   {"t", c.t},
                   {"df", c.df},
                   {"p_raw", c.p_raw},
                   {"p_adjusted", c.p_adjusted},
                   {"significant", c.significant}});
  }
  return out;
}

}  // namespace

const AnovaRow* StatsReport::FindAnova(const std::string& effect) const {
  for (const AnovaRow& r : anova) {
    if (r.effect == effect) return &r;
  }
  return nullptr;
}

const EffectSizeEntry* StatsReport::FindEffect(const std::string& scope,
                                               const std::string& cue) const {
  for (const EffectSizeEntry& e : effect_sizes) {
    if (e.scope == scope && e.cue == cue) return &e;
  }
  return nullptr;
}

StatsReport AnalyzeScores(const ScoreTable& table, const std::string& group,
                          const AnalysisOptions& options) {
  ValidateScoreTable(table);
  if (table.empty()) Fail(ErrorKind::kData, "score table is empty");
  StatsReport report;
  report.group = group;
  report.rows = table.size();
  std::set<std::string> subjects, items;
  for (const ScoreRow& r : table) {
    subjects.insert(r.subject_id);
    items.insert(r.item_id);
  }
  report.subjects = subjects.size();
  report.items = items.size();

  // Degenerate data (zero variance) leaves a note; structural problems
  // propagate.
  auto guarded = [&report](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kDegenerate) throw;
      report.notes.push_back(std::string(what) + ": " + e.what());
    }
  };
  guarded("ANOVA", [&] { report.anova = AnovaFactorial(table); });
  guarded("ICLDD comparisons", [&] {
    report.icld_comparisons =
        PairedTBonferroni(table, Factor::kIcld, options.alpha, options.independent);
  });
  guarded("ICCD comparisons", [&] {
    report.icc_comparisons =
        PairedTBonferroni(table, Factor::kIcc, options.alpha, options.independent);
  });
  AddEffectSizes(table, "pooled", report);
  for (const std::string& item : items) {
    ScoreTable sub;
    for (const ScoreRow& r : table) {
      if (r.item_id == item) sub.push_back(r);
    }
    AddEffectSizes(sub, item, report);
  }
  report.curves = PooledCurves(table);

  std::map<std::pair<std::string, std::string>, std::vector<double>> cells;
  for (const ScoreRow& r : table) {
    cells[{r.item_id, r.condition_label}].push_back(r.score);
  }
  for (const auto& [key, scores] : cells) {
    NormalityEntry e;
    e.item = key.first;
    e.label = key.second;
    e.n = scores.size();
    if (e.n >= 5) {
      try {
        e.result = Lilliefors(scores, options.mc_reps, options.mc_seed);
        if (e.result->p < options.alpha) ++report.normality_rejections;
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::kDegenerate) throw;
      }
    }
    report.normality.push_back(std::move(e));
  }
  return report;
}

std::string ReportToJson(const StatsReport& report,
                         const AnalysisOptions& options) {
  json j;
  j["group"] = report.group;
  j["rows"] = report.rows;
  j["subjects"] = report.subjects;
  j["items"] = report.items;
  j["alpha"] = options.alpha;
  j["post_hoc"] = options.independent ? "independent" : "paired";
  j["anova"] = AnovaJson(report.anova);
  j["comparisons"] = {{"ICLDD", ComparisonsJson(report.icld_comparisons)},
                      {"ICCD", ComparisonsJson(report.icc_comparisons)}};
  json effects = json::array();
  for (const EffectSizeEntry& e : report.effect_sizes) {
    json x = {{"scope", e.scope},
              {"cue", e.cue},
              {"mean_reference", e.mean_reference},
              {"mean_distorted", e.mean_distorted}};
    if (e.value) {
      x["g"] = e.value->g;
      x["n1"] = e.value->n1;
      x["n2"] = e.value->n2;
      x["J"] = e.value->j;
    } else {
      x["g"] = nullptr;
    }
    effects.push_back(std::move(x));
  }
  j["effect_sizes"] = std::move(effects);
  json curves = json::array();
  for (const Curve& c : report.curves) {
    json pts = json::array();
    for (const CurvePoint& p : c.points) {
      pts.push_back({{"icld_level", LevelName(p.icld_level)},
                     {"mean", p.mean},
                     {"ci_low", p.ci_low},
                     {"ci_high", p.ci_high},
                     {"n", p.n}});
    }
    curves.push_back({{"icc_level", LevelName(c.icc_level)}, {"points", pts}});
  }
  j["curves"] = std::move(curves);
  json normality = json::array();
  for (const NormalityEntry& e : report.normality) {
    json x = {{"item", e.item}, {"label", e.label}, {"n", e.n}};
    if (e.result) {
      x["statistic"] = e.result->statistic;
      x["p"] = e.result->p;
    } else {
      x["statistic"] = nullptr;
      x["p"] = nullptr;
    }
    normality.push_back(std::move(x));
  }
  j["normality"] = {{"mc_reps", options.mc_reps},
                    {"rejections", report.normality_rejections},
                    {"tests", std::move(normality)}};
  j["notes"] = report.notes;
  return j.dump(2) + "\n";
}

std::string CurveToCsv(const Curve& curve) {
  std::string out = "icld_level,mean,ci_low,ci_high,n\n";
  for (const CurvePoint& p : curve.points) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%zu\n",
                  std::string(LevelName(p.icld_level)).c_str(), p.mean, p.ci_low,
                  p.ci_high, p.n);
    out += buf;
  }
  return out;
}

std::vector<StatsReport> WriteAnalysis(
    const ScoreTable& table, const std::map<std::string, std::string>& grouping,
    const AnalysisOptions& options, const std::filesystem::path& out_dir) {
  std::vector<std::pair<std::string, ScoreTable>> parts = {{"overall", table}};
  for (auto& [group, sub] : GroupItems(table, grouping)) {
    if (group == "overall") {
      Fail(ErrorKind::kData, "'overall' is reserved and cannot name a group");
    }
    parts.emplace_back(group, std::move(sub));
  }
  std::filesystem::create_directories(out_dir);
  std::vector<StatsReport> out;
  for (const auto& [group, sub] : parts) {
    StatsReport report = AnalyzeScores(sub, group, options);
    WriteFileAtomic(out_dir / ("report_" + group + ".json"),
                    ReportToJson(report, options));
    for (const Curve& c : report.curves) {
      WriteFileAtomic(out_dir / ("curve_" + group + "_C_" +
                                 std::string(LevelName(c.icc_level)) + ".csv"),
                      CurveToCsv(c));
    }
    out.push_back(std::move(report));
  }
  return out;
}

}  // namespace cuedist
