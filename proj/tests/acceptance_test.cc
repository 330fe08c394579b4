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

// Acceptance checks for the toolkit. Prints one PASS/FAIL line per criterion
// with its runtime and exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cuedist/codec.h"
#include "cuedist/config.h"
#include "cuedist/cues.h"
#include "cuedist/distort.h"
#include "cuedist/error.h"
#include "cuedist/fileio.h"
#include "cuedist/items.h"
#include "cuedist/manifest.h"
#include "cuedist/movs.h"
#include "cuedist/pipeline.h"
#include "cuedist/report.h"
#include "cuedist/score_csv.h"
#include "cuedist/stats.h"
#include "cuedist/synth_raters.h"
#include "cuedist/timefreq.h"
#include "test_util.h"

namespace cuedist {
namespace {

using testing::Energetic;
using testing::ErrorDb;
using testing::WhiteNoise;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a failed condition; the first few are reported.
  void Require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || failures < 5) detail << " [" << what << "]";
    pass = false;
    ++failures;
  }
  int failures = 0;
};

double RelErr(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// ------------------------------------------------------------ 1: transform

void TransformFidelity(Outcome& out) {
  const FrameSpec spec;
  double worst = -400.0;
  for (TestSignal sig : AllTestSignals()) {
    const AudioBuffer a = MakeTestSignal(sig);
    const AudioBuffer b = Synthesize(Analyze(a, spec));
    for (size_t c = 0; c < a.num_channels(); ++c) {
      const bool same_length = b.channels[c].size() == a.channels[c].size();
      out.Require(same_length, std::string(TestSignalName(sig)) + " length");
      if (!same_length) continue;
      const double db = ErrorDb(a.channels[c], b.channels[c]);
      worst = std::max(worst, db);
      out.Require(db <= -50.0, std::string(TestSignalName(sig)) + Fmt(" %.1f dB", db));
    }
  }
  out.detail << Fmt(" worst error %.1f dB over 5 signals", worst);
}

// ---------------------------------------------------------- 2: estimators

void CueFixtures(Outcome& out) {
  const FrameSpec spec;
  const CueConfig cues;
  const ErbPartition part = MakeErbPartition(spec.sample_rate, spec.fft_length);
  const double floor = SilenceFloorPower(spec, cues);

  const auto x = WhiteNoise(48000, 1);
  const Spectrogram sx = AnalyzeChannel(x, spec);
  const BandMatrix same_l = EstimateIcld(sx, sx, part, cues);
  const BandMatrix same_c = EstimateIcc(sx, sx, part, cues);
  for (size_t f = 0; f < same_l.frames(); ++f) {
    for (size_t b = 0; b < same_l.bands(); ++b) {
      out.Require(same_l.at(f, b) == 0.0, "identical ICLD");
      out.Require(std::abs(same_c.at(f, b) - 1.0) <= 1e-12, "identical ICC");
    }
  }

  std::vector<double> x2 = x;
  for (double& v : x2) v *= 2.0;
  const Spectrogram s2 = AnalyzeChannel(x2, spec);
  const BandMatrix gain = EstimateIcld(s2, sx, part, cues);
  const BandMatrix power = BandPowers(s2, part);
  double worst = 0.0;
  for (size_t f = 0; f < gain.frames(); ++f) {
    for (size_t b = 0; b < gain.bands(); ++b) {
      if (power.at(f, b) <= 1e3 * floor) continue;
      worst = std::max(worst, std::abs(gain.at(f, b) - 6.02));
    }
  }
  out.Require(worst <= 0.05, Fmt("2x gain off by %.3f dB", worst));

  const Spectrogram na = AnalyzeChannel(WhiteNoise(48000, 5), spec);
  const Spectrogram nb = AnalyzeChannel(WhiteNoise(48000, 6), spec);
  const BandMatrix icc = EstimateIcc(na, nb, part, cues);
  double mean = 0.0;
  for (size_t b = 0; b < icc.bands(); ++b) {
    double band = 0.0;
    for (size_t f = 0; f < icc.frames(); ++f) band += icc.at(f, b);
    mean += band / double(icc.frames());
  }
  mean /= double(icc.bands());
  out.Require(mean < 0.1, Fmt("noise ICC %.3f", mean));
  out.detail << Fmt(" 2x gain max dev %.4f dB, noise band-mean ICC %.3f", worst, mean);
}

// -------------------------------------------------- 3 and 4: codec fidelity

struct CueErrors {
  size_t checked = 0;
  size_t icld_bad = 0;
  size_t icc_bad = 0;
  double icld_max = 0.0;
  double icc_max = 0.0;
};

// Compares the cues measured on `decoded` with targets on the energetic
// bands of the encoder metadata.
CueErrors CompareCues(const BccStream& s, const AudioBuffer& decoded,
                      const std::function<double(size_t, size_t)>& want_icld,
                      const std::function<double(size_t, size_t)>& want_icc,
                      double icld_tol, double icc_tol, bool icc_floor) {
  const CueStream got = EstimateCues(decoded, s.config.frame, s.cues.partition, s.config.cues);
  const double floor = SilenceFloorPower(s.config.frame, s.config.cues);
  CueErrors e;
  for (size_t f = 0; f < got.frames.size() && f < s.cues.frames.size(); ++f) {
    for (size_t b = 0; b < got.frames[f].icc.size(); ++b) {
      if (!Energetic(s.cues.frames[f], b, floor)) continue;
      ++e.checked;
      if (want_icld) {
        const double d = std::abs(got.frames[f].icld_db[b] - want_icld(f, b));
        e.icld_max = std::max(e.icld_max, d);
        e.icld_bad += d > icld_tol;
      }
      if (want_icc) {
        const double d = icc_floor ? std::max(0.0, want_icc(f, b) - got.frames[f].icc[b])
                                   : std::abs(got.frames[f].icc[b] - want_icc(f, b));
        e.icc_max = std::max(e.icc_max, d);
        e.icc_bad += d > icc_tol;
      }
    }
  }
  return e;
}

void CodecRoundTrip(Outcome& out) {
  for (const ItemInfo& info : BundledItems()) {
    const BccStream s = Encode(MakeItem(info.id));
    const auto& frames = s.cues.frames;
    const CueErrors e = CompareCues(
        s, Decode(s), [&](size_t f, size_t b) { return frames[f].icld_db[b]; },
        [&](size_t f, size_t b) { return frames[f].icc[b]; }, 1.0, 0.1, false);
    out.Require(e.icld_bad == 0 && e.icc_bad == 0, info.id + " out of tolerance");
    out.detail << " " << info.id << ": " << e.icld_bad << "/" << e.checked << " ICLD"
               << Fmt(" (max %.2f dB), ", e.icld_max) << e.icc_bad << " ICC"
               << Fmt(" (max %.3f)", e.icc_max) << ";";
  }
}

void DisableSemantics(Outcome& out) {
  const auto profile = SensitivityProfile::Default();
  for (const ItemInfo& info : BundledItems()) {
    const BccStream s = Encode(MakeItem(info.id));
    DistortionSpec no_icld;
    no_icld.disable_icld = true;
    const CueErrors l =
        CompareCues(s, Decode(ApplyDistortion(s, no_icld, profile)),
                    [](size_t, size_t) { return 0.0; }, nullptr, 1.0, 0.0, false);
    DistortionSpec no_icc;
    no_icc.disable_icc = true;
    const CueErrors c =
        CompareCues(s, Decode(ApplyDistortion(s, no_icc, profile)), nullptr,
                    [](size_t, size_t) { return 0.9; }, 0.0, 0.0, true);
    out.Require(l.icld_bad == 0, info.id + " ICLD not centred");
    out.Require(c.icc_bad == 0, info.id + " ICC below 0.9");
    out.detail << " " << info.id << ": |ICLD|>1 dB in " << l.icld_bad << "/" << l.checked
               << Fmt(" (max %.2f), ICC<0.9 in ", l.icld_max) << c.icc_bad << "/" << c.checked
               << ";";
  }
}

// -------------------------------------------------------------- 5: MOVs

void MovMonotonicity(Outcome& out) {
  const auto profile = SensitivityProfile::Default();
  for (const ItemInfo& info : BundledItems()) {
    const AudioBuffer x = MakeItem(info.id);
    const MovReport self = Measure(x, x);
    out.Require(self.ildd == 0.0 && self.iaccd == 0.0, info.id + " measure(x,x) != 0");
    const BccStream s = Encode(x);
    for (int cue = 0; cue < 2; ++cue) {
      double last = -1.0;
      for (double d : {0.0, 1.0, 2.0, 4.0, 8.0}) {
        DistortionSpec spec;
        (cue == 0 ? spec.d_icld : spec.d_icc) = d;
        const MovReport m = Measure(x, Decode(ApplyDistortion(s, spec, profile)));
        const double v = cue == 0 ? m.ildd : m.iaccd;
        out.Require(v >= last, info.id + (cue == 0 ? " ILDD" : " IACCD") +
                                   Fmt(" drops at d=%g", d));
        last = v;
      }
      out.detail << " " << info.id << (cue == 0 ? " ILDD(8)=" : " IACCD(8)=")
                 << Fmt("%.3f", last);
    }
  }
}

// ------------------------------------------------------------ 6: statistics

constexpr Level kLevels[] = {Level::kNull, Level::kMid, Level::kHigh};

ScoreTable OracleFixture() {
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

void StatisticsOracles(Outcome& out) {
  const auto close = [&](double got, double want, const std::string& what) {
    out.Require(RelErr(got, want) <= 1e-6, what + Fmt(" %.12g vs %.12g", got, want));
  };
  const auto rows = AnovaFactorial(OracleFixture());
  struct Want {
    const char* name;
    double f, p;
  };
  const Want want[] = {
      {"ICLDD", 101.986053658, 5.30087432228e-16},
      {"ICCD", 71.4582791632, 1.3298428003e-13},
      {"ICLDD:ICCD", 0.144279635977, 0.964427110514},
      {"item:ICLDD", 16.5051412363, 6.93082241412e-06},
      {"item:ICCD", 0.798309892448, 0.45749271287},
      {"subject", 28.2080723319, 3.09036192253e-08},
      {"item", 26.2835953197, 8.92992372655e-06},
  };
  for (const Want& w : want) {
    const auto it = std::find_if(rows.begin(), rows.end(),
                                 [&](const AnovaRow& r) { return r.effect == w.name; });
    out.Require(it != rows.end(), std::string("missing ") + w.name);
    if (it == rows.end()) continue;
    close(it->f, w.f, std::string("F ") + w.name);
    close(it->p, w.p, std::string("p ") + w.name);
  }

  const std::vector<double> x = {3.1, 4.7, 2.2, 5.9, 4.4, 3.3};
  const std::vector<double> y = {1.0, 2.5, 1.7, 2.2, 0.4, 1.9};
  const TTestResult t = PairedT(x, y);
  close(t.t, 4.24182844848, "paired t");
  close(t.p, 0.0081553145886, "paired p");

  const std::vector<double> x10 = {3.1, 4.7, 2.2, 5.9, 4.4, 3.3, 6.1, 2.8, 4.0, 5.2};
  close(HedgesG(x10, y).g, 2.07938022089, "Hedges g");
  close(LillieforsStatistic(x10), 0.144279633451, "Lilliefors D");

  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal(0.0, 1.0);
  int rejections = 0;
  const int reps = 1000;
  std::vector<double> sample(100);
  for (int r = 0; r < reps; ++r) {
    for (double& v : sample) v = normal(rng);
    rejections += Lilliefors(sample).p < 0.05;
  }
  const double rate = double(rejections) / reps;
  out.Require(rate >= 0.035 && rate <= 0.065, Fmt("type-I rate %.3f", rate));
  out.detail << Fmt(" Lilliefors type-I rate %.3f", rate);
}

// ------------------------------------------------------- 7: end to end

struct PipelineRun {
  std::vector<StatsReport> reports;
  std::string scores_csv;
};

PipelineRun RunPipeline(const std::filesystem::path& dir) {
  std::filesystem::remove_all(dir);
  PipelineConfig config = BundledConfig(dir / "out");
  config.items = GenerateItems(dir / "items");
  RunConditions(config);
  const auto movs =
      RunMeasure(dir / "out" / "manifest.jsonl", config.MakeMovConfig(), dir / "out" / "movs.jsonl");
  const ScoreTable table = SimulateRatings(movs, RaterModel{});
  WriteScoreCsv(dir / "out" / "scores.csv", table);
  PipelineRun run;
  // Analyse what was written, as the command-line flow does.
  run.scores_csv = ReadFileText(dir / "out" / "scores.csv");
  run.reports = WriteAnalysis(ReadScoreCsv(dir / "out" / "scores.csv"), config.Grouping(),
                              AnalysisOptions{}, dir / "out" / "report");
  return run;
}

const StatsReport* FindReport(const std::vector<StatsReport>& reports, const std::string& g) {
  for (const StatsReport& r : reports) {
    if (r.group == g) return &r;
  }
  return nullptr;
}

void EndToEnd(Outcome& out) {
  const auto base = std::filesystem::temp_directory_path() /
                    ("cuedist_acceptance_" + std::to_string(::getpid()));
  const PipelineRun a = RunPipeline(base / "a");
  const PipelineRun b = RunPipeline(base / "b");
  out.Require(a.scores_csv == b.scores_csv, "scores differ between runs");
  for (const char* name : {"report_overall.json", "report_mix.json", "report_solo.json"}) {
    out.Require(ReadFileText(base / "a/out/report" / name) ==
                    ReadFileText(base / "b/out/report" / name),
                std::string(name) + " differs between runs");
  }

  const StatsReport* overall = FindReport(a.reports, "overall");
  const StatsReport* mix = FindReport(a.reports, "mix");
  const StatsReport* solo = FindReport(a.reports, "solo");
  out.Require(overall && mix && solo, "missing group report");
  if (!overall || !mix || !solo) return;
  out.Require(overall->subjects == 7 && overall->items == 4, "expected 7 raters, 4 items");

  for (const char* effect : {"ICLDD", "ICCD"}) {
    const AnovaRow* row = overall->FindAnova(effect);
    out.Require(row && row->p < 0.05, std::string(effect) + " not significant");
    if (row) out.detail << " " << effect << Fmt(" p=%.3g;", row->p);
  }
  for (Level other : {Level::kNull, Level::kMid}) {
    bool found = false;
    for (const Comparison& c : overall->icld_comparisons) {
      const bool pair = (c.a == Level::kHigh && c.b == other) ||
                        (c.b == Level::kHigh && c.a == other);
      if (!pair) continue;
      found = true;
      out.Require(c.significant, "L_high vs L_" + std::string(LevelName(other)));
      out.detail << " L_high vs L_" << LevelName(other) << Fmt(" p_adj=%.3g;", c.p_adjusted);
    }
    out.Require(found, "missing comparison");
  }
  const EffectSizeEntry* gm = mix->FindEffect("pooled", "ICLDD");
  const EffectSizeEntry* gs = solo->FindEffect("pooled", "ICLDD");
  out.Require(gm && gs && gm->value && gs->value, "missing ICLDD effect size");
  if (gm && gs && gm->value && gs->value) {
    out.Require(gm->value->g > gs->value->g, "g(mix) <= g(solo)");
    out.detail << Fmt(" g ICLDD mix=%.2f solo=%.2f", gm->value->g, gs->value->g);
  }
  std::filesystem::remove_all(base);
}

// ----------------------------------------------------- 8: condition set

void ConditionStructure(Outcome& out) {
  std::set<std::string> factorial;
  for (Level l : kLevels) {
    for (Level c : kLevels) factorial.insert(ConditionLabel(l, c));
  }
  out.Require(factorial.count(std::string(kHiddenRefLabel)) == 1, "hidden_ref not the null cell");
  for (const ItemInfo& info : BundledItems()) {
    const AudioBuffer x = MakeItem(info.id);
    const auto stimuli = GenerateConditions(x);
    int refs = 0, anchors = 0;
    std::set<std::string> labels;
    for (const Stimulus& s : stimuli) {
      labels.insert(s.condition.label);
      refs += s.condition.label == kHiddenRefLabel;
      if (!s.condition.anchor) continue;
      ++anchors;
      out.Require(s.condition.label == kAnchorLabel, "anchor label");
      const FrameSpec spec;
      const CueStream c = EstimateCues(s.audio, spec, MakeErbPartition(spec.sample_rate, spec.fft_length),
                                       CueConfig{});
      for (const CueFrame& f : c.frames) {
        for (size_t b = 0; b < f.icc.size(); ++b) {
          out.Require(f.icld_db[b] == 0.0, info.id + " anchor ICLD != 0");
          out.Require(std::abs(f.icc[b] - 1.0) <= 1e-9, info.id + " anchor ICC != 1");
        }
      }
    }
    std::set<std::string> expected = factorial;
    expected.insert(std::string(kAnchorLabel));
    out.Require(stimuli.size() == 10, info.id + " has " + std::to_string(stimuli.size()));
    out.Require(refs == 1 && anchors == 1, info.id + " reference/anchor count");
    out.Require(labels == expected, info.id + " label vocabulary");
  }
  out.detail << " 4 items x 10 stimuli";
}

struct Criterion {
  int number;
  const char* name;
  double budget_s;  // 0: no runtime limit
  void (*run)(Outcome&);
};

}  // namespace
}  // namespace cuedist

int main() {
  using namespace cuedist;
  const Criterion criteria[] = {
      {1, "transform fidelity", 10.0, TransformFidelity},
      {2, "cue estimator fixtures", 0.0, CueFixtures},
      {3, "codec round trip", 0.0, CodecRoundTrip},
      {4, "disable semantics", 0.0, DisableSemantics},
      {5, "MOV monotonicity", 0.0, MovMonotonicity},
      {6, "statistics oracles", 60.0, StatisticsOracles},
      {7, "end-to-end synthetic reproduction", 120.0, EndToEnd},
      {8, "condition-set structure", 0.0, ConditionStructure},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.Require(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) out.Require(secs < c.budget_s, Fmt("over %.0f s budget", c.budget_s));
    failed += !out.pass;
    std::printf("%s criterion %d: %s (%.2f s)%s\n", out.pass ? "PASS" : "FAIL", c.number, c.name,
                secs, out.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
