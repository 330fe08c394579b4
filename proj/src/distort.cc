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

#include "cuedist/distort.h"

#include <algorithm>
#include <cmath>

#include "cuedist/error.h"

namespace cuedist {

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  Require(!knots_.empty(), "piecewise-linear function needs at least one knot");
  for (size_t i = 0; i < knots_.size(); ++i) {
    Require(std::isfinite(knots_[i].first) && std::isfinite(knots_[i].second),
            "piecewise-linear knots must be finite");
    if (i > 0) {
      Require(knots_[i].first > knots_[i - 1].first,
              "piecewise-linear knots must be strictly increasing in x");
    }
  }
}

double PiecewiseLinear::operator()(double x) const {
  Require(!knots_.empty(), "empty piecewise-linear function");
  if (x <= knots_.front().first) return knots_.front().second;
  if (x >= knots_.back().first) return knots_.back().second;
  const auto it = std::upper_bound(
      knots_.begin(), knots_.end(), x,
      [](double v, const auto& knot) { return v < knot.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

namespace {

bool Flat(double y0, double y1) {
  return std::abs(y1 - y0) <= 1e-12 * std::max(y0, y1);
}

// J over [x0, x] where jnd runs linearly from y0 at x0 to y1 at x1.
double SegmentCount(double x0, double y0, double x1, double y1, double x) {
  if (Flat(y0, y1)) return (x - x0) / y0;
  const double slope = (y1 - y0) / (x1 - x0);
  const double y = y0 + slope * (x - x0);
  return std::log(y / y0) / slope;
}

double SegmentInverse(double x0, double y0, double x1, double y1,
                      double count) {
  if (Flat(y0, y1)) return x0 + count * y0;
  const double slope = (y1 - y0) / (x1 - x0);
  const double y = y0 * std::exp(slope * count);
  return x0 + (y - y0) / slope;
}

}  // namespace

JndScale::JndScale(const PiecewiseLinear& jnd) {
  x_.push_back(0.0);
  for (const auto& [x, y] : jnd.knots()) {
    if (x > 0.0) x_.push_back(x);
  }
  for (double x : x_) {
    const double y = jnd(x);
    Require(y > 0.0, "JND function must be strictly positive");
    y_.push_back(y);
  }
  count_.assign(x_.size(), 0.0);
  for (size_t i = 1; i < x_.size(); ++i) {
    count_[i] = count_[i - 1] +
                SegmentCount(x_[i - 1], y_[i - 1], x_[i], y_[i], x_[i]);
  }
}

double JndScale::Forward(double x) const {
  Require(x >= 0.0, "JND count is defined for non-negative values");
  const size_t n = x_.size();
  if (x >= x_[n - 1]) return count_[n - 1] + (x - x_[n - 1]) / y_[n - 1];
  const size_t i = static_cast<size_t>(
      std::upper_bound(x_.begin(), x_.end(), x) - x_.begin()) - 1;
  return count_[i] + SegmentCount(x_[i], y_[i], x_[i + 1], y_[i + 1], x);
}

double JndScale::Inverse(double count) const {
  Require(count >= 0.0, "JND count must be non-negative");
  const size_t n = count_.size();
  if (count >= count_[n - 1]) {
    return x_[n - 1] + (count - count_[n - 1]) * y_[n - 1];
  }
  const size_t i = static_cast<size_t>(
      std::upper_bound(count_.begin(), count_.end(), count) - count_.begin()) - 1;
  return std::min(x_[i + 1], SegmentInverse(x_[i], y_[i], x_[i + 1], y_[i + 1],
                                            count - count_[i]));
}

double SensitivityProfile::Weight(size_t band) const {
  if (band_weight.empty()) return 1.0;
  Require(band < band_weight.size(), "no sensitivity weight for band " +
                                         std::to_string(band));
  return band_weight[band];
}

void SensitivityProfile::Validate() const {
  for (const auto* f : {&icld_jnd, &icc_jnd}) {
    Require(!f->knots().empty(), "sensitivity function has no knots");
    for (const auto& [x, y] : f->knots()) {
      Require(y > 0.0, "JND values must be strictly positive");
    }
  }
  for (double w : band_weight) {
    Require(std::isfinite(w) && w > 0.0, "band weights must be positive");
  }
}

SensitivityProfile SensitivityProfile::Default() {
  SensitivityProfile p;
  p.icld_jnd = PiecewiseLinear({{5.0, 1.0}, {15.0, 2.5}});
  p.icc_jnd = PiecewiseLinear({{0.0, 0.35}, {1.0, 0.04}});
  return p;
}

void DistortionSpec::Validate() const {
  Require(std::isfinite(d_icld) && d_icld >= 0.0,
          "ICLD distortion index must be finite and >= 0");
  Require(std::isfinite(d_icc) && d_icc >= 0.0,
          "ICC distortion index must be finite and >= 0");
}

double QuantizeCue(double value, double step) {
  if (!(step >= 0.0)) {
    Fail(ErrorKind::kInvalidArgument, "quantizer step must be >= 0");
  }
  if (step == 0.0) return value;
  return std::round(value / step) * step;
}

double QuantizeIcld(double icld_db, double jnd_steps, const JndScale& scale,
                    double max_db) {
  if (jnd_steps == 0.0) return icld_db;
  const double count = QuantizeCue(scale.Forward(std::abs(icld_db)), jnd_steps);
  const double magnitude = std::min(scale.Inverse(count), max_db);
  return std::copysign(magnitude, icld_db);
}

double QuantizeIcc(double icc, double jnd_steps, const JndScale& scale) {
  if (jnd_steps == 0.0) return icc;
  const double x = std::clamp(icc, 0.0, 1.0);
  const double count = QuantizeCue(scale.Forward(x), jnd_steps);
  return std::clamp(scale.Inverse(count), 0.0, 1.0);
}

BccStream ApplyDistortion(const BccStream& stream, const DistortionSpec& spec,
                          const SensitivityProfile& profile) {
  spec.Validate();
  profile.Validate();
  BccStream out = stream;
  if (spec.disable_icld) out.flags.apply_icld = false;
  if (spec.disable_icc) out.flags.apply_icc = false;
  const bool q_icld = !spec.disable_icld && spec.d_icld > 0.0;
  const bool q_icc = !spec.disable_icc && spec.d_icc > 0.0;
  if (!q_icld && !q_icc) return out;

  const JndScale icld_scale(profile.icld_jnd);
  const JndScale icc_scale(profile.icc_jnd);
  const double max_db = stream.config.cues.icld_max_db;
  for (CueFrame& frame : out.cues.frames) {
    for (size_t b = 0; b < frame.icld_db.size(); ++b) {
      const double w = profile.Weight(b);
      if (q_icld) {
        frame.icld_db[b] =
            QuantizeIcld(frame.icld_db[b], spec.d_icld * w, icld_scale, max_db);
      }
      if (q_icc) {
        frame.icc[b] = QuantizeIcc(frame.icc[b], spec.d_icc * w, icc_scale);
      }
    }
  }
  return out;
}

AudioBuffer MakeAnchor(const AudioBuffer& stereo) {
  if (stereo.num_channels() != 2) {
    Fail(ErrorKind::kInvalidArgument, "anchor needs a stereo input");
  }
  AudioBuffer out;
  out.sample_rate = stereo.sample_rate;
  std::vector<double> mono(stereo.num_samples());
  for (size_t n = 0; n < mono.size(); ++n) {
    mono[n] = 0.5 * (stereo.channels[0][n] + stereo.channels[1][n]);
  }
  out.channels = {mono, mono};
  return out;
}

std::string_view LevelName(Level level) {
  switch (level) {
    case Level::kNull: return "null";
    case Level::kMid: return "mid";
    case Level::kHigh: return "high";
    case Level::kNa: return "na";
  }
  return "na";
}

Level ParseLevel(std::string_view name) {
  if (name == "null") return Level::kNull;
  if (name == "mid") return Level::kMid;
  if (name == "high") return Level::kHigh;
  if (name == "na") return Level::kNa;
  Fail(ErrorKind::kData, "unknown level '" + std::string(name) + "'");
}

std::string ConditionLabel(Level icld, Level icc) {
  if (icld == Level::kNull && icc == Level::kNull) {
    return std::string(kHiddenRefLabel);
  }
  Require(icld != Level::kNa && icc != Level::kNa,
          "factorial conditions need both levels");
  return "L_" + std::string(LevelName(icld)) + "_C_" +
         std::string(LevelName(icc));
}

std::pair<Level, Level> ParseConditionLabel(std::string_view label) {
  if (label == kHiddenRefLabel) return {Level::kNull, Level::kNull};
  if (label == kAnchorLabel) return {Level::kNa, Level::kNa};
  for (Level l : {Level::kNull, Level::kMid, Level::kHigh}) {
    for (Level c : {Level::kNull, Level::kMid, Level::kHigh}) {
      if (ConditionLabel(l, c) == label) return {l, c};
    }
  }
  Fail(ErrorKind::kData, "unknown condition label '" + std::string(label) + "'");
}

std::vector<Condition> MakeConditionSet(const LevelPresets& presets) {
  std::vector<Condition> out;
  for (Level l : {Level::kNull, Level::kMid, Level::kHigh}) {
    for (Level c : {Level::kNull, Level::kMid, Level::kHigh}) {
      Condition cond;
      cond.label = ConditionLabel(l, c);
      cond.icld_level = l;
      cond.icc_level = c;
      cond.spec.label = cond.label;
      cond.spec.d_icld = l == Level::kMid ? presets.icld_mid : 0.0;
      cond.spec.d_icc = c == Level::kMid ? presets.icc_mid : 0.0;
      cond.spec.disable_icld = l == Level::kHigh;
      cond.spec.disable_icc = c == Level::kHigh;
      out.push_back(std::move(cond));
    }
  }
  Condition anchor;
  anchor.label = std::string(kAnchorLabel);
  anchor.anchor = true;
  anchor.spec.label = anchor.label;
  out.push_back(std::move(anchor));
  return out;
}

std::vector<Stimulus> GenerateConditions(const AudioBuffer& stereo,
                                         const LevelPresets& presets,
                                         const SensitivityProfile& profile,
                                         const CodecConfig& codec) {
  if (stereo.num_channels() != 2) {
    Fail(ErrorKind::kInvalidArgument, "conditions need a stereo input");
  }
  const BccStream encoded = Encode(stereo, codec);
  std::vector<Stimulus> out;
  double reference_energy = -1.0;
  for (Condition& cond : MakeConditionSet(presets)) {
    Stimulus s;
    s.audio = cond.anchor
                  ? MakeAnchor(stereo)
                  : Decode(ApplyDistortion(encoded, cond.spec, profile));
    if (cond.label == kHiddenRefLabel) reference_energy = TotalEnergy(s.audio);
    s.condition = std::move(cond);
    out.push_back(std::move(s));
  }
  if (reference_energy > 0.0) {
    for (Stimulus& s : out) {
      if (s.condition.label == kHiddenRefLabel) continue;
      const double e = TotalEnergy(s.audio);
      if (e > 0.0) ApplyGain(s.audio, std::sqrt(reference_energy / e));
    }
  }
  return out;
}

}  // namespace cuedist
