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

// JND-scaled cue quantization and the listening-test condition set.
//
// A distortion index d means "quantize with a step of d just-noticeable
// differences". The step is applied on a JND-count scale
//
//   J(x) = integral_0^x du / jnd(u)
//
// so that one unit of J is one JND wherever the value sits. Locally the step
// in cue units is d * jnd(x), and because the grid lives on a fixed scale,
// quantizing an already quantized stream changes nothing.

#ifndef CUEDIST_DISTORT_H_
#define CUEDIST_DISTORT_H_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cuedist/audio.h"
#include "cuedist/codec.h"

namespace cuedist {

// Piecewise-linear function through (x, y) knots; constant beyond the ends.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots);

  double operator()(double x) const;
  const std::vector<std::pair<double, double>>& knots() const {
    return knots_;
  }
  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<std::pair<double, double>> knots_;
};

// Maps x >= 0 to its JND count J(x) for a strictly positive jnd function,
// and back.
class JndScale {
 public:
  explicit JndScale(const PiecewiseLinear& jnd);

  double Forward(double x) const;
  double Inverse(double count) const;

 private:
  // Segment boundaries in x, including 0; beyond the last one jnd is flat.
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> count_;  // J at each boundary
};

struct SensitivityProfile {
  PiecewiseLinear icld_jnd;  // |ICLD| dB -> dB
  PiecewiseLinear icc_jnd;   // ICC -> delta ICC
  // Step multiplier per band; empty means 1 for every band.
  std::vector<double> band_weight;

  double Weight(size_t band) const;
  void Validate() const;

  static SensitivityProfile Default();
  bool operator==(const SensitivityProfile&) const = default;
};

struct DistortionSpec {
  double d_icld = 0.0;
  double d_icc = 0.0;
  bool disable_icld = false;  // overrides d_icld
  bool disable_icc = false;   // overrides d_icc
  std::string label;

  void Validate() const;
  bool operator==(const DistortionSpec&) const = default;
};

// Mid-tread uniform quantizer. step == 0 passes the value through.
double QuantizeCue(double value, double step);

// Quantizes one cue value with a step of `jnd_steps` JNDs. Results are
// clamped to [-max_db, max_db] and [0, 1].
double QuantizeIcld(double icld_db, double jnd_steps, const JndScale& scale,
                    double max_db);
double QuantizeIcc(double icc, double jnd_steps, const JndScale& scale);

BccStream ApplyDistortion(const BccStream& stream, const DistortionSpec& spec,
                          const SensitivityProfile& profile);

// Dual-mono (L + R) / 2.
AudioBuffer MakeAnchor(const AudioBuffer& stereo);

enum class Level { kNull, kMid, kHigh, kNa };
std::string_view LevelName(Level level);
// Accepts "null", "mid", "high", "na".
Level ParseLevel(std::string_view name);

struct LevelPresets {
  double icld_mid = 4.0;
  double icc_mid = 4.0;
  bool operator==(const LevelPresets&) const = default;
};

struct Condition {
  std::string label;
  Level icld_level = Level::kNa;
  Level icc_level = Level::kNa;
  bool anchor = false;
  DistortionSpec spec;  // unused for the anchor
};

inline constexpr std::string_view kHiddenRefLabel = "hidden_ref";
inline constexpr std::string_view kAnchorLabel = "anchor";

// "L_mid_C_high" etc.; the (null, null) cell is the hidden reference.
std::string ConditionLabel(Level icld, Level icc);
// Inverse of ConditionLabel; the anchor maps to (na, na). Throws Error(kData).
std::pair<Level, Level> ParseConditionLabel(std::string_view label);

// The 3 x 3 factorial grid followed by the anchor: 10 conditions.
std::vector<Condition> MakeConditionSet(const LevelPresets& presets = {});

struct Stimulus {
  Condition condition;
  AudioBuffer audio;
};

// Encodes once, decodes every factorial cell from the distorted metadata and
// appends the anchor. Every stimulus is scaled to the total energy of the
// hidden reference.
std::vector<Stimulus> GenerateConditions(
    const AudioBuffer& stereo, const LevelPresets& presets = {},
    const SensitivityProfile& profile = SensitivityProfile::Default(),
    const CodecConfig& codec = {});

}  // namespace cuedist

#endif  // CUEDIST_DISTORT_H_
