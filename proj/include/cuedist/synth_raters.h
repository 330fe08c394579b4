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

// Synthetic listeners for exercising the analysis end to end. A rater's score
// for a stimulus falls linearly with its measured MOVs, with a per-group ICLD
// weight, a per-rater offset and sensitivity, and per-rating noise:
//
//   score = 100 + offset_r - s_r (w_icld[group] ildd + w_icc iaccd) + noise
//
// rounded and clipped to [0, 100].

#ifndef CUEDIST_SYNTH_RATERS_H_
#define CUEDIST_SYNTH_RATERS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cuedist/manifest.h"
#include "cuedist/stats.h"

namespace cuedist {

struct RaterModel {
  int num_raters = 7;
  // Points per dB of ILDD, by item group; groups not listed use the default.
  std::map<std::string, double> icld_weight = {{"solo", 6.0}, {"mix", 12.0}};
  double default_icld_weight = 8.0;
  double icc_weight = 150.0;  // points per unit of IACCD
  double offset_sd = 3.0;
  double sensitivity_sd = 0.15;
  double noise_sd = 5.0;
  uint64_t seed = 1;
};

// One row per (rater, record). Deterministic for a fixed model.
ScoreTable SimulateRatings(const std::vector<MovRecord>& movs,
                           const RaterModel& model = {});

}  // namespace cuedist

#endif  // CUEDIST_SYNTH_RATERS_H_
