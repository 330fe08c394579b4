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

#include "cuedist/synth_raters.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "cuedist/error.h"

namespace cuedist {

ScoreTable SimulateRatings(const std::vector<MovRecord>& movs,
                           const RaterModel& model) {
  Require(model.num_raters > 0, "need at least one rater");
  Require(model.noise_sd >= 0.0 && model.offset_sd >= 0.0 &&
              model.sensitivity_sd >= 0.0,
          "rater spreads must be non-negative");
  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> normal;
  ScoreTable table;
  for (int r = 0; r < model.num_raters; ++r) {
    const std::string subject = "P" + std::to_string(r + 1);
    const double offset = model.offset_sd * normal(rng);
    const double sensitivity = std::max(0.1, 1.0 + model.sensitivity_sd * normal(rng));
    for (const MovRecord& m : movs) {
      const auto it = model.icld_weight.find(m.group);
      const double w_icld =
          it == model.icld_weight.end() ? model.default_icld_weight : it->second;
      const double drop =
          sensitivity * (w_icld * m.report.ildd + model.icc_weight * m.report.iaccd);
      const double raw = 100.0 + offset - drop + model.noise_sd * normal(rng);
      ScoreRow row;
      row.subject_id = subject;
      row.item_id = m.item;
      std::tie(row.icld_level, row.icc_level) = ParseConditionLabel(m.label);
      row.condition_label = m.label;
      row.score = static_cast<int>(std::lround(std::clamp(raw, 0.0, 100.0)));
      table.push_back(std::move(row));
    }
  }
  return table;
}

}  // namespace cuedist
