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

// Score tables as CSV with the header
//   subject_id,item_id,icld_level,icc_level,condition_label,score
// Levels are null, mid, high or na. Fields may be double-quoted.

#ifndef CUEDIST_SCORE_CSV_H_
#define CUEDIST_SCORE_CSV_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "cuedist/stats.h"

namespace cuedist {

inline constexpr std::string_view kScoreCsvHeader =
    "subject_id,item_id,icld_level,icc_level,condition_label,score";

// Throws Error(kData) naming the offending line on any schema violation,
// including an empty input.
ScoreTable ParseScoreCsv(std::string_view text);
std::string FormatScoreCsv(const ScoreTable& table);

ScoreTable ReadScoreCsv(const std::filesystem::path& path);
void WriteScoreCsv(const std::filesystem::path& path, const ScoreTable& table);

}  // namespace cuedist

#endif  // CUEDIST_SCORE_CSV_H_
