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

// Pipeline configuration: framing, band layout, cue estimation, sensitivity
// profile, level presets, the item list and output settings. Stored as JSON;
// every key is optional except "items" and unknown keys are rejected.

#ifndef CUEDIST_CONFIG_H_
#define CUEDIST_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cuedist/codec.h"
#include "cuedist/distort.h"
#include "cuedist/movs.h"

namespace cuedist {

struct ItemEntry {
  std::string id;
  std::filesystem::path path;
  std::string group;

  bool operator==(const ItemEntry&) const = default;
};

struct PipelineConfig {
  CodecConfig codec;
  SensitivityProfile profile = SensitivityProfile::Default();
  LevelPresets presets;
  std::vector<ItemEntry> items;
  std::filesystem::path out_dir = "out";
  uint64_t seed = 1;

  // Ids unique and non-empty, groups non-empty, framing valid. With
  // `check_files`, every item path must exist. Throws Error(kData).
  void Validate(bool check_files) const;

  // item id -> group
  std::map<std::string, std::string> Grouping() const;
  MovConfig MakeMovConfig() const;

  bool operator==(const PipelineConfig&) const = default;
};

// Relative item paths and out_dir are resolved against `base_dir`.
PipelineConfig ParseConfigJson(std::string_view json,
                               const std::filesystem::path& base_dir = {});
std::string ConfigToJson(const PipelineConfig& config);
PipelineConfig LoadConfig(const std::filesystem::path& path);

// The four bundled items, expected under `<out_dir>/items/<id>.wav`.
PipelineConfig BundledConfig(const std::filesystem::path& out_dir);

}  // namespace cuedist

#endif  // CUEDIST_CONFIG_H_
