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

// Line-oriented (JSON Lines) records for generated stimuli and their MOVs.
//
// A manifest starts with one header record describing the condition grid,
// followed by one record per stimulus. Paths are stored relative to the
// manifest's directory when possible.

#ifndef CUEDIST_MANIFEST_H_
#define CUEDIST_MANIFEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cuedist/distort.h"
#include "cuedist/movs.h"

namespace cuedist {

struct ManifestEntry {
  std::string item;
  std::string group;
  std::string label;
  Level icld_level = Level::kNa;
  Level icc_level = Level::kNa;
  bool anchor = false;
  DistortionSpec spec;
  std::filesystem::path path;
  std::filesystem::path reference_path;  // the item's hidden reference

  bool operator==(const ManifestEntry&) const = default;
};

// "<item>__<label>.wav"
std::string StimulusFileName(std::string_view item, std::string_view label);

std::string FormatManifest(const std::vector<ManifestEntry>& entries,
                           const std::filesystem::path& base_dir = {});
// Relative paths are resolved against `base_dir`. Throws Error(kData).
std::vector<ManifestEntry> ParseManifest(
    std::string_view text, const std::filesystem::path& base_dir = {});

void WriteManifest(const std::filesystem::path& path,
                   const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);

struct MovRecord {
  std::string item;
  std::string group;
  std::string label;
  MovReport report;
};

std::string FormatMovRecord(const MovRecord& record);
MovRecord ParseMovRecord(std::string_view line);
std::vector<MovRecord> ReadMovRecords(const std::filesystem::path& path);

}  // namespace cuedist

#endif  // CUEDIST_MANIFEST_H_
