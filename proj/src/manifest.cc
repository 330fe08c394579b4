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

#include "cuedist/manifest.h"

#include <json.hpp>

#include "cuedist/error.h"
#include "cuedist/fileio.h"

namespace cuedist {

using nlohmann::json;

namespace {

constexpr int kManifestVersion = 1;

std::string Relative(const std::filesystem::path& p,
                     const std::filesystem::path& base) {
  if (base.empty()) return p.generic_string();
  const auto rel = p.lexically_relative(base);
  return (rel.empty() || *rel.begin() == "..") ? p.generic_string()
                                                : rel.generic_string();
}

std::filesystem::path Resolve(const std::string& p,
                              const std::filesystem::path& base) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string_view> Lines(std::string_view text) {
  std::vector<std::string_view> out;
  while (!text.empty()) {
    const size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    if (line.ends_with('\r')) line.remove_suffix(1);
    out.push_back(line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  return out;
}

}  // namespace

std::string StimulusFileName(std::string_view item, std::string_view label) {
  return std::string(item) + "__" + std::string(label) + ".wav";
}

std::string FormatManifest(const std::vector<ManifestEntry>& entries,
                           const std::filesystem::path& base_dir) {
  const size_t grid = MakeConditionSet().size();
  // The hidden reference is also the (null, null) cell of the factorial grid,
  // so an item has 9 factorial cells and 10 stimuli in total.
  json header = {{"type", "header"},
                 {"version", kManifestVersion},
                 {"stimuli_per_item", grid},
                 {"factorial_cells", grid - 1},
                 {"hidden_ref_is_factorial_cell", true},
                 {"stimuli", entries.size()}};
  std::string out = header.dump() + "\n";
  for (const ManifestEntry& e : entries) {
    json j = {{"type", "stimulus"},
              {"item", e.item},
              {"group", e.group},
              {"label", e.label},
              {"icld_level", LevelName(e.icld_level)},
              {"icc_level", LevelName(e.icc_level)},
              {"anchor", e.anchor},
              {"d_icld", e.spec.d_icld},
              {"d_icc", e.spec.d_icc},
              {"disable_icld", e.spec.disable_icld},
              {"disable_icc", e.spec.disable_icc},
              {"path", Relative(e.path, base_dir)},
              {"reference_path", Relative(e.reference_path, base_dir)}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ManifestEntry> ParseManifest(std::string_view text,
                                         const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> out;
  bool header = false;
  size_t line_no = 0;
  for (std::string_view line : Lines(text)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (j.at("version").get<int>() != kManifestVersion) {
          Fail(ErrorKind::kData, "unsupported manifest version");
        }
        header = true;
        continue;
      }
      if (type != "stimulus") Fail(ErrorKind::kData, "unknown record type " + type);
      ManifestEntry e;
      e.item = j.at("item").get<std::string>();
      e.group = j.value("group", "");
      e.label = j.at("label").get<std::string>();
      e.icld_level = ParseLevel(j.at("icld_level").get<std::string>());
      e.icc_level = ParseLevel(j.at("icc_level").get<std::string>());
      e.anchor = j.at("anchor").get<bool>();
      e.spec.label = e.label;
      e.spec.d_icld = j.at("d_icld").get<double>();
      e.spec.d_icc = j.at("d_icc").get<double>();
      e.spec.disable_icld = j.at("disable_icld").get<bool>();
      e.spec.disable_icc = j.at("disable_icc").get<bool>();
      e.path = Resolve(j.at("path").get<std::string>(), base_dir);
      e.reference_path = Resolve(j.at("reference_path").get<std::string>(), base_dir);
      out.push_back(std::move(e));
    } catch (const json::exception& e) {
      Fail(ErrorKind::kData, "manifest line " + std::to_string(line_no) + ": " +
                                 e.what());
    } catch (const Error& e) {
      Fail(ErrorKind::kData, "manifest line " + std::to_string(line_no) + ": " +
                                 e.what());
    }
  }
  if (!header) Fail(ErrorKind::kData, "manifest has no header record");
  return out;
}

void WriteManifest(const std::filesystem::path& path,
                   const std::vector<ManifestEntry>& entries) {
  WriteFileAtomic(path, FormatManifest(entries, path.parent_path()));
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path) {
  return ParseManifest(ReadFileText(path), path.parent_path());
}

std::string FormatMovRecord(const MovRecord& r) {
  json j = {{"item", r.item},
            {"group", r.group},
            {"label", r.label},
            {"ildd", r.report.ildd},
            {"iaccd", r.report.iaccd},
            {"frames_compared", r.report.frames_compared},
            {"per_band_ildd", r.report.per_band_ildd},
            {"per_band_iaccd", r.report.per_band_iaccd}};
  return j.dump();
}

MovRecord ParseMovRecord(std::string_view line) {
  MovRecord r;
  try {
    const json j = json::parse(line);
    r.item = j.at("item").get<std::string>();
    r.group = j.value("group", "");
    r.label = j.at("label").get<std::string>();
    r.report.ildd = j.at("ildd").get<double>();
    r.report.iaccd = j.at("iaccd").get<double>();
    r.report.frames_compared = j.at("frames_compared").get<size_t>();
    r.report.per_band_ildd = j.at("per_band_ildd").get<std::vector<double>>();
    r.report.per_band_iaccd = j.at("per_band_iaccd").get<std::vector<double>>();
  } catch (const json::exception& e) {
    Fail(ErrorKind::kData, std::string("MOV record: ") + e.what());
  }
  return r;
}

std::vector<MovRecord> ReadMovRecords(const std::filesystem::path& path) {
  const std::string text = ReadFileText(path);
  std::vector<MovRecord> out;
  for (std::string_view line : Lines(text)) {
    if (!line.empty()) out.push_back(ParseMovRecord(line));
  }
  return out;
}

}  // namespace cuedist
