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

#include "cuedist/config.h"

#include <set>

#include <json.hpp>

#include "cuedist/error.h"
#include "cuedist/fileio.h"
#include "cuedist/items.h"

namespace cuedist {

using nlohmann::json;

namespace {

void CheckKeys(const json& j, std::string_view where,
               std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) {
    Fail(ErrorKind::kData, std::string(where) + " must be a JSON object");
  }
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) {
      Fail(ErrorKind::kData,
           "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void Get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json KnotsToJson(const PiecewiseLinear& f) {
  json out = json::array();
  for (const auto& [x, y] : f.knots()) out.push_back({x, y});
  return out;
}

PiecewiseLinear KnotsFromJson(const json& j) {
  std::vector<std::pair<double, double>> knots;
  for (const auto& k : j) {
    if (!k.is_array() || k.size() != 2) {
      Fail(ErrorKind::kData, "sensitivity knots must be [x, y] pairs");
    }
    knots.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  return PiecewiseLinear(std::move(knots));
}

std::string_view WindowName(WindowType w) {
  return w == WindowType::kSine ? "sine" : "hann";
}

WindowType ParseWindow(const std::string& name) {
  if (name == "sine") return WindowType::kSine;
  if (name == "hann") return WindowType::kHann;
  Fail(ErrorKind::kData, "unknown window '" + name + "'");
}

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::filesystem::path& p) {
  return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

void PipelineConfig::Validate(bool check_files) const {
  try {
    ValidateFrameSpec(codec.frame);
    profile.Validate();
  } catch (const Error& e) {
    Fail(ErrorKind::kData, e.what());
  }
  if (!(codec.bands_per_erb > 0.0)) {
    Fail(ErrorKind::kData, "bands_per_erb must be positive");
  }
  if (codec.refine_iterations < 0) {
    Fail(ErrorKind::kData, "refine_iterations must be >= 0");
  }
  if (!(presets.icld_mid > 0.0) || !(presets.icc_mid > 0.0)) {
    Fail(ErrorKind::kData, "mid level presets must be positive");
  }
  if (items.empty()) Fail(ErrorKind::kData, "config lists no items");
  std::set<std::string> ids;
  for (const ItemEntry& item : items) {
    if (item.id.empty()) Fail(ErrorKind::kData, "item with empty id");
    if (item.id.find_first_of("/\\") != std::string::npos) {
      Fail(ErrorKind::kData, "item id '" + item.id + "' contains a path separator");
    }
    if (item.group.empty()) {
      Fail(ErrorKind::kData, "item " + item.id + " has no group");
    }
    if (!ids.insert(item.id).second) {
      Fail(ErrorKind::kData, "duplicate item id " + item.id);
    }
    if (check_files && !std::filesystem::exists(item.path)) {
      Fail(ErrorKind::kData, "item " + item.id + ": file '" +
                                 item.path.string() + "' does not exist");
    }
  }
}

std::map<std::string, std::string> PipelineConfig::Grouping() const {
  std::map<std::string, std::string> out;
  for (const ItemEntry& item : items) out[item.id] = item.group;
  return out;
}

MovConfig PipelineConfig::MakeMovConfig() const {
  MovConfig m;
  m.frame = codec.frame;
  m.bands_per_erb = codec.bands_per_erb;
  m.cues = codec.cues;
  return m;
}

PipelineConfig ParseConfigJson(std::string_view text,
                               const std::filesystem::path& base_dir) {
  PipelineConfig c;
  try {
    const json j = json::parse(text);
    CheckKeys(j, "config", {"frame", "bands_per_erb", "cues", "refine_iterations",
                            "decorrelator_seed", "profile", "presets", "items",
                            "out_dir", "seed"});
    if (j.contains("frame")) {
      const json& f = j["frame"];
      CheckKeys(f, "frame", {"frame_length", "hop", "fft_length", "window",
                             "sample_rate"});
      Get(f, "frame_length", c.codec.frame.frame_length);
      Get(f, "hop", c.codec.frame.hop);
      Get(f, "fft_length", c.codec.frame.fft_length);
      Get(f, "sample_rate", c.codec.frame.sample_rate);
      if (f.contains("window")) {
        c.codec.frame.window = ParseWindow(f["window"].get<std::string>());
      }
    }
    Get(j, "bands_per_erb", c.codec.bands_per_erb);
    Get(j, "refine_iterations", c.codec.refine_iterations);
    Get(j, "decorrelator_seed", c.codec.decorrelator_seed);
    if (j.contains("cues")) {
      const json& q = j["cues"];
      CheckKeys(q, "cues", {"icld_max_db", "silence_floor", "icc_smoothing",
                            "icc_debias", "icld_smoothing", "downmix_cap_db"});
      Get(q, "icld_max_db", c.codec.cues.icld_max_db);
      Get(q, "silence_floor", c.codec.cues.silence_floor);
      Get(q, "icc_smoothing", c.codec.cues.icc_smoothing);
      Get(q, "icc_debias", c.codec.cues.icc_debias);
      Get(q, "icld_smoothing", c.codec.cues.icld_smoothing);
      Get(q, "downmix_cap_db", c.codec.cues.downmix_cap_db);
    }
    if (j.contains("profile")) {
      const json& p = j["profile"];
      CheckKeys(p, "profile", {"icld_jnd", "icc_jnd", "band_weight"});
      if (p.contains("icld_jnd")) c.profile.icld_jnd = KnotsFromJson(p["icld_jnd"]);
      if (p.contains("icc_jnd")) c.profile.icc_jnd = KnotsFromJson(p["icc_jnd"]);
      Get(p, "band_weight", c.profile.band_weight);
    }
    if (j.contains("presets")) {
      const json& p = j["presets"];
      CheckKeys(p, "presets", {"icld_mid", "icc_mid"});
      Get(p, "icld_mid", c.presets.icld_mid);
      Get(p, "icc_mid", c.presets.icc_mid);
    }
    if (!j.contains("items") || !j["items"].is_array()) {
      Fail(ErrorKind::kData, "config needs an \"items\" array");
    }
    for (const json& it : j["items"]) {
      CheckKeys(it, "item", {"id", "path", "group"});
      ItemEntry e;
      e.id = it.at("id").get<std::string>();
      e.path = Resolve(base_dir, it.at("path").get<std::string>());
      e.group = it.at("group").get<std::string>();
      c.items.push_back(std::move(e));
    }
    if (j.contains("out_dir")) {
      c.out_dir = Resolve(base_dir, j["out_dir"].get<std::string>());
    } else {
      c.out_dir = Resolve(base_dir, c.out_dir);
    }
    Get(j, "seed", c.seed);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kData, std::string("config: ") + e.what());
  } catch (const Error& e) {
    Fail(ErrorKind::kData, std::string("config: ") + e.what());
  }
  c.Validate(false);
  return c;
}

std::string ConfigToJson(const PipelineConfig& c) {
  json j;
  const FrameSpec& f = c.codec.frame;
  j["frame"] = {{"frame_length", f.frame_length},
                {"hop", f.hop},
                {"fft_length", f.fft_length},
                {"window", WindowName(f.window)},
                {"sample_rate", f.sample_rate}};
  j["bands_per_erb"] = c.codec.bands_per_erb;
  j["refine_iterations"] = c.codec.refine_iterations;
  j["decorrelator_seed"] = c.codec.decorrelator_seed;
  const CueConfig& q = c.codec.cues;
  j["cues"] = {{"icld_max_db", q.icld_max_db},
               {"silence_floor", q.silence_floor},
               {"icc_smoothing", q.icc_smoothing},
               {"icc_debias", q.icc_debias},
               {"icld_smoothing", q.icld_smoothing},
               {"downmix_cap_db", q.downmix_cap_db}};
  j["profile"] = {{"icld_jnd", KnotsToJson(c.profile.icld_jnd)},
                  {"icc_jnd", KnotsToJson(c.profile.icc_jnd)},
                  {"band_weight", c.profile.band_weight}};
  j["presets"] = {{"icld_mid", c.presets.icld_mid},
                  {"icc_mid", c.presets.icc_mid}};
  j["items"] = json::array();
  for (const ItemEntry& e : c.items) {
    j["items"].push_back(
        {{"id", e.id}, {"path", e.path.string()}, {"group", e.group}});
  }
  j["out_dir"] = c.out_dir.string();
  j["seed"] = c.seed;
  return j.dump(2) + "\n";
}

PipelineConfig LoadConfig(const std::filesystem::path& path) {
  return ParseConfigJson(ReadFileText(path), path.parent_path());
}

PipelineConfig BundledConfig(const std::filesystem::path& out_dir) {
  PipelineConfig c;
  c.out_dir = out_dir;
  for (const ItemInfo& info : BundledItems()) {
    c.items.push_back({info.id, out_dir / "items" / (info.id + ".wav"), info.group});
  }
  return c;
}

}  // namespace cuedist
