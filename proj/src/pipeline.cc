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

#include "cuedist/pipeline.h"

#include <future>
#include <map>

#include "cuedist/error.h"
#include "cuedist/fileio.h"
#include "cuedist/wav.h"

namespace cuedist {

std::vector<ItemEntry> GenerateItems(const std::filesystem::path& dir,
                                     const ItemOptions& options) {
  std::filesystem::create_directories(dir);
  std::vector<ItemEntry> out;
  for (const ItemInfo& info : BundledItems()) {
    const auto path = dir / (info.id + ".wav");
    WriteWav(path, MakeItem(info.id, options));
    out.push_back({info.id, path, info.group});
  }
  return out;
}

std::vector<ManifestEntry> RunConditions(const PipelineConfig& config) {
  config.Validate(true);
  const auto stimuli_dir = config.out_dir / "stimuli";
  std::filesystem::create_directories(stimuli_dir);

  auto run_item = [&config, &stimuli_dir](const ItemEntry& item) {
    AudioBuffer stereo = ReadWav(item.path);
    if (stereo.num_channels() != 2) {
      Fail(ErrorKind::kData, "item " + item.id + " is not stereo");
    }
    // Frame lengths are kept; only the rate follows the file.
    CodecConfig codec = config.codec;
    codec.frame.sample_rate = stereo.sample_rate;
    codec.decorrelator_seed ^= config.seed;
    const auto stimuli =
        GenerateConditions(stereo, config.presets, config.profile, codec);
    const auto reference =
        stimuli_dir / StimulusFileName(item.id, kHiddenRefLabel);
    std::vector<ManifestEntry> entries;
    for (const Stimulus& s : stimuli) {
      ManifestEntry e;
      e.item = item.id;
      e.group = item.group;
      e.label = s.condition.label;
      e.icld_level = s.condition.icld_level;
      e.icc_level = s.condition.icc_level;
      e.anchor = s.condition.anchor;
      e.spec = s.condition.spec;
      e.path = stimuli_dir / StimulusFileName(item.id, e.label);
      e.reference_path = reference;
      WriteWav(e.path, s.audio);
      entries.push_back(std::move(e));
    }
    return entries;
  };

  std::vector<std::future<std::vector<ManifestEntry>>> jobs;
  for (const ItemEntry& item : config.items) {
    jobs.push_back(std::async(std::launch::async, run_item, std::cref(item)));
  }
  std::vector<ManifestEntry> all;
  for (auto& job : jobs) {
    for (ManifestEntry& e : job.get()) all.push_back(std::move(e));
  }
  WriteManifest(config.out_dir / "manifest.jsonl", all);
  return all;
}

std::vector<MovRecord> RunMeasure(const std::filesystem::path& manifest,
                                  const MovConfig& config,
                                  const std::filesystem::path& results) {
  const std::vector<ManifestEntry> entries = ReadManifest(manifest);
  if (entries.empty()) Fail(ErrorKind::kData, "manifest lists no stimuli");

  // One job per reference file so each reference is read once.
  std::map<std::filesystem::path, std::vector<size_t>> by_reference;
  for (size_t i = 0; i < entries.size(); ++i) {
    by_reference[entries[i].reference_path].push_back(i);
  }
  std::vector<MovRecord> out(entries.size());
  std::vector<std::future<void>> jobs;
  for (const auto& [reference, indices] : by_reference) {
    jobs.push_back(std::async(std::launch::async, [&, &reference = reference,
                                                   &indices = indices] {
      const AudioBuffer ref = ReadWav(reference);
      MovConfig cfg = config;
      cfg.frame.sample_rate = ref.sample_rate;
      for (size_t i : indices) {
        const ManifestEntry& e = entries[i];
        const AudioBuffer sut = ReadWav(e.path);
        if (sut.sample_rate != ref.sample_rate) {
          Fail(ErrorKind::kData, e.path.string() + ": sample rate differs from " +
                                     reference.string());
        }
        out[i] = {e.item, e.group, e.label, Measure(ref, sut, cfg)};
      }
    }));
  }
  for (auto& job : jobs) job.get();

  std::string text;
  for (const MovRecord& r : out) text += FormatMovRecord(r) + "\n";
  if (results.has_parent_path()) {
    std::filesystem::create_directories(results.parent_path());
  }
  WriteFileAtomic(results, text);
  return out;
}

}  // namespace cuedist
