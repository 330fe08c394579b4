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

// Batch stages: item generation, condition generation, MOV measurement and
// synthetic rating. Each stage reads and writes files so that the stages can
// run as separate commands.

#ifndef CUEDIST_PIPELINE_H_
#define CUEDIST_PIPELINE_H_

#include <filesystem>
#include <vector>

#include "cuedist/config.h"
#include "cuedist/items.h"
#include "cuedist/manifest.h"

namespace cuedist {

// Writes the bundled items as <dir>/<id>.wav and returns their entries.
std::vector<ItemEntry> GenerateItems(const std::filesystem::path& dir,
                                     const ItemOptions& options = {});

// Writes <out_dir>/stimuli/<item>__<label>.wav for every item and condition
// plus <out_dir>/manifest.jsonl. Items are processed in parallel; outputs do
// not depend on scheduling.
std::vector<ManifestEntry> RunConditions(const PipelineConfig& config);

// Measures every manifest entry against its reference and writes one MOV
// record per stimulus to `results`, in manifest order.
std::vector<MovRecord> RunMeasure(const std::filesystem::path& manifest,
                                  const MovConfig& config,
                                  const std::filesystem::path& results);

}  // namespace cuedist

#endif  // CUEDIST_PIPELINE_H_
