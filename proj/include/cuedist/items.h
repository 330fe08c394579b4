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

// Deterministic synthetic test material: the four listening-test items
// (reverberant solo violin and castanets, and two left/right instrument
// mixes) plus simple analysis test signals.

#ifndef CUEDIST_ITEMS_H_
#define CUEDIST_ITEMS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cuedist/audio.h"

namespace cuedist {

struct ItemOptions {
  int sample_rate = 48000;
  double seconds = 3.0;
  uint64_t seed = 1;
};

struct ItemInfo {
  std::string id;
  std::string description;
  std::string group;  // "solo" or "mix"
};

// S1, S2, M1, M2 in that order.
const std::vector<ItemInfo>& BundledItems();

// Throws Error(kInvalidArgument) for an unknown id.
AudioBuffer MakeItem(std::string_view id, const ItemOptions& options = {});

// Mono sources.
std::vector<double> ViolinPhrase(const ItemOptions& options);
std::vector<double> CastanetPattern(const ItemOptions& options);
std::vector<double> PianoPhrase(const ItemOptions& options);

struct RoomOptions {
  double rt60_s = 1.6;
  double wet_gain = 0.6;  // wet-to-dry amplitude ratio
  double pan_left = 1.0;  // dry path gains
  double pan_right = 1.0;
};

// Places a mono source with the given dry panning into a synthetic room whose
// left and right tails are mutually independent.
AudioBuffer Reverberate(const std::vector<double>& source, int sample_rate,
                        const RoomOptions& room, uint64_t seed);

enum class TestSignal { kNoise, kSinusoid, kViolin, kCastanets, kAntiPhase };

const std::vector<TestSignal>& AllTestSignals();
std::string_view TestSignalName(TestSignal signal);
AudioBuffer MakeTestSignal(TestSignal signal, const ItemOptions& options = {});

}  // namespace cuedist

#endif  // CUEDIST_ITEMS_H_
