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

// Objective inter-channel distortion measures of a signal under test (SUT)
// against a reference: ILDD (level-difference distortion, dB) and IACCD
// (coherence distortion). Per frame and band the absolute cue differences
// are weighted by the reference band energy; bands of the reference below
// the silence floor do not count.

#ifndef CUEDIST_MOVS_H_
#define CUEDIST_MOVS_H_

#include <cstddef>
#include <vector>

#include "cuedist/audio.h"
#include "cuedist/cues.h"
#include "cuedist/timefreq.h"

namespace cuedist {

struct MovConfig {
  FrameSpec frame;
  double bands_per_erb = 1.0;
  CueConfig cues;
  // Average squared instead of absolute differences.
  bool squared = false;
};

struct MovReport {
  double ildd = 0.0;
  double iaccd = 0.0;
  std::vector<double> per_band_ildd;
  std::vector<double> per_band_iaccd;
  size_t frames_compared = 0;
};

// Both inputs stereo at the same rate. Lengths may differ by at most one
// hop; the longer one is trimmed.
MovReport Measure(const AudioBuffer& ref, const AudioBuffer& sut,
                  const MovConfig& config = {});

}  // namespace cuedist

#endif  // CUEDIST_MOVS_H_
