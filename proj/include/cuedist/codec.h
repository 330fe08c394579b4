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

// Binaural-cue-coding style codec: stereo -> mono downmix + per-band cues, and
// back. The decoder restores level differences with per-band gains and
// coherence by mixing the downmix with a decorrelated copy of itself:
//
//   y_L = g_L (cos(t) m + sin(t) d),   y_R = g_R (cos(t) m - sin(t) d)
//
// with r = 10^(ICLD/10), g_L = sqrt(2r / (1 + r)), g_R = sqrt(2 / (1 + r)) and
// t = arccos(ICC) / 2. Per band and frame, d is made orthogonal to m and
// scaled to m's power, so the output coherence equals cos(2t) exactly before
// overlap-add. Overlap-add then blends neighbouring frames and bins, so the
// decoder re-measures its output and corrects the per-band parameters for a
// few passes (CodecConfig::refine_iterations).

#ifndef CUEDIST_CODEC_H_
#define CUEDIST_CODEC_H_

#include <cstdint>

#include "cuedist/audio.h"
#include "cuedist/cues.h"
#include "cuedist/timefreq.h"

namespace cuedist {

struct CodecConfig {
  FrameSpec frame;
  double bands_per_erb = 1.0;
  CueConfig cues;
  uint64_t decorrelator_seed = 0x5eedULL;
  // Closed-loop passes in the decoder that correct the mixing parameters
  // against the cues re-measured on the output.
  int refine_iterations = 4;

  ErbPartition MakePartition() const {
    return MakeErbPartition(frame.sample_rate, frame.fft_length,
                            bands_per_erb);
  }
  bool operator==(const CodecConfig&) const = default;
};

struct SynthesisFlags {
  bool apply_icld = true;
  bool apply_icc = true;

  bool operator==(const SynthesisFlags&) const = default;
};

struct BccStream {
  AudioBuffer mono;
  CueStream cues;
  CodecConfig config;
  // Flags recorded by the distortion stage; combined (logical AND) with the
  // flags passed to Decode.
  SynthesisFlags flags;
};

BccStream Encode(const AudioBuffer& stereo, const CodecConfig& config = {});

struct DecorrelatorConfig {
  double max_delay_ms = 20.0;
  // Common latency that keeps the band-edge transients of the filter causal;
  // part of max_delay_ms.
  double bulk_delay_ms = 5.0;
};

// All-pass-like FIR with a pseudo-random phase and a delay per ERB band.
// Deterministic for a given seed; output has the input's length.
AudioBuffer Decorrelate(const AudioBuffer& mono, uint64_t seed,
                        const DecorrelatorConfig& config = {});

// Impulse response used by Decorrelate at the given rate.
std::vector<double> DecorrelatorImpulseResponse(
    int sample_rate, uint64_t seed, const DecorrelatorConfig& config = {});

struct MixingGains {
  double left = 1.0;
  double right = 1.0;
  double theta = 0.0;  // radians
};

// Gains and mixing angle for one band. `icc` is the target coherence of the
// mixing equations (already mapped from the stored value if debiasing is on).
MixingGains ComputeMixingGains(double icld_db, double icc,
                               const SynthesisFlags& flags);

AudioBuffer Decode(const BccStream& stream, const SynthesisFlags& flags = {});

}  // namespace cuedist

#endif  // CUEDIST_CODEC_H_
