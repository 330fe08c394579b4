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

#include "cuedist/movs.h"

#include <cmath>
#include <string>

#include "cuedist/error.h"

namespace cuedist {

namespace {

AudioBuffer Trimmed(const AudioBuffer& a, size_t length) {
  AudioBuffer out;
  out.sample_rate = a.sample_rate;
  for (const auto& ch : a.channels) {
    out.channels.emplace_back(ch.begin(), ch.begin() + static_cast<long>(length));
  }
  return out;
}

}  // namespace

MovReport Measure(const AudioBuffer& ref, const AudioBuffer& sut,
                  const MovConfig& config) {
  if (ref.num_channels() != 2 || sut.num_channels() != 2) {
    Fail(ErrorKind::kInvalidArgument, "MOV measurement needs stereo inputs");
  }
  if (ref.sample_rate != sut.sample_rate) {
    Fail(ErrorKind::kInvalidArgument,
         "sample rates differ: " + std::to_string(ref.sample_rate) + " vs " +
             std::to_string(sut.sample_rate));
  }
  FrameSpec frame = config.frame;
  frame.sample_rate = ref.sample_rate;
  const size_t n_ref = ref.num_samples();
  const size_t n_sut = sut.num_samples();
  const size_t diff = n_ref > n_sut ? n_ref - n_sut : n_sut - n_ref;
  if (diff > frame.hop) {
    Fail(ErrorKind::kInvalidArgument,
         "lengths differ by " + std::to_string(diff) + " samples (> one hop)");
  }
  const size_t length = std::min(n_ref, n_sut);
  Require(length > 0, "MOV measurement needs non-empty inputs");

  const ErbPartition part =
      MakeErbPartition(frame.sample_rate, frame.fft_length, config.bands_per_erb);
  const CueStream r =
      EstimateCues(n_ref == length ? ref : Trimmed(ref, length), frame, part,
                   config.cues);
  const CueStream s =
      EstimateCues(n_sut == length ? sut : Trimmed(sut, length), frame, part,
                   config.cues);
  const double floor = SilenceFloorPower(frame, config.cues);

  const size_t bands = part.num_bands();
  MovReport out;
  out.per_band_ildd.assign(bands, 0.0);
  out.per_band_iaccd.assign(bands, 0.0);
  std::vector<double> band_weight(bands, 0.0);
  double total_weight = 0.0;
  for (size_t f = 0; f < r.frames.size(); ++f) {
    bool used = false;
    for (size_t b = 0; b < bands; ++b) {
      const double w = r.frames[f].band_energy[b];
      if (w < floor) continue;
      double dl = std::abs(r.frames[f].icld_db[b] - s.frames[f].icld_db[b]);
      double dc = std::abs(r.frames[f].icc[b] - s.frames[f].icc[b]);
      if (config.squared) {
        dl *= dl;
        dc *= dc;
      }
      out.per_band_ildd[b] += w * dl;
      out.per_band_iaccd[b] += w * dc;
      band_weight[b] += w;
      used = true;
    }
    if (used) ++out.frames_compared;
  }
  for (size_t b = 0; b < bands; ++b) {
    out.ildd += out.per_band_ildd[b];
    out.iaccd += out.per_band_iaccd[b];
    total_weight += band_weight[b];
    if (band_weight[b] > 0.0) {
      out.per_band_ildd[b] /= band_weight[b];
      out.per_band_iaccd[b] /= band_weight[b];
    }
  }
  if (total_weight > 0.0) {
    out.ildd /= total_weight;
    out.iaccd /= total_weight;
  }
  return out;
}

}  // namespace cuedist
