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

// Per-band inter-channel cues of a stereo spectrogram pair.
//
// ICLD is the per-frame band power ratio in dB. ICC is the band coherence
// magnitude |sum L conj(R)| / sqrt(sum |L|^2 sum |R|^2). The coherence sums
// may be smoothed recursively across frames, and the small-sample bias of the
// magnitude-squared coherence can be removed using the effective number of
// degrees of freedom of the band (see CoherenceBias). Both are on by default;
// with smoothing 0 and debias off the estimator is the plain per-frame
// formula.

#ifndef CUEDIST_CUES_H_
#define CUEDIST_CUES_H_

#include <cstddef>
#include <vector>

#include "cuedist/timefreq.h"

namespace cuedist {

struct CueConfig {
  double icld_max_db = 30.0;
  // Bands whose power is below this fraction of FullScalePower() are silent.
  double silence_floor = 1e-10;
  // One-pole smoothing coefficient for the coherence sums, in [0, 1).
  double icc_smoothing = 0.5;
  bool icc_debias = true;
  // One-pole smoothing coefficient for the ICLD band powers, in [0, 1).
  double icld_smoothing = 0.5;
  double downmix_cap_db = 12.0;

  bool operator==(const CueConfig&) const = default;
};

// Frames x bands matrix of doubles.
class BandMatrix {
 public:
  BandMatrix() = default;
  BandMatrix(size_t frames, size_t bands, double fill = 0.0)
      : frames_(frames), bands_(bands), data_(frames * bands, fill) {}

  size_t frames() const { return frames_; }
  size_t bands() const { return bands_; }
  double& at(size_t f, size_t b) { return data_[f * bands_ + b]; }
  double at(size_t f, size_t b) const { return data_[f * bands_ + b]; }

 private:
  size_t frames_ = 0;
  size_t bands_ = 0;
  std::vector<double> data_;
};

// One-sided spectral power of a full-scale sinusoid in one frame; the
// reference for the silence floor.
double FullScalePower(const FrameSpec& spec);
double SilenceFloorPower(const FrameSpec& spec, const CueConfig& config);

// Per frame/band power sum_{k in band} |X_k|^2.
BandMatrix BandPowers(const Spectrogram& s, const ErbPartition& part);

// Expected magnitude-squared coherence of two independent white-noise inputs
// for each band and frame: the inverse effective degrees of freedom of the
// (smoothed) band coherence estimator.
class CoherenceBias {
 public:
  CoherenceBias(const FrameSpec& spec, const ErbPartition& part,
                double smoothing);

  double InverseDof(size_t band, size_t frame) const;

  // Maps a raw magnitude-squared coherence to its bias-corrected value and
  // back. Both clamp to [0, 1].
  double Debias(double raw_msc, size_t band, size_t frame) const;
  double Rebias(double msc, size_t band, size_t frame) const;

 private:
  double smoothing_;
  double lag0_power_;                     // (sum w^2)^2
  std::vector<std::vector<double>> lag_;  // [band][lag] sum |U_lag(i-j)|^2
  std::vector<double> band_bins_;
};

BandMatrix EstimateIcld(const Spectrogram& left, const Spectrogram& right,
                        const ErbPartition& part,
                        const CueConfig& config = {});

BandMatrix EstimateIcc(const Spectrogram& left, const Spectrogram& right,
                       const ErbPartition& part,
                       const CueConfig& config = {});

// Power-preserving mono downmix (L + R) / 2, with the per-band correction
// gain capped at config.downmix_cap_db.
Spectrogram Downmix(const Spectrogram& left, const Spectrogram& right,
                    const ErbPartition& part, const CueConfig& config = {});

struct CueFrame {
  std::vector<double> icld_db;
  std::vector<double> icc;
  std::vector<double> band_energy;  // P_L + P_R

  bool operator==(const CueFrame&) const = default;
};

struct CueStream {
  std::vector<CueFrame> frames;
  ErbPartition partition;
  FrameSpec frame_spec;

  size_t num_bands() const { return partition.num_bands(); }
  bool operator==(const CueStream&) const = default;
};

CueStream EstimateCues(const Spectrogram& left, const Spectrogram& right,
                       const ErbPartition& part, const CueConfig& config = {});

// Convenience: analyze a stereo buffer and estimate its cues.
CueStream EstimateCues(const AudioBuffer& stereo, const FrameSpec& spec,
                       const ErbPartition& part, const CueConfig& config = {});

}  // namespace cuedist

#endif  // CUEDIST_CUES_H_
