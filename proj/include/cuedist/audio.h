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

#ifndef CUEDIST_AUDIO_H_
#define CUEDIST_AUDIO_H_

#include <cstddef>
#include <span>
#include <vector>

namespace cuedist {

// Planar multichannel PCM in 64-bit floating point, nominal full scale 1.0.
struct AudioBuffer {
  int sample_rate = 48000;
  std::vector<std::vector<double>> channels;

  AudioBuffer() = default;
  AudioBuffer(int rate, size_t num_channels, size_t num_samples)
      : sample_rate(rate),
        channels(num_channels, std::vector<double>(num_samples, 0.0)) {}

  size_t num_channels() const { return channels.size(); }
  size_t num_samples() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  bool empty() const { return num_samples() == 0; }

  std::span<double> channel(size_t c) { return channels[c]; }
  std::span<const double> channel(size_t c) const { return channels[c]; }
};

// Sum of squared samples over all channels.
double TotalEnergy(const AudioBuffer& audio);

// Multiplies every sample by `gain`.
void ApplyGain(AudioBuffer& audio, double gain);

// Builds a stereo buffer from two equally long channels.
AudioBuffer MakeStereo(int sample_rate, std::vector<double> left,
                       std::vector<double> right);

}  // namespace cuedist

#endif  // CUEDIST_AUDIO_H_
