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

#include "cuedist/audio.h"

#include "cuedist/error.h"

namespace cuedist {

double TotalEnergy(const AudioBuffer& audio) {
  double e = 0.0;
  for (const auto& ch : audio.channels) {
    for (double s : ch) e += s * s;
  }
  return e;
}

void ApplyGain(AudioBuffer& audio, double gain) {
  for (auto& ch : audio.channels) {
    for (double& s : ch) s *= gain;
  }
}

AudioBuffer MakeStereo(int sample_rate, std::vector<double> left,
                       std::vector<double> right) {
  Require(left.size() == right.size(), "stereo channels differ in length");
  AudioBuffer out;
  out.sample_rate = sample_rate;
  out.channels.push_back(std::move(left));
  out.channels.push_back(std::move(right));
  return out;
}

}  // namespace cuedist
