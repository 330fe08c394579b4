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

// Small helpers shared by the unit tests.

#ifndef CUEDIST_TESTS_TEST_UTIL_H_
#define CUEDIST_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "cuedist/audio.h"
#include "cuedist/cues.h"

namespace cuedist::testing {

inline std::vector<double> WhiteNoise(size_t n, uint64_t seed, double sd = 0.1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sd);
  std::vector<double> x(n);
  for (double& v : x) v = normal(rng);
  return x;
}

inline double EnergyDb(const std::vector<double>& error,
                       const std::vector<double>& signal) {
  double e = 0.0, s = 0.0;
  for (size_t i = 0; i < signal.size(); ++i) {
    e += error[i] * error[i];
    s += signal[i] * signal[i];
  }
  return 10.0 * std::log10(e / s);
}

// Energy of (a - b) relative to a, in dB.
inline double ErrorDb(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return EnergyDb(d, a);
}

// A band counts as energetic when it lies within 40 dB of the loudest band
// of its frame and above the silence floor.
inline bool Energetic(const CueFrame& frame, size_t band, double floor) {
  double peak = 0.0;
  for (double e : frame.band_energy) peak = std::max(peak, e);
  const double e = frame.band_energy[band];
  return e > floor && e >= peak * 1e-4;
}

// A fresh empty directory under the system temp dir.
inline std::filesystem::path TempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("cuedist_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace cuedist::testing

#endif  // CUEDIST_TESTS_TEST_UTIL_H_
