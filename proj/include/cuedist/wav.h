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

// RIFF/WAVE reading (16/24-bit PCM, 32-bit float) and writing (32-bit float).

#ifndef CUEDIST_WAV_H_
#define CUEDIST_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cuedist/audio.h"

namespace cuedist {

AudioBuffer DecodeWav(std::span<const uint8_t> bytes);
std::vector<uint8_t> EncodeWavFloat32(const AudioBuffer& audio);

AudioBuffer ReadWav(const std::filesystem::path& path);
// Atomic write of a 32-bit float WAV file.
void WriteWav(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace cuedist

#endif  // CUEDIST_WAV_H_
