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

// BccStream container, little-endian throughout:
//
//   char[4]  magic "BCC1"
//   u32      version (1)
//   u32      sample_rate
//   u32      frame_length
//   u32      hop
//   u32      fft_length
//   u32      num_bands
//   u32[num_bands + 1] band edges (bin indices)
//   u32      window (0 = sine, 1 = hann)
//   u32      synthesis flags (bit 0 apply_icld, bit 1 apply_icc)
//   u64      decorrelator seed
//   f64      icld_max_db
//   f64      silence_floor
//   f64      icc_smoothing
//   u32      icc_debias (0/1)
//   f64      downmix_cap_db
//   f64      bands_per_erb
//   f64      icld_smoothing
//   u32      decoder refine iterations
//   u64      num_samples
//   f32[num_samples] mono PCM
//   u32      num_frames
//   num_frames x num_bands x {f32 icld_db, f32 icc, f32 band_energy}

#ifndef CUEDIST_BCC_FILE_H_
#define CUEDIST_BCC_FILE_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cuedist/codec.h"

namespace cuedist {

std::vector<uint8_t> SerializeBcc(const BccStream& stream);
BccStream DeserializeBcc(std::span<const uint8_t> bytes);

void WriteBccFile(const std::filesystem::path& path, const BccStream& stream);
BccStream ReadBccFile(const std::filesystem::path& path);

}  // namespace cuedist

#endif  // CUEDIST_BCC_FILE_H_
