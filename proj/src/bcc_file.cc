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

#include "cuedist/bcc_file.h"

#include <algorithm>
#include <limits>

#include "byte_io.h"
#include "cuedist/error.h"
#include "cuedist/fileio.h"

namespace cuedist {

namespace {

constexpr uint32_t kVersion = 1;

uint32_t Checked32(size_t v, const char* what) {
  if (v > std::numeric_limits<uint32_t>::max()) {
    Fail(ErrorKind::kInvalidArgument, std::string(what) + " exceeds 32 bits");
  }
  return static_cast<uint32_t>(v);
}

}  // namespace

std::vector<uint8_t> SerializeBcc(const BccStream& stream) {
  const CodecConfig& cfg = stream.config;
  const ErbPartition& part = stream.cues.partition;
  Require(stream.mono.num_channels() == 1, "stream mono must have 1 channel");

  bytes::Writer w;
  w.Tag("BCC1");
  w.U32(kVersion);
  w.U32(Checked32(static_cast<size_t>(cfg.frame.sample_rate), "sample rate"));
  w.U32(Checked32(cfg.frame.frame_length, "frame length"));
  w.U32(Checked32(cfg.frame.hop, "hop"));
  w.U32(Checked32(cfg.frame.fft_length, "fft length"));
  w.U32(Checked32(part.num_bands(), "band count"));
  for (size_t e : part.band_edges) w.U32(Checked32(e, "band edge"));
  w.U32(cfg.frame.window == WindowType::kSine ? 0 : 1);
  w.U32((stream.flags.apply_icld ? 1u : 0u) | (stream.flags.apply_icc ? 2u : 0u));
  w.U64(cfg.decorrelator_seed);
  w.F64(cfg.cues.icld_max_db);
  w.F64(cfg.cues.silence_floor);
  w.F64(cfg.cues.icc_smoothing);
  w.U32(cfg.cues.icc_debias ? 1 : 0);
  w.F64(cfg.cues.downmix_cap_db);
  w.F64(cfg.bands_per_erb);
  w.F64(cfg.cues.icld_smoothing);
  w.U32(Checked32(static_cast<size_t>(std::max(cfg.refine_iterations, 0)),
                  "refine iterations"));
  w.U64(stream.mono.num_samples());
  for (double s : stream.mono.channel(0)) w.F32(static_cast<float>(s));
  w.U32(Checked32(stream.cues.frames.size(), "frame count"));
  for (const CueFrame& f : stream.cues.frames) {
    Require(f.icld_db.size() == part.num_bands() &&
                f.icc.size() == part.num_bands() &&
                f.band_energy.size() == part.num_bands(),
            "cue frame has wrong band count");
    for (size_t b = 0; b < part.num_bands(); ++b) {
      w.F32(static_cast<float>(f.icld_db[b]));
      w.F32(static_cast<float>(f.icc[b]));
      w.F32(static_cast<float>(f.band_energy[b]));
    }
  }
  return std::move(w.data());
}

BccStream DeserializeBcc(std::span<const uint8_t> data) {
  bytes::Reader r(data);
  if (r.Tag() != "BCC1") Fail(ErrorKind::kData, "not a BCC1 stream");
  const uint32_t version = r.U32();
  if (version != kVersion) {
    Fail(ErrorKind::kData, "unsupported BCC version " + std::to_string(version));
  }
  BccStream stream;
  CodecConfig& cfg = stream.config;
  cfg.frame.sample_rate = static_cast<int>(r.U32());
  cfg.frame.frame_length = r.U32();
  cfg.frame.hop = r.U32();
  cfg.frame.fft_length = r.U32();
  const uint32_t num_bands = r.U32();
  if (num_bands == 0 || num_bands > cfg.frame.fft_length / 2 + 1) {
    Fail(ErrorKind::kData, "implausible band count");
  }
  std::vector<size_t> edges(num_bands + 1);
  for (auto& e : edges) e = r.U32();
  const uint32_t window = r.U32();
  if (window > 1) Fail(ErrorKind::kData, "unknown window id");
  cfg.frame.window = window == 0 ? WindowType::kSine : WindowType::kHann;
  const uint32_t flags = r.U32();
  stream.flags.apply_icld = (flags & 1u) != 0;
  stream.flags.apply_icc = (flags & 2u) != 0;
  cfg.decorrelator_seed = r.U64();
  cfg.cues.icld_max_db = r.F64();
  cfg.cues.silence_floor = r.F64();
  cfg.cues.icc_smoothing = r.F64();
  cfg.cues.icc_debias = r.U32() != 0;
  cfg.cues.downmix_cap_db = r.F64();
  cfg.bands_per_erb = r.F64();
  cfg.cues.icld_smoothing = r.F64();
  const uint32_t refine = r.U32();
  if (refine > 64) Fail(ErrorKind::kData, "implausible refine iteration count");
  cfg.refine_iterations = static_cast<int>(refine);

  try {
    ValidateFrameSpec(cfg.frame);
    stream.cues.partition = PartitionFromEdges(
        std::move(edges), cfg.frame.sample_rate, cfg.frame.fft_length);
  } catch (const Error& e) {
    Fail(ErrorKind::kData, std::string("corrupt BCC header: ") + e.what());
  }
  stream.cues.frame_spec = cfg.frame;

  const uint64_t num_samples = r.U64();
  if (num_samples == 0 || num_samples > r.remaining() / 4) {
    Fail(ErrorKind::kData, "implausible sample count");
  }
  stream.mono.sample_rate = cfg.frame.sample_rate;
  stream.mono.channels.assign(1, std::vector<double>(num_samples));
  for (auto& s : stream.mono.channels[0]) s = r.F32();

  const uint32_t num_frames = r.U32();
  if (num_frames != cfg.frame.NumFrames(num_samples)) {
    Fail(ErrorKind::kData, "cue frame count does not match mono length");
  }
  if (static_cast<uint64_t>(num_frames) * num_bands * 12 != r.remaining()) {
    Fail(ErrorKind::kData, "cue record size mismatch");
  }
  stream.cues.frames.resize(num_frames);
  for (CueFrame& f : stream.cues.frames) {
    f.icld_db.resize(num_bands);
    f.icc.resize(num_bands);
    f.band_energy.resize(num_bands);
    for (size_t b = 0; b < num_bands; ++b) {
      f.icld_db[b] = r.F32();
      f.icc[b] = r.F32();
      f.band_energy[b] = r.F32();
    }
  }
  return stream;
}

void WriteBccFile(const std::filesystem::path& path, const BccStream& stream) {
  WriteFileAtomic(path, SerializeBcc(stream));
}

BccStream ReadBccFile(const std::filesystem::path& path) {
  return DeserializeBcc(ReadFileBytes(path));
}

}  // namespace cuedist
