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

#include "cuedist/wav.h"

#include <limits>
#include <string>

#include "byte_io.h"
#include "cuedist/error.h"
#include "cuedist/fileio.h"

namespace cuedist {

namespace {

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

}  // namespace

AudioBuffer DecodeWav(std::span<const uint8_t> data) {
  bytes::Reader r(data);
  if (r.Tag() != "RIFF") Fail(ErrorKind::kData, "not a RIFF file");
  r.U32();
  if (r.Tag() != "WAVE") Fail(ErrorKind::kData, "not a WAVE file");

  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t rate = 0;
  bool have_fmt = false;
  while (r.remaining() >= 8) {
    const std::string id = r.Tag();
    const uint32_t size = r.U32();
    if (id == "fmt ") {
      if (size < 16) Fail(ErrorKind::kData, "short fmt chunk");
      bytes::Reader fmt(r.Raw(size));
      format = fmt.U16();
      channels = fmt.U16();
      rate = fmt.U32();
      fmt.U32();  // byte rate
      fmt.U16();  // block align
      bits = fmt.U16();
      if (format == kFormatExtensible && size >= 40) {
        fmt.U16();  // cbSize
        fmt.U16();  // valid bits
        fmt.U32();  // channel mask
        format = fmt.U16();  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) Fail(ErrorKind::kData, "data chunk before fmt chunk");
      if (channels == 0) Fail(ErrorKind::kData, "zero channels");
      if (rate != 44100 && rate != 48000) {
        Fail(ErrorKind::kData,
             "unsupported sample rate " + std::to_string(rate));
      }
      const bool is_float = format == kFormatFloat && bits == 32;
      const bool is_pcm = format == kFormatPcm && (bits == 16 || bits == 24);
      if (!is_float && !is_pcm) {
        Fail(ErrorKind::kData, "unsupported sample format (format " +
                                   std::to_string(format) + ", " +
                                   std::to_string(bits) + " bits)");
      }
      const size_t width = bits / 8;
      const size_t available = std::min<size_t>(size, r.remaining());
      const size_t frames = available / (width * channels);
      AudioBuffer out(static_cast<int>(rate), channels, frames);
      bytes::Reader pcm(r.Raw(frames * width * channels));
      for (size_t i = 0; i < frames; ++i) {
        for (size_t c = 0; c < channels; ++c) {
          double v = 0.0;
          if (is_float) {
            v = pcm.F32();
          } else if (bits == 16) {
            v = static_cast<int16_t>(pcm.U16()) / 32768.0;
          } else {
            uint32_t u = pcm.U8() | (pcm.U8() << 8) | (pcm.U8() << 16);
            if (u & 0x800000u) u |= 0xFF000000u;
            v = static_cast<int32_t>(u) / 8388608.0;
          }
          out.channels[c][i] = v;
        }
      }
      return out;
    } else {
      r.Skip(std::min<size_t>(size + (size & 1u), r.remaining()));
    }
  }
  Fail(ErrorKind::kData, "no data chunk");
}

std::vector<uint8_t> EncodeWavFloat32(const AudioBuffer& audio) {
  Require(audio.num_channels() > 0, "cannot write a buffer without channels");
  const size_t channels = audio.num_channels();
  const size_t frames = audio.num_samples();
  const size_t data_size = frames * channels * 4;
  Require(data_size + 36 <= std::numeric_limits<uint32_t>::max(),
          "audio too long for WAV");
  bytes::Writer w;
  w.Tag("RIFF");
  w.U32(static_cast<uint32_t>(36 + data_size));
  w.Tag("WAVE");
  w.Tag("fmt ");
  w.U32(16);
  w.U16(kFormatFloat);
  w.U16(static_cast<uint16_t>(channels));
  w.U32(static_cast<uint32_t>(audio.sample_rate));
  w.U32(static_cast<uint32_t>(audio.sample_rate * channels * 4));
  w.U16(static_cast<uint16_t>(channels * 4));
  w.U16(32);
  w.Tag("data");
  w.U32(static_cast<uint32_t>(data_size));
  for (size_t i = 0; i < frames; ++i) {
    for (size_t c = 0; c < channels; ++c) {
      w.F32(static_cast<float>(audio.channels[c][i]));
    }
  }
  return std::move(w.data());
}

AudioBuffer ReadWav(const std::filesystem::path& path) {
  const auto data = ReadFileBytes(path);
  try {
    return DecodeWav(data);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kData) throw;
    Fail(ErrorKind::kData, path.string() + ": " + e.what());
  }
}

void WriteWav(const std::filesystem::path& path, const AudioBuffer& audio) {
  WriteFileAtomic(path, EncodeWavFloat32(audio));
}

}  // namespace cuedist
