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

// Short-time Fourier analysis/synthesis and ERB band partitioning.
//
// Frames are taken every `hop` samples from the signal zero-padded by half a
// frame at both ends, so frame i is centred on sample i * hop. The same window
// is used for analysis and synthesis; synthesis divides by the accumulated
// squared-window sum so the round trip is exact wherever that sum is nonzero.

#ifndef CUEDIST_TIMEFREQ_H_
#define CUEDIST_TIMEFREQ_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cuedist/audio.h"

namespace cuedist {

enum class WindowType { kSine, kHann };

struct FrameSpec {
  size_t frame_length = 4096;
  size_t hop = 2048;
  WindowType window = WindowType::kSine;
  size_t fft_length = 4096;
  int sample_rate = 48000;

  size_t num_bins() const { return fft_length / 2 + 1; }
  size_t NumFrames(size_t signal_length) const;

  bool operator==(const FrameSpec&) const = default;
};

// Window samples, length `frame_length`.
std::vector<double> MakeWindow(WindowType type, size_t frame_length);

// Largest relative deviation of the overlapped squared-window sum from its
// mean. Zero for a perfect analysis/synthesis pair.
double ColaDeviation(const FrameSpec& spec);

// Throws Error(kInvalidArgument) if the spec violates its invariants
// (hop <= frame_length <= fft_length, COLA within 1e-6).
void ValidateFrameSpec(const FrameSpec& spec);

// Complex spectra of one channel, frames x bins, row-major.
class Spectrogram {
 public:
  Spectrogram() = default;
  Spectrogram(const FrameSpec& spec, size_t num_frames, size_t signal_length);

  const FrameSpec& spec() const { return spec_; }
  size_t num_frames() const { return num_frames_; }
  size_t num_bins() const { return num_bins_; }
  size_t signal_length() const { return signal_length_; }

  std::span<std::complex<double>> frame(size_t f) {
    return {data_.data() + f * num_bins_, num_bins_};
  }
  std::span<const std::complex<double>> frame(size_t f) const {
    return {data_.data() + f * num_bins_, num_bins_};
  }
  std::complex<double>& at(size_t f, size_t k) {
    return data_[f * num_bins_ + k];
  }
  const std::complex<double>& at(size_t f, size_t k) const {
    return data_[f * num_bins_ + k];
  }

  bool SameShape(const Spectrogram& other) const {
    return num_frames_ == other.num_frames_ && num_bins_ == other.num_bins_;
  }

 private:
  FrameSpec spec_;
  size_t num_frames_ = 0;
  size_t num_bins_ = 0;
  size_t signal_length_ = 0;
  std::vector<std::complex<double>> data_;
};

// One spectrogram per channel of `audio`.
std::vector<Spectrogram> Analyze(const AudioBuffer& audio,
                                 const FrameSpec& spec);
Spectrogram AnalyzeChannel(std::span<const double> samples,
                           const FrameSpec& spec);

// Overlap-add resynthesis of one channel. The result has
// `spectrogram.signal_length()` samples.
std::vector<double> SynthesizeChannel(const Spectrogram& spectrogram);
AudioBuffer Synthesize(std::span<const Spectrogram> channels);

// Glasberg-Moore ERB-number scale and its inverse.
double ErbNumber(double hz);
double ErbNumberToHz(double erb);

struct ErbPartition {
  // num_bands + 1 bin indices; band b covers [edges[b], edges[b+1]) except the
  // last band, which also includes the Nyquist bin edges.back().
  std::vector<size_t> band_edges;
  std::vector<double> center_freqs;

  size_t num_bands() const { return center_freqs.size(); }
  size_t band_begin(size_t b) const { return band_edges[b]; }
  size_t band_end(size_t b) const {
    return b + 1 == num_bands() ? band_edges[b + 1] + 1 : band_edges[b + 1];
  }
  size_t band_size(size_t b) const { return band_end(b) - band_begin(b); }

  bool operator==(const ErbPartition&) const = default;
};

ErbPartition MakeErbPartition(int sample_rate, size_t fft_length,
                              double bands_per_erb = 1.0);

// Rebuilds centre frequencies for explicit band edges (e.g. read from a file).
ErbPartition PartitionFromEdges(std::vector<size_t> band_edges,
                                int sample_rate, size_t fft_length);

}  // namespace cuedist

#endif  // CUEDIST_TIMEFREQ_H_
