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

#include "cuedist/timefreq.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "cuedist/error.h"
#include "real_fft.h"

namespace cuedist {

namespace {

// FFTW's planner is not thread safe; execution with the plan's own buffers is.
std::mutex& PlannerMutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace

RealFft::RealFft(size_t length) : length_(length) {
  time_ = static_cast<double*>(fftw_malloc(sizeof(double) * length));
  freq_ = fftw_alloc_complex(length / 2 + 1);
  std::lock_guard<std::mutex> lock(PlannerMutex());
  forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(length), time_, freq_,
                                  FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_1d(static_cast<int>(length), freq_, time_,
                                  FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }
  fftw_free(time_);
  fftw_free(freq_);
}

void RealFft::Forward(std::span<const double> input,
                      std::span<std::complex<double>> output) {
  std::fill(time_, time_ + length_, 0.0);
  std::copy(input.begin(), input.end(), time_);
  fftw_execute(forward_);
  for (size_t k = 0; k < output.size(); ++k) {
    output[k] = {freq_[k][0], freq_[k][1]};
  }
}

void RealFft::Inverse(std::span<const std::complex<double>> input,
                      std::span<double> output) {
  for (size_t k = 0; k < length_ / 2 + 1; ++k) {
    freq_[k][0] = input[k].real();
    freq_[k][1] = input[k].imag();
  }
  // c2r ignores the imaginary parts of DC and Nyquist, matching the
  // real-signal convention.
  fftw_execute(inverse_);
  const double scale = 1.0 / static_cast<double>(length_);
  for (size_t n = 0; n < output.size(); ++n) output[n] = time_[n] * scale;
}

size_t FrameSpec::NumFrames(size_t signal_length) const {
  return (signal_length + frame_length + hop - 1) / hop;
}

std::vector<double> MakeWindow(WindowType type, size_t frame_length) {
  std::vector<double> w(frame_length);
  const double n_len = static_cast<double>(frame_length);
  for (size_t n = 0; n < frame_length; ++n) {
    const double x = (static_cast<double>(n) + 0.5) / n_len;
    switch (type) {
      case WindowType::kSine:
        w[n] = std::sin(std::numbers::pi * x);
        break;
      case WindowType::kHann:
        w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * x);
        break;
    }
  }
  return w;
}

double ColaDeviation(const FrameSpec& spec) {
  const auto w = MakeWindow(spec.window, spec.frame_length);
  std::vector<double> sum(spec.hop, 0.0);
  for (size_t n = 0; n < spec.frame_length; ++n) {
    sum[n % spec.hop] += w[n] * w[n];
  }
  double mean = 0.0;
  for (double s : sum) mean += s;
  mean /= static_cast<double>(sum.size());
  double worst = 0.0;
  for (double s : sum) worst = std::max(worst, std::abs(s - mean) / mean);
  return worst;
}

void ValidateFrameSpec(const FrameSpec& spec) {
  Require(spec.frame_length >= 2, "frame_length must be at least 2");
  Require(spec.hop >= 1 && spec.hop <= spec.frame_length,
          "hop must lie in [1, frame_length]");
  Require(spec.fft_length >= spec.frame_length,
          "fft_length must be >= frame_length");
  Require(spec.sample_rate > 0, "sample_rate must be positive");
  Require(ColaDeviation(spec) <= 1e-6,
          "window/hop pair violates constant overlap-add");
}

Spectrogram::Spectrogram(const FrameSpec& spec, size_t num_frames,
                         size_t signal_length)
    : spec_(spec),
      num_frames_(num_frames),
      num_bins_(spec.num_bins()),
      signal_length_(signal_length),
      data_(num_frames * spec.num_bins()) {}

Spectrogram AnalyzeChannel(std::span<const double> samples,
                           const FrameSpec& spec) {
  Require(!samples.empty(), "cannot analyze an empty signal");
  ValidateFrameSpec(spec);
  const size_t len = samples.size();
  const size_t frames = spec.NumFrames(len);
  const auto window = MakeWindow(spec.window, spec.frame_length);
  const auto half = static_cast<std::ptrdiff_t>(spec.frame_length / 2);

  Spectrogram out(spec, frames, len);
  RealFft fft(spec.fft_length);
  std::vector<double> buffer(spec.frame_length);
  for (size_t f = 0; f < frames; ++f) {
    const auto start = static_cast<std::ptrdiff_t>(f * spec.hop) - half;
    for (size_t n = 0; n < spec.frame_length; ++n) {
      const auto t = start + static_cast<std::ptrdiff_t>(n);
      const double x = (t >= 0 && t < static_cast<std::ptrdiff_t>(len))
                           ? samples[static_cast<size_t>(t)]
                           : 0.0;
      buffer[n] = x * window[n];
    }
    fft.Forward(buffer, out.frame(f));
  }
  return out;
}

std::vector<Spectrogram> Analyze(const AudioBuffer& audio,
                                 const FrameSpec& spec) {
  Require(!audio.empty(), "cannot analyze an empty signal");
  Require(audio.sample_rate == spec.sample_rate,
          "sample rate " + std::to_string(audio.sample_rate) +
              " does not match frame spec rate " +
              std::to_string(spec.sample_rate));
  std::vector<Spectrogram> out;
  out.reserve(audio.num_channels());
  for (size_t c = 0; c < audio.num_channels(); ++c) {
    out.push_back(AnalyzeChannel(audio.channel(c), spec));
  }
  return out;
}

std::vector<double> SynthesizeChannel(const Spectrogram& spectrogram) {
  const FrameSpec& spec = spectrogram.spec();
  const size_t len = spectrogram.signal_length();
  if (spectrogram.num_bins() != spec.num_bins() ||
      spectrogram.num_frames() != spec.NumFrames(len)) {
    Fail(ErrorKind::kData, "spectrogram dimensions do not match frame spec");
  }
  const auto window = MakeWindow(spec.window, spec.frame_length);
  const auto half = static_cast<std::ptrdiff_t>(spec.frame_length / 2);

  std::vector<double> acc(len, 0.0);
  std::vector<double> norm(len, 0.0);
  std::vector<double> frame(spec.fft_length);
  RealFft fft(spec.fft_length);
  for (size_t f = 0; f < spectrogram.num_frames(); ++f) {
    fft.Inverse(spectrogram.frame(f), frame);
    const auto start = static_cast<std::ptrdiff_t>(f * spec.hop) - half;
    for (size_t n = 0; n < spec.frame_length; ++n) {
      const auto t = start + static_cast<std::ptrdiff_t>(n);
      if (t < 0 || t >= static_cast<std::ptrdiff_t>(len)) continue;
      acc[static_cast<size_t>(t)] += frame[n] * window[n];
      norm[static_cast<size_t>(t)] += window[n] * window[n];
    }
  }
  for (size_t t = 0; t < len; ++t) {
    acc[t] = norm[t] > 1e-12 ? acc[t] / norm[t] : 0.0;
  }
  return acc;
}

AudioBuffer Synthesize(std::span<const Spectrogram> channels) {
  Require(!channels.empty(), "nothing to synthesize");
  AudioBuffer out;
  out.sample_rate = channels.front().spec().sample_rate;
  for (const auto& s : channels) {
    if (!(s.spec() == channels.front().spec()) ||
        s.signal_length() != channels.front().signal_length()) {
      Fail(ErrorKind::kData, "channel spectrograms are inconsistent");
    }
    out.channels.push_back(SynthesizeChannel(s));
  }
  return out;
}

double ErbNumber(double hz) { return 21.4 * std::log10(1.0 + 0.00437 * hz); }

double ErbNumberToHz(double erb) {
  return (std::pow(10.0, erb / 21.4) - 1.0) / 0.00437;
}

ErbPartition PartitionFromEdges(std::vector<size_t> band_edges,
                                int sample_rate, size_t fft_length) {
  Require(band_edges.size() >= 2, "partition needs at least one band");
  Require(band_edges.front() == 0, "first band edge must be bin 0");
  Require(band_edges.back() == fft_length / 2,
          "last band edge must be the Nyquist bin");
  for (size_t i = 1; i < band_edges.size(); ++i) {
    Require(band_edges[i] > band_edges[i - 1],
            "band edges must be strictly increasing");
  }
  ErbPartition part;
  part.band_edges = std::move(band_edges);
  const double bin_hz =
      static_cast<double>(sample_rate) / static_cast<double>(fft_length);
  for (size_t b = 0; b + 1 < part.band_edges.size(); ++b) {
    const double lo = static_cast<double>(part.band_edges[b]) * bin_hz;
    const double hi = static_cast<double>(part.band_edges[b + 1]) * bin_hz;
    part.center_freqs.push_back(
        ErbNumberToHz(0.5 * (ErbNumber(lo) + ErbNumber(hi))));
  }
  return part;
}

ErbPartition MakeErbPartition(int sample_rate, size_t fft_length,
                              double bands_per_erb) {
  Require(sample_rate > 0, "sample_rate must be positive");
  Require(bands_per_erb > 0.0, "bands_per_erb must be positive");
  const size_t nyquist_bin = fft_length / 2;
  if (nyquist_bin < 1) {
    Fail(ErrorKind::kInvalidArgument,
         "fft_length " + std::to_string(fft_length) + " yields no bands");
  }
  const double nyquist_hz = 0.5 * static_cast<double>(sample_rate);
  const double erb_max = ErbNumber(nyquist_hz);
  const auto steps = std::max<size_t>(
      1, static_cast<size_t>(std::lround(erb_max * bands_per_erb)));
  const double bin_hz =
      static_cast<double>(sample_rate) / static_cast<double>(fft_length);

  std::vector<size_t> edges{0};
  for (size_t i = 1; i < steps; ++i) {
    const double hz = ErbNumberToHz(erb_max * static_cast<double>(i) /
                                    static_cast<double>(steps));
    const auto bin = static_cast<size_t>(std::lround(hz / bin_hz));
    // Several ERB steps can round to the same bin at low frequencies.
    if (bin > edges.back() && bin < nyquist_bin) edges.push_back(bin);
  }
  edges.push_back(nyquist_bin);
  return PartitionFromEdges(std::move(edges), sample_rate, fft_length);
}

}  // namespace cuedist
