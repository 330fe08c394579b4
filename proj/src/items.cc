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

#include "cuedist/items.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cuedist/error.h"
#include "real_fft.h"

namespace cuedist {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

size_t NumSamples(const ItemOptions& o) {
  Require(o.sample_rate > 0 && o.seconds > 0.0, "invalid item options");
  return static_cast<size_t>(std::lround(o.seconds * o.sample_rate));
}

void NormalizePeak(std::vector<double>& x, double peak) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m > 0.0) {
    for (double& v : x) v *= peak / m;
  }
}

void NormalizePeak(AudioBuffer& a, double peak) {
  double m = 0.0;
  for (const auto& ch : a.channels) {
    for (double v : ch) m = std::max(m, std::abs(v));
  }
  if (m > 0.0) ApplyGain(a, peak / m);
}

// Raised-cosine attack/release envelope for a note of `length` samples.
double NoteEnvelope(size_t n, size_t length, size_t attack, size_t release) {
  if (n < attack) {
    return 0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(n) /
                                static_cast<double>(attack));
  }
  if (n + release > length) {
    const double r = static_cast<double>(length - n) / static_cast<double>(release);
    return 0.5 - 0.5 * std::cos(std::numbers::pi * r);
  }
  return 1.0;
}

std::vector<double> Convolve(const std::vector<double>& x,
                             const std::vector<double>& h) {
  size_t n_fft = 1;
  while (n_fft < x.size() + h.size()) n_fft <<= 1;
  RealFft fft(n_fft);
  std::vector<std::complex<double>> xs(n_fft / 2 + 1), hs(n_fft / 2 + 1);
  fft.Forward(x, xs);
  fft.Forward(h, hs);
  for (size_t k = 0; k < xs.size(); ++k) xs[k] *= hs[k];
  std::vector<double> y(x.size());
  fft.Inverse(xs, y);
  return y;
}

std::vector<double> RoomTail(int sample_rate, double rt60, std::mt19937_64& rng) {
  const double fs = static_cast<double>(sample_rate);
  const size_t length = static_cast<size_t>(std::min(rt60, 1.5) * fs);
  const size_t gap = static_cast<size_t>(0.008 * fs);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> h(length, 0.0);
  double lp = 0.0;
  double energy = 0.0;
  for (size_t n = gap; n < length; ++n) {
    const double t = static_cast<double>(n) / fs;
    // Darker tail: one-pole low-pass on the noise.
    lp = 0.6 * lp + 0.4 * noise(rng);
    h[n] = lp * std::exp(-6.91 * t / rt60);
    energy += h[n] * h[n];
  }
  for (double& v : h) v /= std::sqrt(energy);
  return h;
}

}  // namespace

const std::vector<ItemInfo>& BundledItems() {
  static const std::vector<ItemInfo> items = {
      {"S1", "Reverberant solo violin", "solo"},
      {"S2", "Reverberant solo castanets", "solo"},
      {"M1", "Violin (left) and piano (right) mix", "mix"},
      {"M2", "Violin (left) and castanets (right) mix", "mix"},
  };
  return items;
}

std::vector<double> ViolinPhrase(const ItemOptions& o) {
  const size_t total = NumSamples(o);
  const double fs = static_cast<double>(o.sample_rate);
  static constexpr double kNotes[] = {440.0, 493.9, 523.3, 587.3,
                                      659.3, 587.3, 523.3, 493.9};
  const size_t note_len = static_cast<size_t>(0.375 * fs);
  std::mt19937_64 rng(o.seed * 7919 + 11);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out(total, 0.0);
  std::vector<double> phase(40, 0.0);
  for (size_t n = 0; n < total; ++n) {
    const size_t note = (n / note_len) % std::size(kNotes);
    const size_t pos = n % note_len;
    const double t = static_cast<double>(n) / fs;
    const double f0 =
        kNotes[note] * (1.0 + 0.006 * std::sin(kTwoPi * 5.5 * t));
    double v = 0.0;
    for (size_t h = 1; h <= phase.size(); ++h) {
      const double f = f0 * static_cast<double>(h);
      if (f >= 0.45 * fs) break;
      phase[h - 1] += kTwoPi * f / fs;
      const double body =
          1.0 + 1.5 * std::exp(-std::pow((f - 3000.0) / 900.0, 2.0));
      v += body / static_cast<double>(h) * std::sin(phase[h - 1]);
    }
    const double env = NoteEnvelope(pos, note_len, static_cast<size_t>(0.04 * fs),
                                    static_cast<size_t>(0.05 * fs));
    out[n] = env * (v + 0.02 * noise(rng));
  }
  NormalizePeak(out, 0.5);
  return out;
}

std::vector<double> CastanetPattern(const ItemOptions& o) {
  const size_t total = NumSamples(o);
  const double fs = static_cast<double>(o.sample_rate);
  std::mt19937_64 rng(o.seed * 104729 + 3);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> out(total, 0.0);
  // Bars of 0.72 s: a three-click roll followed by two single clicks.
  static constexpr double kPattern[] = {0.0, 0.06, 0.12, 0.36, 0.54};
  for (double bar = 0.0; bar < o.seconds; bar += 0.72) {
    for (double offset : kPattern) {
      const auto start = static_cast<size_t>((bar + offset + 0.02) * fs);
      if (start >= total) break;
      const double gain = 0.6 + 0.4 * uni(rng);
      for (int mode = 0; mode < 3; ++mode) {
        const double f = 1500.0 + 3500.0 * uni(rng);
        const double tau = 0.003 + 0.005 * uni(rng);
        const double ph = kTwoPi * uni(rng);
        for (size_t n = 0; n < static_cast<size_t>(0.06 * fs) && start + n < total; ++n) {
          const double t = static_cast<double>(n) / fs;
          out[start + n] += gain * std::exp(-t / tau) * std::sin(kTwoPi * f * t + ph);
        }
      }
      for (size_t n = 0; n < static_cast<size_t>(0.002 * fs) && start + n < total; ++n) {
        out[start + n] += 0.5 * gain * noise(rng);
      }
    }
  }
  NormalizePeak(out, 0.5);
  return out;
}

std::vector<double> PianoPhrase(const ItemOptions& o) {
  const size_t total = NumSamples(o);
  const double fs = static_cast<double>(o.sample_rate);
  static constexpr double kChords[][3] = {{130.8, 164.8, 196.0},
                                          {174.6, 220.0, 261.6},
                                          {196.0, 246.9, 293.7},
                                          {130.8, 164.8, 196.0}};
  const size_t chord_len = static_cast<size_t>(0.75 * fs);
  std::vector<double> out(total, 0.0);
  for (size_t c = 0; c * chord_len < total; ++c) {
    const auto& chord = kChords[c % std::size(kChords)];
    const size_t start = c * chord_len;
    for (double f0 : chord) {
      for (int h = 1; h <= 12; ++h) {
        const double hd = static_cast<double>(h);
        const double f = hd * f0 * std::sqrt(1.0 + 0.0004 * hd * hd);
        if (f >= 0.45 * fs) break;
        const double amp = 1.0 / std::pow(hd, 1.2);
        const double tau = 1.5 / std::sqrt(hd);
        for (size_t n = 0; start + n < total && n < 2 * chord_len; ++n) {
          const double t = static_cast<double>(n) / fs;
          const double attack = std::min(1.0, t / 0.005);
          out[start + n] += amp * attack * std::exp(-t / tau) * std::sin(kTwoPi * f * t);
        }
      }
    }
  }
  NormalizePeak(out, 0.5);
  return out;
}

AudioBuffer Reverberate(const std::vector<double>& source, int sample_rate,
                        const RoomOptions& room, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto h_left = RoomTail(sample_rate, room.rt60_s, rng);
  const auto h_right = RoomTail(sample_rate, room.rt60_s, rng);
  auto wet_left = Convolve(source, h_left);
  auto wet_right = Convolve(source, h_right);
  for (size_t n = 0; n < source.size(); ++n) {
    wet_left[n] = room.pan_left * source[n] + room.wet_gain * wet_left[n];
    wet_right[n] = room.pan_right * source[n] + room.wet_gain * wet_right[n];
  }
  return MakeStereo(sample_rate, std::move(wet_left), std::move(wet_right));
}

AudioBuffer MakeItem(std::string_view id, const ItemOptions& o) {
  auto mix = [](AudioBuffer a, const AudioBuffer& b) {
    for (size_t c = 0; c < 2; ++c) {
      for (size_t n = 0; n < a.num_samples(); ++n) a.channels[c][n] += b.channels[c][n];
    }
    return a;
  };
  const uint64_t s = o.seed * 1000;
  AudioBuffer out;
  if (id == "S1") {
    out = Reverberate(ViolinPhrase(o), o.sample_rate, {1.6, 0.8, 1.0, 1.0}, s + 1);
  } else if (id == "S2") {
    out = Reverberate(CastanetPattern(o), o.sample_rate, {1.4, 0.8, 1.0, 1.0}, s + 2);
  } else if (id == "M1") {
    out = mix(Reverberate(ViolinPhrase(o), o.sample_rate, {1.4, 0.5, 0.95, 0.25}, s + 3),
              Reverberate(PianoPhrase(o), o.sample_rate, {1.4, 0.5, 0.25, 0.95}, s + 4));
  } else if (id == "M2") {
    out = mix(Reverberate(ViolinPhrase(o), o.sample_rate, {1.4, 0.5, 0.95, 0.25}, s + 5),
              Reverberate(CastanetPattern(o), o.sample_rate, {1.4, 0.5, 0.25, 0.95}, s + 6));
  } else {
    Fail(ErrorKind::kInvalidArgument, "unknown item id '" + std::string(id) + "'");
  }
  // Short fades so the excerpt does not start or stop with a click.
  const size_t fade = std::min(out.num_samples() / 4,
                               static_cast<size_t>(0.05 * o.sample_rate));
  for (auto& ch : out.channels) {
    for (size_t n = 0; n < fade; ++n) {
      const double g = std::sin(0.25 * kTwoPi * (static_cast<double>(n) + 0.5) /
                                static_cast<double>(fade));
      ch[n] *= g * g;
      ch[ch.size() - 1 - n] *= g * g;
    }
  }
  NormalizePeak(out, 0.7);
  return out;
}

const std::vector<TestSignal>& AllTestSignals() {
  static const std::vector<TestSignal> all = {
      TestSignal::kNoise, TestSignal::kSinusoid, TestSignal::kViolin,
      TestSignal::kCastanets, TestSignal::kAntiPhase};
  return all;
}

std::string_view TestSignalName(TestSignal signal) {
  switch (signal) {
    case TestSignal::kNoise: return "noise";
    case TestSignal::kSinusoid: return "sinusoid";
    case TestSignal::kViolin: return "violin";
    case TestSignal::kCastanets: return "castanets";
    case TestSignal::kAntiPhase: return "anti-phase";
  }
  return "?";
}

AudioBuffer MakeTestSignal(TestSignal signal, const ItemOptions& o) {
  const size_t n = NumSamples(o);
  std::mt19937_64 rng(o.seed * 31 + static_cast<uint64_t>(signal));
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> left(n), right(n);
  switch (signal) {
    case TestSignal::kNoise:
      for (size_t i = 0; i < n; ++i) {
        left[i] = noise(rng);
        right[i] = noise(rng);
      }
      break;
    case TestSignal::kSinusoid:
      for (size_t i = 0; i < n; ++i) {
        left[i] = right[i] =
            0.5 * std::sin(kTwoPi * 1000.0 * static_cast<double>(i) / o.sample_rate);
      }
      break;
    case TestSignal::kViolin:
      return MakeItem("S1", o);
    case TestSignal::kCastanets:
      return MakeItem("S2", o);
    case TestSignal::kAntiPhase:
      for (size_t i = 0; i < n; ++i) {
        left[i] = noise(rng);
        right[i] = -left[i];
      }
      break;
  }
  return MakeStereo(o.sample_rate, std::move(left), std::move(right));
}

}  // namespace cuedist
