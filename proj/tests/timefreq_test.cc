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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cuedist/error.h"
#include "cuedist/items.h"
#include "test_util.h"

namespace cuedist {
namespace {

using testing::ErrorDb;
using testing::WhiteNoise;

TEST_CASE("default frame spec is COLA") {
  FrameSpec spec;
  CHECK(ColaDeviation(spec) <= 1e-6);
  CHECK_NOTHROW(ValidateFrameSpec(spec));
  FrameSpec hann;
  hann.window = WindowType::kHann;
  hann.hop = 1024;  // Hann^2 needs 75% overlap
  CHECK(ColaDeviation(hann) <= 1e-6);
}

TEST_CASE("invalid frame specs are rejected") {
  FrameSpec spec;
  spec.hop = 1000;
  CHECK_THROWS_AS(ValidateFrameSpec(spec), Error);
  spec = {};
  spec.fft_length = 2048;
  CHECK_THROWS_AS(ValidateFrameSpec(spec), Error);
  spec = {};
  spec.hop = 5000;
  CHECK_THROWS_AS(ValidateFrameSpec(spec), Error);
}

TEST_CASE("frame count is ceil((len + N) / hop)") {
  FrameSpec spec;
  for (size_t len : {1u, 100u, 2048u, 4096u, 48000u, 48001u}) {
    const size_t expected =
        static_cast<size_t>(std::ceil(double(len + spec.frame_length) / spec.hop));
    CHECK(spec.NumFrames(len) == expected);
    CHECK(AnalyzeChannel(WhiteNoise(len, len), spec).num_frames() == expected);
  }
}

TEST_CASE("analysis errors") {
  FrameSpec spec;
  CHECK_THROWS_AS(AnalyzeChannel(std::vector<double>{}, spec), Error);
  AudioBuffer a(44100, 1, 1000);
  CHECK_THROWS_AS(Analyze(a, spec), Error);
}

TEST_CASE("zero input gives a zero spectrogram and zero output") {
  FrameSpec spec;
  const Spectrogram s = AnalyzeChannel(std::vector<double>(10000, 0.0), spec);
  for (size_t f = 0; f < s.num_frames(); ++f) {
    for (auto c : s.frame(f)) CHECK(std::abs(c) == 0.0);
  }
  for (double v : SynthesizeChannel(s)) CHECK(v == 0.0);
}

TEST_CASE("bin-centred sinusoid concentrates in its bin +-1") {
  FrameSpec spec;
  const size_t k0 = 100;
  std::vector<double> x(48000);
  for (size_t n = 0; n < x.size(); ++n) {
    x[n] = std::sin(2.0 * std::numbers::pi * double(k0) * double(n) / spec.fft_length);
  }
  const Spectrogram s = AnalyzeChannel(x, spec);
  // Only frames that lie entirely inside the signal.
  for (size_t f = 1; f * spec.hop + spec.frame_length / 2 <= x.size(); ++f) {
    double total = 0.0, near = 0.0;
    for (size_t k = 0; k < s.num_bins(); ++k) {
      const double p = std::norm(s.at(f, k));
      total += p;
      if (k + 1 >= k0 && k <= k0 + 1) near += p;
    }
    CHECK(near / total > 0.99);
  }
}

TEST_CASE("Parseval: spectral energy equals windowed frame energy") {
  FrameSpec spec;
  const auto x = WhiteNoise(20000, 3);
  const Spectrogram s = AnalyzeChannel(x, spec);
  const auto w = MakeWindow(spec.window, spec.frame_length);
  for (size_t f = 0; f < s.num_frames(); ++f) {
    double time = 0.0;
    const long start = long(f * spec.hop) - long(spec.frame_length / 2);
    for (size_t n = 0; n < spec.frame_length; ++n) {
      const long t = start + long(n);
      const double v = (t >= 0 && t < long(x.size())) ? x[size_t(t)] * w[n] : 0.0;
      time += v * v;
    }
    double freq = 0.0;
    for (size_t k = 0; k < s.num_bins(); ++k) {
      const bool edge = k == 0 || k + 1 == s.num_bins();
      freq += (edge ? 1.0 : 2.0) * std::norm(s.at(f, k));
    }
    freq /= double(spec.fft_length);
    if (time > 0.0) CHECK(std::abs(freq - time) <= 1e-6 * time);
  }
}

TEST_CASE("round trip error is below -50 dB on the test signals") {
  FrameSpec spec;
  for (TestSignal sig : AllTestSignals()) {
    CAPTURE(TestSignalName(sig));
    const AudioBuffer a = MakeTestSignal(sig);
    const AudioBuffer b = Synthesize(Analyze(a, spec));
    REQUIRE(b.num_channels() == a.num_channels());
    for (size_t c = 0; c < a.num_channels(); ++c) {
      REQUIRE(b.channels[c].size() == a.channels[c].size());
      CHECK(ErrorDb(a.channels[c], b.channels[c]) <= -50.0);
    }
  }
}

TEST_CASE("round trip property over random lengths and framings") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    FrameSpec spec;
    spec.frame_length = size_t{256} << (rng() % 4);
    spec.hop = spec.frame_length / 2;
    spec.fft_length = spec.frame_length << (rng() % 2);
    const size_t len = 1 + rng() % 20000;
    const auto x = WhiteNoise(len, rng());
    const auto y = SynthesizeChannel(AnalyzeChannel(x, spec));
    REQUIRE(y.size() == len);
    CHECK(ErrorDb(x, y) <= -50.0);
  }
}

TEST_CASE("a single-frame impulse returns the synthesis window shape") {
  FrameSpec spec;
  spec.frame_length = spec.fft_length = 512;
  spec.hop = 256;
  const size_t len = 4096;
  Spectrogram s(spec, spec.NumFrames(len), len);
  const size_t frame = 6, offset = 100;
  // Spectrum of a unit impulse at `offset` within the frame.
  for (size_t k = 0; k < s.num_bins(); ++k) {
    s.at(frame, k) = std::polar(1.0, -2.0 * std::numbers::pi * double(k * offset) /
                                         double(spec.fft_length));
  }
  const auto y = SynthesizeChannel(s);
  const auto w = MakeWindow(spec.window, spec.frame_length);
  // Overlap-add divides by the summed squared windows, which is constant.
  double norm = 0.0;
  for (size_t n = 0; n < spec.frame_length; n += spec.hop) norm += w[n] * w[n];
  const size_t t0 = frame * spec.hop - spec.frame_length / 2 + offset;
  for (size_t t = 0; t < len; ++t) {
    const double expected = t == t0 ? w[offset] / norm : 0.0;
    CHECK(y[t] == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("synthesis rejects inconsistent dimensions") {
  FrameSpec spec;
  Spectrogram s(spec, 3, 100000);
  CHECK_THROWS_AS(SynthesizeChannel(s), Error);
}

TEST_CASE("ERB-number scale") {
  CHECK(ErbNumber(0.0) == 0.0);
  // 21.4 log10(1 + 4.37)
  CHECK(ErbNumber(1000.0) == doctest::Approx(15.6214).epsilon(1e-5));
  for (double hz : {10.0, 440.0, 5000.0, 23000.0}) {
    CHECK(ErbNumberToHz(ErbNumber(hz)) == doctest::Approx(hz).epsilon(1e-12));
  }
}

TEST_CASE("ERB partition covers every bin exactly once") {
  for (size_t fft : {512u, 1024u, 4096u, 8192u}) {
    for (double per_erb : {0.5, 1.0, 2.0}) {
      const ErbPartition p = MakeErbPartition(48000, fft, per_erb);
      REQUIRE(p.num_bands() >= 1);
      CHECK(p.band_edges.front() == 0);
      CHECK(p.band_edges.back() == fft / 2);
      size_t covered = 0;
      for (size_t b = 0; b < p.num_bands(); ++b) {
        CHECK(p.band_begin(b) < p.band_end(b));
        if (b > 0) {
          CHECK(p.band_begin(b) == p.band_end(b - 1));
          CHECK(p.center_freqs[b] > p.center_freqs[b - 1]);
        }
        covered += p.band_size(b);
      }
      CHECK(covered == fft / 2 + 1);
    }
  }
  CHECK(MakeErbPartition(48000, 4096).num_bands() == 43);
}

TEST_CASE("ERB edges are stable across fft lengths up to bin rounding") {
  const ErbPartition a = MakeErbPartition(48000, 4096);
  const ErbPartition b = MakeErbPartition(48000, 8192);
  // Edges above the region where bands collapse to single bins line up.
  const double bin_a = 48000.0 / 4096.0;
  size_t matched = 0;
  for (size_t ea : a.band_edges) {
    const double hz = double(ea) * bin_a;
    if (hz < 1000.0) continue;
    double best = 1e9;
    for (size_t eb : b.band_edges) best = std::min(best, std::abs(hz - double(eb) * 48000.0 / 8192.0));
    CHECK(best <= bin_a);
    ++matched;
  }
  CHECK(matched > 10);
}

TEST_CASE("degenerate fft length yields no bands") {
  CHECK_THROWS_AS(MakeErbPartition(48000, 1), Error);
  CHECK_THROWS_AS(MakeErbPartition(0, 4096), Error);
}

}  // namespace
}  // namespace cuedist
