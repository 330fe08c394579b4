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

#include "cuedist/codec.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cuedist/error.h"
#include "real_fft.h"

namespace cuedist {

namespace {

size_t NextPowerOfTwo(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

BccStream Encode(const AudioBuffer& stereo, const CodecConfig& config) {
  if (stereo.num_channels() != 2) {
    Fail(ErrorKind::kInvalidArgument,
         "encoder needs 2 channels, got " +
             std::to_string(stereo.num_channels()));
  }
  const ErbPartition part = config.MakePartition();
  const auto spectra = Analyze(stereo, config.frame);
  BccStream stream;
  stream.config = config;
  stream.cues = EstimateCues(spectra[0], spectra[1], part, config.cues);
  const Spectrogram mono = Downmix(spectra[0], spectra[1], part, config.cues);
  stream.mono.sample_rate = stereo.sample_rate;
  stream.mono.channels.push_back(SynthesizeChannel(mono));
  return stream;
}

std::vector<double> DecorrelatorImpulseResponse(
    int sample_rate, uint64_t seed, const DecorrelatorConfig& config) {
  Require(sample_rate > 0, "sample_rate must be positive");
  Require(config.bulk_delay_ms >= 0.0 &&
              config.bulk_delay_ms < config.max_delay_ms,
          "bulk delay must be below the maximum delay");
  const double fs = static_cast<double>(sample_rate);
  const size_t max_delay =
      static_cast<size_t>(std::lround(config.max_delay_ms * 1e-3 * fs));
  const size_t bulk =
      static_cast<size_t>(std::lround(config.bulk_delay_ms * 1e-3 * fs));
  const size_t length = NextPowerOfTwo(std::max<size_t>(8192, 4 * max_delay));
  const ErbPartition part = MakeErbPartition(sample_rate, length, 1.0);
  const double bin_hz = fs / static_cast<double>(length);
  const double band_delay_max = (config.max_delay_ms - config.bulk_delay_ms) * 1e-3;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0,
                                                    2.0 * std::numbers::pi);
  std::vector<std::complex<double>> response(length / 2 + 1);
  for (size_t b = 0; b < part.num_bands(); ++b) {
    const double phase = phase_dist(rng);
    const double width =
        static_cast<double>(part.band_size(b)) * bin_hz;
    // A delay of one inverse bandwidth spreads the phase over a full turn
    // across the band, which nulls the band coherence with the input.
    const double delay = std::min(band_delay_max, 1.0 / width);
    for (size_t k = part.band_begin(b); k < part.band_end(b); ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      const double arg = phase - 2.0 * std::numbers::pi * f *
                                     (delay + static_cast<double>(bulk) / fs);
      response[k] = std::polar(1.0, arg);
    }
  }
  // DC and Nyquist must be real.
  response.front() = {1.0, 0.0};
  response.back() = {std::cos(std::arg(response.back())) >= 0.0 ? 1.0 : -1.0,
                     0.0};

  RealFft fft(length);
  std::vector<double> h(length);
  fft.Inverse(response, h);
  // Keep max_delay plus one bulk delay of decay; taper both ends.
  const size_t keep = std::min(length, max_delay + bulk);
  std::vector<double> out(keep);
  for (size_t n = 0; n < keep; ++n) {
    double taper = 1.0;
    if (n < bulk && bulk > 0) {
      taper = std::sin(0.5 * std::numbers::pi *
                       (static_cast<double>(n) + 0.5) /
                       static_cast<double>(bulk));
    } else if (n + bulk >= keep && bulk > 0) {
      taper = std::sin(0.5 * std::numbers::pi *
                       (static_cast<double>(keep - n) - 0.5) /
                       static_cast<double>(bulk));
    }
    out[n] = h[n] * taper * taper;
  }
  return out;
}

AudioBuffer Decorrelate(const AudioBuffer& mono, uint64_t seed,
                        const DecorrelatorConfig& config) {
  Require(!mono.empty(), "cannot decorrelate an empty signal");
  const auto h = DecorrelatorImpulseResponse(mono.sample_rate, seed, config);
  const size_t len = mono.num_samples();
  const size_t n_fft = NextPowerOfTwo(len + h.size());
  RealFft fft(n_fft);
  std::vector<std::complex<double>> filter(n_fft / 2 + 1);
  fft.Forward(h, filter);

  AudioBuffer out;
  out.sample_rate = mono.sample_rate;
  std::vector<std::complex<double>> spectrum(n_fft / 2 + 1);
  for (size_t c = 0; c < mono.num_channels(); ++c) {
    fft.Forward(mono.channel(c), spectrum);
    for (size_t k = 0; k < spectrum.size(); ++k) spectrum[k] *= filter[k];
    std::vector<double> y(len);
    fft.Inverse(spectrum, y);
    out.channels.push_back(std::move(y));
  }
  return out;
}

MixingGains ComputeMixingGains(double icld_db, double icc,
                               const SynthesisFlags& flags) {
  MixingGains g;
  if (flags.apply_icld) {
    const double r = std::pow(10.0, icld_db / 10.0);
    g.left = std::sqrt(2.0 * r / (1.0 + r));
    g.right = std::sqrt(2.0 / (1.0 + r));
  }
  if (flags.apply_icc) {
    g.theta = 0.5 * std::acos(std::clamp(icc, -1.0, 1.0));
  }
  return g;
}

namespace {

// Measured coherence below which a level correction counts as harmful.
constexpr double kCoherentIcc = 0.95;

// Per frame/band parameters fed to the mixing equations.
struct SynthesisParams {
  BandMatrix icld_db;
  BandMatrix icc;  // coherence of the mixing equations
};

std::array<Spectrogram, 2> Mix(const Spectrogram& m, const Spectrogram& d,
                               const ErbPartition& part,
                               const SynthesisParams& params,
                               const SynthesisFlags& flags) {
  Spectrogram left(m.spec(), m.num_frames(), m.signal_length());
  Spectrogram right(m.spec(), m.num_frames(), m.signal_length());
  std::vector<std::complex<double>> ortho;
  for (size_t f = 0; f < m.num_frames(); ++f) {
    for (size_t b = 0; b < part.num_bands(); ++b) {
      const size_t lo = part.band_begin(b);
      const size_t hi = part.band_end(b);
      MixingGains g = ComputeMixingGains(params.icld_db.at(f, b),
                                         params.icc.at(f, b), flags);
      double m_power = 0.0;
      for (size_t k = lo; k < hi; ++k) m_power += std::norm(m.at(f, k));
      ortho.assign(hi - lo, {});
      if (g.theta > 0.0 && m_power > 0.0) {
        // Remove the part of d that is coherent with m in this band, then
        // match m's power.
        std::complex<double> inner;
        for (size_t k = lo; k < hi; ++k) {
          inner += d.at(f, k) * std::conj(m.at(f, k));
        }
        const auto proj = inner / m_power;
        double d_power = 0.0;
        for (size_t k = lo; k < hi; ++k) {
          ortho[k - lo] = d.at(f, k) - proj * m.at(f, k);
          d_power += std::norm(ortho[k - lo]);
        }
        if (d_power > 1e-12 * m_power) {
          const double scale = std::sqrt(m_power / d_power);
          for (auto& v : ortho) v *= scale;
        } else {
          g.theta = 0.0;  // no decorrelated component left in this band
        }
      } else {
        g.theta = 0.0;
      }
      const double c = std::cos(g.theta);
      const double s = std::sin(g.theta);
      for (size_t k = lo; k < hi; ++k) {
        const auto direct = c * m.at(f, k);
        const auto diffuse = s * ortho[k - lo];
        left.at(f, k) = g.left * (direct + diffuse);
        right.at(f, k) = g.right * (direct - diffuse);
      }
    }
  }
  return {std::move(left), std::move(right)};
}

}  // namespace

AudioBuffer Decode(const BccStream& stream, const SynthesisFlags& flags) {
  const SynthesisFlags effective{
      flags.apply_icld && stream.flags.apply_icld,
      flags.apply_icc && stream.flags.apply_icc};
  const CodecConfig& config = stream.config;
  if (stream.mono.num_channels() != 1 || stream.mono.empty()) {
    Fail(ErrorKind::kData, "stream must carry a non-empty mono signal");
  }
  if (!(stream.cues.frame_spec == config.frame)) {
    Fail(ErrorKind::kData, "cue framing does not match codec config");
  }
  const ErbPartition& part = stream.cues.partition;
  const Spectrogram m = AnalyzeChannel(stream.mono.channel(0), config.frame);
  if (stream.cues.frames.size() != m.num_frames() ||
      part.band_edges.empty() || part.band_edges.back() + 1 != m.num_bins()) {
    Fail(ErrorKind::kData, "cue stream dimensions do not match mono signal");
  }
  for (const CueFrame& f : stream.cues.frames) {
    if (f.icld_db.size() != part.num_bands() ||
        f.icc.size() != part.num_bands()) {
      Fail(ErrorKind::kData, "cue frame has wrong band count");
    }
  }

  Spectrogram d;
  if (effective.apply_icc) {
    d = AnalyzeChannel(
        Decorrelate(stream.mono, config.decorrelator_seed).channel(0),
        config.frame);
  }
  const CoherenceBias bias(config.frame, part, config.cues.icc_smoothing);
  const size_t frames = m.num_frames();
  const size_t bands = part.num_bands();

  SynthesisParams params{BandMatrix(frames, bands), BandMatrix(frames, bands)};
  for (size_t f = 0; f < frames; ++f) {
    const CueFrame& cue = stream.cues.frames[f];
    for (size_t b = 0; b < bands; ++b) {
      double target = cue.icc[b];
      if (config.cues.icc_debias) {
        target = std::sqrt(bias.Rebias(target * target, b, f));
      }
      params.icld_db.at(f, b) = effective.apply_icld ? cue.icld_db[b] : 0.0;
      params.icc.at(f, b) = target;
    }
  }

  // Without ICLD the target is a centred image. The decorrelated component
  // still unbalances the channels after overlap-add, so the level is driven
  // to 0 dB by the same correction loop whenever ICC is synthesized.
  SynthesisFlags mixing = effective;
  if (effective.apply_icc) mixing.apply_icld = true;
  auto channels = Mix(m, d, part, params, mixing);
  // Overlap-add blends neighbouring frames, so the cues measured on the
  // output drift from the per-frame targets. Re-analyze and move the mixing
  // parameters by the residual.
  const double floor = SilenceFloorPower(config.frame, config.cues);
  const double icld_limit = config.cues.icld_max_db + 10.0;
  // Without synthesized ICC the output must stay coherent, but level
  // corrections that differ between neighbouring frames decorrelate the
  // channels after overlap-add. Such corrections are undone and the band is
  // left alone from then on.
  const bool guard = mixing.apply_icld && !effective.apply_icc;
  BandMatrix previous;
  std::vector<bool> frozen(guard ? frames * bands : 0, false);
  const int passes = config.refine_iterations + (guard && config.refine_iterations > 0);
  for (int it = 0; it < passes; ++it) {
    if (!effective.apply_icld && !effective.apply_icc) break;
    const bool last = it == config.refine_iterations;
    const AudioBuffer y = Synthesize(channels);
    const auto spectra = Analyze(y, config.frame);
    const CueStream out =
        EstimateCues(spectra[0], spectra[1], part, config.cues);
    // A 0 dB target holds frame by frame, so steer the centred case with the
    // unsmoothed level difference; the smoothed one converges slowly.
    BandMatrix centred;
    if (!effective.apply_icld && mixing.apply_icld) {
      CueConfig raw = config.cues;
      raw.icld_smoothing = 0.0;
      centred = EstimateIcld(spectra[0], spectra[1], part, raw);
    }
    if (guard) {
      bool reverted = false;
      for (size_t f = 0; f < frames; ++f) {
        for (size_t b = 0; b < bands; ++b) {
          if (out.frames[f].icc[b] >= kCoherentIcc) continue;
          for (size_t g = f > 0 ? f - 1 : 0; g < std::min(frames, f + 2); ++g) {
            if (it > 0) params.icld_db.at(g, b) = previous.at(g, b);
            frozen[g * bands + b] = true;
          }
          reverted = it > 0;
        }
      }
      if (last) {
        if (reverted) channels = Mix(m, d, part, params, mixing);
        break;
      }
      previous = params.icld_db;
    }
    for (size_t f = 0; f < frames; ++f) {
      const CueFrame& want = stream.cues.frames[f];
      const CueFrame& got = out.frames[f];
      for (size_t b = 0; b < bands; ++b) {
        if (got.band_energy[b] < floor) continue;
        if (mixing.apply_icld && !(guard && frozen[f * bands + b])) {
          const double error = effective.apply_icld
                                   ? want.icld_db[b] - got.icld_db[b]
                                   : -centred.at(f, b);
          double& p = params.icld_db.at(f, b);
          p = std::clamp(p + error, -icld_limit, icld_limit);
        }
        if (effective.apply_icc) {
          double& p = params.icc.at(f, b);
          p = std::clamp(p + want.icc[b] - got.icc[b], -1.0, 1.0);
        }
      }
    }
    channels = Mix(m, d, part, params, mixing);
  }
  return Synthesize(channels);
}

}  // namespace cuedist
