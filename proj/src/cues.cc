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

#include "cuedist/cues.h"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cuedist/error.h"
#include "real_fft.h"

namespace cuedist {

namespace {

void RequireMatched(const Spectrogram& left, const Spectrogram& right,
                    const ErbPartition& part) {
  if (!left.SameShape(right)) {
    Fail(ErrorKind::kInvalidArgument, "left/right spectrogram shapes differ");
  }
  if (part.num_bands() == 0 || part.band_edges.back() + 1 != left.num_bins()) {
    Fail(ErrorKind::kInvalidArgument,
         "band partition does not match spectrogram bins");
  }
}

// Per frame/band sums needed by the cue estimators.
struct BandSums {
  double left = 0.0;
  double right = 0.0;
  std::complex<double> cross;
};

BandSums SumBand(const Spectrogram& l, const Spectrogram& r, size_t f,
                 const ErbPartition& part, size_t b) {
  BandSums s;
  for (size_t k = part.band_begin(b); k < part.band_end(b); ++k) {
    const auto& x = l.at(f, k);
    const auto& y = r.at(f, k);
    s.left += std::norm(x);
    s.right += std::norm(y);
    s.cross += x * std::conj(y);
  }
  return s;
}

}  // namespace

double FullScalePower(const FrameSpec& spec) {
  double window_energy = 0.0;
  for (double w : MakeWindow(spec.window, spec.frame_length)) {
    window_energy += w * w;
  }
  return 0.25 * static_cast<double>(spec.fft_length) * window_energy;
}

double SilenceFloorPower(const FrameSpec& spec, const CueConfig& config) {
  return config.silence_floor * FullScalePower(spec);
}

BandMatrix BandPowers(const Spectrogram& s, const ErbPartition& part) {
  BandMatrix out(s.num_frames(), part.num_bands());
  for (size_t f = 0; f < s.num_frames(); ++f) {
    for (size_t b = 0; b < part.num_bands(); ++b) {
      double p = 0.0;
      for (size_t k = part.band_begin(b); k < part.band_end(b); ++k) {
        p += std::norm(s.at(f, k));
      }
      out.at(f, b) = p;
    }
  }
  return out;
}

CoherenceBias::CoherenceBias(const FrameSpec& spec, const ErbPartition& part,
                             double smoothing)
    : smoothing_(smoothing) {
  Require(smoothing >= 0.0 && smoothing < 1.0,
          "coherence smoothing must lie in [0, 1)");
  // For white noise the covariance between bin i of frame f and bin j of
  // frame f + lag has magnitude |U_lag(i - j)|, where U_lag is the DFT of
  // w[n] * w[n + lag * hop].
  const auto w = MakeWindow(spec.window, spec.frame_length);
  const size_t max_lag = (spec.frame_length - 1) / spec.hop;
  RealFft fft(spec.fft_length);
  std::vector<std::vector<double>> u_mag2(max_lag + 1);
  std::vector<std::complex<double>> spectrum(spec.num_bins());
  for (size_t lag = 0; lag <= max_lag; ++lag) {
    std::vector<double> product(spec.frame_length, 0.0);
    const size_t shift = lag * spec.hop;
    for (size_t n = 0; n + shift < spec.frame_length; ++n) {
      product[n] = w[n] * w[n + shift];
    }
    fft.Forward(product, spectrum);
    u_mag2[lag].resize(spec.num_bins());
    for (size_t k = 0; k < spec.num_bins(); ++k) {
      u_mag2[lag][k] = std::norm(spectrum[k]);
    }
  }
  lag0_power_ = u_mag2[0][0];

  lag_.resize(part.num_bands());
  band_bins_.resize(part.num_bands());
  for (size_t b = 0; b < part.num_bands(); ++b) {
    const size_t k = part.band_size(b);
    band_bins_[b] = static_cast<double>(k);
    lag_[b].resize(max_lag + 1);
    for (size_t lag = 0; lag <= max_lag; ++lag) {
      // sum_{i,j in band} |U(i-j)|^2 = sum_m (k - |m|) |U(m)|^2; |U(-m)| =
      // |U(m)| for a real product sequence.
      double s = static_cast<double>(k) * u_mag2[lag][0];
      for (size_t m = 1; m < k && m < u_mag2[lag].size(); ++m) {
        s += 2.0 * static_cast<double>(k - m) * u_mag2[lag][m];
      }
      lag_[b][lag] = s;
    }
  }
}

double CoherenceBias::InverseDof(size_t band, size_t frame) const {
  // Weights a_j = alpha^(frame - j), j = 0..frame.
  const double a = smoothing_;
  const double a2 = a * a;
  auto geometric = [&](size_t terms, double ratio) {
    double sum = 0.0, p = 1.0;
    for (size_t i = 0; i < terms; ++i, p *= ratio) sum += p;
    return sum;
  };
  const size_t terms = frame + 1;
  const double w1 = geometric(terms, a);
  double numerator = geometric(terms, a2) * lag_[band][0];
  for (size_t lag = 1; lag < lag_[band].size() && lag < terms; ++lag) {
    numerator +=
        2.0 * std::pow(a, static_cast<double>(lag)) *
        geometric(terms - lag, a2) * lag_[band][lag];
  }
  const double denom = w1 * band_bins_[band];
  return std::min(1.0, numerator / (denom * denom * lag0_power_));
}

double CoherenceBias::Debias(double raw_msc, size_t band, size_t frame) const {
  const double inv = InverseDof(band, frame);
  raw_msc = std::clamp(raw_msc, 0.0, 1.0);
  if (inv >= 1.0 - 1e-9) return raw_msc;
  return std::clamp((raw_msc - inv) / (1.0 - inv), 0.0, 1.0);
}

double CoherenceBias::Rebias(double msc, size_t band, size_t frame) const {
  const double inv = InverseDof(band, frame);
  msc = std::clamp(msc, 0.0, 1.0);
  if (inv >= 1.0 - 1e-9) return msc;
  return std::clamp(msc * (1.0 - inv) + inv, 0.0, 1.0);
}

BandMatrix EstimateIcld(const Spectrogram& left, const Spectrogram& right,
                        const ErbPartition& part, const CueConfig& config) {
  RequireMatched(left, right, part);
  const double floor = SilenceFloorPower(left.spec(), config);
  const double alpha = config.icld_smoothing;
  Require(alpha >= 0.0 && alpha < 1.0, "ICLD smoothing must lie in [0, 1)");
  BandMatrix out(left.num_frames(), part.num_bands());
  std::vector<BandSums> smoothed(part.num_bands());
  double floor_gain = 0.0;
  for (size_t f = 0; f < left.num_frames(); ++f) {
    floor_gain = alpha * floor_gain + 1.0;
    for (size_t b = 0; b < part.num_bands(); ++b) {
      const BandSums raw = SumBand(left, right, f, part, b);
      BandSums& s = smoothed[b];
      s.left = alpha * s.left + raw.left;
      s.right = alpha * s.right + raw.right;
      const double floor_b = floor * floor_gain;
      double icld = 0.0;
      if (s.left < floor_b && s.right < floor_b) {
        icld = 0.0;
      } else if (s.right <= 0.0) {
        icld = config.icld_max_db;
      } else if (s.left <= 0.0) {
        icld = -config.icld_max_db;
      } else {
        // Always take the log of a ratio >= 1 so that swapping the
        // channels negates the result exactly.
        const double db = s.left >= s.right
                              ? 10.0 * std::log10(s.left / s.right)
                              : -10.0 * std::log10(s.right / s.left);
        icld = std::clamp(db, -config.icld_max_db, config.icld_max_db);
      }
      out.at(f, b) = icld;
    }
  }
  return out;
}

BandMatrix EstimateIcc(const Spectrogram& left, const Spectrogram& right,
                       const ErbPartition& part, const CueConfig& config) {
  RequireMatched(left, right, part);
  const double floor = SilenceFloorPower(left.spec(), config);
  const double alpha = config.icc_smoothing;
  const CoherenceBias bias(left.spec(), part, alpha);
  BandMatrix out(left.num_frames(), part.num_bands());
  std::vector<BandSums> smoothed(part.num_bands());
  // Floor for the smoothed sums scales with the smoothing gain.
  double floor_gain = 0.0;
  for (size_t f = 0; f < left.num_frames(); ++f) {
    floor_gain = alpha * floor_gain + 1.0;
    for (size_t b = 0; b < part.num_bands(); ++b) {
      const BandSums s = SumBand(left, right, f, part, b);
      BandSums& acc = smoothed[b];
      acc.left = alpha * acc.left + s.left;
      acc.right = alpha * acc.right + s.right;
      acc.cross = alpha * acc.cross + s.cross;
      const double band_floor = floor * floor_gain;
      if (acc.left < band_floor || acc.right < band_floor) {
        out.at(f, b) = 1.0;
        continue;
      }
      double msc = std::norm(acc.cross) / (acc.left * acc.right);
      msc = std::clamp(msc, 0.0, 1.0);
      if (config.icc_debias) msc = bias.Debias(msc, b, f);
      out.at(f, b) = std::sqrt(msc);
    }
  }
  return out;
}

Spectrogram Downmix(const Spectrogram& left, const Spectrogram& right,
                    const ErbPartition& part, const CueConfig& config) {
  RequireMatched(left, right, part);
  const double floor = SilenceFloorPower(left.spec(), config);
  const double cap = std::pow(10.0, config.downmix_cap_db / 20.0);
  Spectrogram mono(left.spec(), left.num_frames(), left.signal_length());
  for (size_t f = 0; f < left.num_frames(); ++f) {
    for (size_t b = 0; b < part.num_bands(); ++b) {
      double mono_power = 0.0;
      for (size_t k = part.band_begin(b); k < part.band_end(b); ++k) {
        const auto m = 0.5 * (left.at(f, k) + right.at(f, k));
        mono.at(f, k) = m;
        mono_power += std::norm(m);
      }
      const BandSums s = SumBand(left, right, f, part, b);
      const double target = 0.5 * (s.left + s.right);
      if (target < floor || mono_power <= 0.0) continue;
      const double scale = std::min(std::sqrt(target / mono_power), cap);
      for (size_t k = part.band_begin(b); k < part.band_end(b); ++k) {
        mono.at(f, k) *= scale;
      }
    }
  }
  return mono;
}

CueStream EstimateCues(const Spectrogram& left, const Spectrogram& right,
                       const ErbPartition& part, const CueConfig& config) {
  const BandMatrix icld = EstimateIcld(left, right, part, config);
  const BandMatrix icc = EstimateIcc(left, right, part, config);
  const BandMatrix pl = BandPowers(left, part);
  const BandMatrix pr = BandPowers(right, part);
  CueStream stream;
  stream.partition = part;
  stream.frame_spec = left.spec();
  stream.frames.resize(left.num_frames());
  for (size_t f = 0; f < left.num_frames(); ++f) {
    CueFrame& frame = stream.frames[f];
    frame.icld_db.resize(part.num_bands());
    frame.icc.resize(part.num_bands());
    frame.band_energy.resize(part.num_bands());
    for (size_t b = 0; b < part.num_bands(); ++b) {
      frame.icld_db[b] = icld.at(f, b);
      frame.icc[b] = icc.at(f, b);
      frame.band_energy[b] = pl.at(f, b) + pr.at(f, b);
    }
  }
  return stream;
}

CueStream EstimateCues(const AudioBuffer& stereo, const FrameSpec& spec,
                       const ErbPartition& part, const CueConfig& config) {
  Require(stereo.num_channels() == 2, "cue estimation needs stereo input");
  const auto spectra = Analyze(stereo, spec);
  return EstimateCues(spectra[0], spectra[1], part, config);
}

}  // namespace cuedist
