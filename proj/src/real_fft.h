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

#ifndef CUEDIST_SRC_REAL_FFT_H_
#define CUEDIST_SRC_REAL_FFT_H_

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <span>

namespace cuedist {

// Real-to-complex FFT of a fixed length backed by FFTW. Forward is
// unnormalized; Inverse divides by the length. Not copyable; one instance per
// thread.
class RealFft {
 public:
  explicit RealFft(size_t length);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  // `input` may be shorter than the length; it is zero-padded.
  void Forward(std::span<const double> input,
               std::span<std::complex<double>> output);
  // Writes the first output.size() samples of the inverse transform.
  void Inverse(std::span<const std::complex<double>> input,
               std::span<double> output);

  size_t length() const { return length_; }

 private:
  size_t length_;
  double* time_;
  fftw_complex* freq_;
  fftw_plan forward_;
  fftw_plan inverse_;
};

}  // namespace cuedist

#endif  // CUEDIST_SRC_REAL_FFT_H_
