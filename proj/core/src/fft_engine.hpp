#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

namespace confdirac {

/// n-dimensional complex FFT over a grid of m^n points carrying `howmany`
/// interleaved components. Unnormalized in both directions.
class FftEngine {
 public:
  FftEngine(int n, int m, int howmany);
  ~FftEngine();
  FftEngine(const FftEngine&) = delete;
  FftEngine& operator=(const FftEngine&) = delete;

  void forward(std::complex<double>* data) const;
  void backward(std::complex<double>* data) const;

 private:
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace confdirac
