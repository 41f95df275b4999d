#include "fft_engine.hpp"

#include <mutex>
#include <stdexcept>

namespace confdirac {
namespace {

// the FFTW planner is not thread-safe
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftEngine::FftEngine(int n, int m, int howmany) {
  std::vector<int> dims(n, m);
  std::size_t total = howmany;
  for (int a = 0; a < n; ++a) total *= m;
  std::vector<std::complex<double>> scratch(total);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

  std::lock_guard lock(planner_mutex());
  forward_ = fftw_plan_many_dft(n, dims.data(), howmany, buf, nullptr, howmany, 1, buf, nullptr,
                                howmany, 1, FFTW_FORWARD, flags);
  backward_ = fftw_plan_many_dft(n, dims.data(), howmany, buf, nullptr, howmany, 1, buf, nullptr,
                                 howmany, 1, FFTW_BACKWARD, flags);
  if (!forward_ || !backward_) throw std::runtime_error("fftw: plan creation failed");
}

FftEngine::~FftEngine() {
  std::lock_guard lock(planner_mutex());
  if (forward_) fftw_destroy_plan(forward_);
  if (backward_) fftw_destroy_plan(backward_);
}

void FftEngine::forward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(forward_, p, p);
}

void FftEngine::backward(std::complex<double>* data) const {
  auto* p = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(backward_, p, p);
}

}  // namespace confdirac
