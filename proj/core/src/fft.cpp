#include "fft.hpp"

#include <fftw3.h>

#include <cstddef>
#include <map>
#include <mutex>
#include <vector>

namespace mf::detail {
namespace {

struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Plan creation is the only part of FFTW that is not thread-safe; plans are
// created once per grid size under a lock and then executed concurrently via
// the new-array interface. FFTW_ESTIMATE keeps planning deterministic,
// FFTW_UNALIGNED lets the plans run on whatever buffers callers hand us.
const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair>* cache = new std::map<int, PlanPair>();

  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache->try_emplace(n);
  if (inserted) {
    const std::size_t nn = static_cast<std::size_t>(n) * n;
    std::vector<double> real(nn);
    std::vector<std::complex<double>> spec(static_cast<std::size_t>(n) * (n / 2 + 1));
    auto* spec_raw = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    it->second.r2c = fftw_plan_dft_r2c_2d(n, n, real.data(), spec_raw, flags);
    it->second.c2r = fftw_plan_dft_c2r_2d(n, n, spec_raw, real.data(), flags);
  }
  return it->second;
}

}  // namespace

void forward_r2c(int n, const double* in, std::complex<double>* out) {
  const PlanPair& plans = plans_for(n);
  fftw_execute_dft_r2c(plans.r2c, const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
}

void inverse_c2r(int n, const std::complex<double>* in, double* out) {
  const PlanPair& plans = plans_for(n);
  std::vector<std::complex<double>> scratch(in, in + static_cast<std::size_t>(n) * (n / 2 + 1));
  fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  for (std::size_t i = 0; i < nn; ++i) out[i] *= scale;
}

}  // namespace mf::detail
