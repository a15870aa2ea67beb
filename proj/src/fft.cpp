#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace qdomain::detail {
namespace {

// One plan per (size, direction), executed on its own aligned buffers.
struct Plan {
  int size = 0;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan plan = nullptr;

  Plan(int n, int sign) : size(n) {
    in = fftw_alloc_complex(static_cast<size_t>(n));
    out = fftw_alloc_complex(static_cast<size_t>(n));
    plan = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  ~Plan() {
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

Plan& plan_for(int n, int sign) {
  static std::map<std::pair<int, int>, std::unique_ptr<Plan>> plans;
  auto& slot = plans[{n, sign}];
  if (!slot) slot = std::make_unique<Plan>(n, sign);
  return *slot;
}

std::vector<cplx> run(std::span<const cplx> data, int sign, double scale) {
  const int n = static_cast<int>(data.size());
  std::vector<cplx> result(data.size());
  if (n == 0) return result;
  std::lock_guard lock(plan_mutex());
  Plan& p = plan_for(n, sign);
  std::memcpy(static_cast<void*>(p.in), static_cast<const void*>(data.data()), sizeof(cplx) * data.size());
  fftw_execute(p.plan);
  std::memcpy(static_cast<void*>(result.data()), static_cast<const void*>(p.out), sizeof(cplx) * data.size());
  if (scale != 1.0)
    for (auto& v : result) v *= scale;
  return result;
}

}  // namespace

std::vector<cplx> analyze(std::span<const cplx> values) {
  return run(values, FFTW_FORWARD, 1.0 / static_cast<double>(values.size()));
}

std::vector<cplx> synthesize(std::span<const cplx> coeffs) {
  return run(coeffs, FFTW_BACKWARD, 1.0);
}

}  // namespace qdomain::detail
