#include "qdomain/power_series.hpp"

#include <cmath>

#include "fft.hpp"
#include "qdomain/error.hpp"

namespace qdomain {

PowerSeries::PowerSeries(int degree) {
  require(degree >= 0, ErrorCode::invalid_argument, "power series degree must be >= 0");
  a_.assign(static_cast<size_t>(degree) + 1, cplx{});
}

PowerSeries::PowerSeries(std::vector<cplx> taylor) : a_(std::move(taylor)) {
  if (a_.empty()) a_.push_back(cplx{});
}

cplx PowerSeries::evaluate(cplx z) const {
  cplx acc{};
  for (auto it = a_.rbegin(); it != a_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cplx PowerSeries::evaluate_derivative(cplx z) const {
  cplx acc{};
  for (int k = degree(); k >= 1; --k) acc = acc * z + static_cast<double>(k) * a_[k];
  return acc;
}

std::vector<cplx> PowerSeries::on_circle(double r, int M) const {
  require(M > 0, ErrorCode::invalid_argument, "sample count must be positive");
  std::vector<cplx> folded(static_cast<size_t>(M), cplx{});
  double rk = 1.0;
  for (int k = 0; k <= degree(); ++k) {
    folded[static_cast<size_t>(k % M)] += a_[k] * rk;
    rk *= r;
  }
  return detail::synthesize(folded);
}

double PowerSeries::tail_mass() const {
  const int n = static_cast<int>(a_.size());
  const int start = n - std::max(1, n / 10);
  double sum = 0.0;
  for (int k = std::max(start, 1); k < n; ++k) sum += std::abs(a_[k]);
  return sum;
}

}  // namespace qdomain
