#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qdomain {

using cplx = std::complex<double>;

/// Truncated Taylor series sum_{k=0}^{degree} a_k z^k of a holomorphic
/// function on the unit disk.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(int degree);
  explicit PowerSeries(std::vector<cplx> taylor);

  int degree() const { return static_cast<int>(a_.size()) - 1; }
  cplx operator[](int k) const {
    return (k >= 0 && k < static_cast<int>(a_.size())) ? a_[k] : cplx{};
  }
  cplx& at(int k) { return a_.at(static_cast<size_t>(k)); }
  std::span<const cplx> taylor() const { return a_; }

  cplx evaluate(cplx z) const;
  cplx evaluate_derivative(cplx z) const;

  /// Values at r e^{2 pi i j / M}, j = 0..M-1. Exact at the sample points for
  /// any degree: modes are folded modulo M before the transform.
  std::vector<cplx> on_circle(double r, int M) const;

  /// Sum of |a_k| over the top decile of indices.
  double tail_mass() const;

 private:
  std::vector<cplx> a_;
};

}  // namespace qdomain
