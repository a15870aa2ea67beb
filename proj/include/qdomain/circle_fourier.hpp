#pragma once

// Fourier calculus for real functions and finite real measures on the unit
// circle T, normalized so that dm = dt / 2 pi.

#include <complex>
#include <span>
#include <vector>

#include "qdomain/power_series.hpp"

namespace qdomain {

/// Truncated Fourier series sum_{|n|<=N} c_n e^{int}.
///
/// When is_real() holds, c_{-n} = conj(c_n) is maintained on every write and
/// re-imposed by symmetrize() after arithmetic.
class TrigPolynomial {
 public:
  TrigPolynomial() : TrigPolynomial(0) {}
  explicit TrigPolynomial(int cutoff, bool is_real = true);

  static TrigPolynomial constant(double value, int cutoff);
  /// e_n + e_{-n} scaled so that the result is value * 2 cos(nt) when value
  /// is real; for n == 0 just the constant.
  static TrigPolynomial real_mode(int n, cplx value, int cutoff);
  /// Single complex exponential e_n (not real unless n == 0).
  static TrigPolynomial exponential(int n, int cutoff);

  /// Forward transform of M >= 2N+1 uniform samples, keeping |n| <= cutoff.
  static TrigPolynomial from_samples(std::span<const cplx> values, int cutoff, bool is_real);
  static TrigPolynomial from_samples(std::span<const double> values, int cutoff);

  int cutoff() const { return N_; }
  bool is_real() const { return real_; }

  cplx operator[](int n) const {
    return (n >= -N_ && n <= N_) ? c_[static_cast<size_t>(n + N_)] : cplx{};
  }
  /// Sets c_n (and c_{-n} = conj when real).
  void set(int n, cplx value);
  std::span<const cplx> coeffs() const { return c_; }

  /// Cutoff change. Refuses to drop a nonzero coefficient.
  TrigPolynomial with_cutoff(int cutoff) const;
  /// Cutoff change that discards modes |n| > cutoff.
  TrigPolynomial truncated(int cutoff) const;

  void symmetrize();
  double mean() const { return c_[static_cast<size_t>(N_)].real(); }
  /// sqrt(sum |c_n|^2), the L2(dm) norm.
  double l2_norm() const;

  TrigPolynomial& operator+=(const TrigPolynomial& other);
  TrigPolynomial& operator-=(const TrigPolynomial& other);
  TrigPolynomial& operator*=(double s);

  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) { return a += b; }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) { return a -= b; }
  friend TrigPolynomial operator*(double s, TrigPolynomial a) { return a *= s; }

 private:
  int N_;
  bool real_;
  std::vector<cplx> c_;
};

/// Values at t_j = 2 pi j / M. Throws ErrorCode::aliasing when M < 2N+1.
std::vector<cplx> sample(const TrigPolynomial& p, int M);
/// Real parts of sample(); intended for real polynomials.
std::vector<double> sample_real(const TrigPolynomial& p, int M);

/// Sup over M uniform samples of |p|.
double sup_norm(const TrigPolynomial& p, int M);

/// Orthogonal projection onto the 4-fold symmetric, mean-zero class: keeps
/// only c_n with n in 4Z \ {0}.
TrigPolynomial project_x4(const TrigPolynomial& p);

/// True when every nonzero mode (within tol) satisfies 4 | n and n != 0.
bool in_x4(const TrigPolynomial& p, double tol = 0.0);

struct MeasureSpec {
  enum class Kind { riesz_product, explicit_coeffs };
  Kind kind = Kind::explicit_coeffs;
  int depth = 0;              // riesz_product only
  TrigPolynomial density;     // Fourier coefficients; mass = c_0
  double mass() const { return density.mean(); }
};

/// Highest frequency of the depth-K product: sum_k 4 * 3^k.
int riesz_max_frequency(int depth);

/// prod_{k=0}^{K} (1 + cos(4 * 3^k t)) expanded exactly. Refuses when the
/// cutoff cannot hold the product.
MeasureSpec riesz_product(int depth, int cutoff);

/// Wraps user coefficients; enforces reality and 4-fold support.
MeasureSpec explicit_measure(const TrigPolynomial& density);

/// Taylor coefficients of the Herglotz transform int (zeta+z)/(zeta-z) dnu:
/// F_0 = c_0, F_k = 2 c_k. Degree is the cutoff of nu.
PowerSeries herglotz_coeffs(const TrigPolynomial& nu);

/// sup|p| plus the largest |p(xi) - p(eta)| / |xi - eta|^alpha over all pairs
/// of M uniform samples (chordal distance). A lower bound for the C^alpha norm.
double holder_estimate(const TrigPolynomial& p, double alpha, int M);

}  // namespace qdomain
