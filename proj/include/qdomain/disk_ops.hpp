#pragma once

// Disk-side operators with da = dA / pi: Poisson extension, the balayage
// (TG)(zeta) = int_D P_z(zeta) G(z) da(z), and K = T o P.

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qdomain/circle_fourier.hpp"

namespace qdomain {

/// Gauss-Legendre radii with weights for int (.) 2r dr, times M uniform angles.
struct PolarGrid {
  std::vector<double> radii;
  std::vector<double> weights;
  int angles = 0;

  /// Whole disk: nodes in (0,1), sum of weights = 1.
  static PolarGrid disk(int radial_nodes, int angles);
  /// Annulus r_inner < r < 1; weights integrate 2r dr over that interval.
  static PolarGrid annulus(double r_inner, int radial_nodes, int angles);

  int radial_nodes() const { return static_cast<int>(radii.size()); }
  double angle(int k) const;
  /// Largest mode the angular transform resolves without aliasing.
  int max_cutoff() const { return (angles - 1) / 2; }
};

/// Row-major Nr x M samples on a PolarGrid; row j holds radius r_j.
class PolarField {
 public:
  PolarField() = default;
  explicit PolarField(PolarGrid grid);
  PolarField(PolarGrid grid, const std::function<cplx(double r, double theta)>& fn);

  const PolarGrid& grid() const { return grid_; }
  cplx& at(int j, int k) { return v_[static_cast<size_t>(j) * grid_.angles + k]; }
  cplx at(int j, int k) const { return v_[static_cast<size_t>(j) * grid_.angles + k]; }
  std::span<const cplx> row(int j) const {
    return {v_.data() + static_cast<size_t>(j) * grid_.angles, static_cast<size_t>(grid_.angles)};
  }
  std::span<cplx> values() { return v_; }
  std::span<const cplx> values() const { return v_; }

  double sup_abs() const;
  double min_real() const;
  bool is_real(double tol = 0.0) const;
  bool all_finite() const;

  /// Pointwise product.
  PolarField& operator*=(const PolarField& other);

 private:
  PolarGrid grid_;
  std::vector<cplx> v_;
};

/// int_D F da by the tensor rule (radial weights x angular mean).
cplx integrate(const PolarField& field);

/// P[h](r_j e^{i t_k}) = sum_n c_n r_j^{|n|} e^{i n t_k}.
PolarField poisson_extend(const TrigPolynomial& h, const PolarGrid& grid);

/// Fast diagonal balayage: (TG)^(n) = sum_j w_j r_j^{|n|} g_n(r_j), where g_n
/// is the angular Fourier coefficient of row j. Output keeps |n| <= cutoff.
TrigPolynomial balayage(const PolarField& G, int cutoff);

/// Oracle: direct double quadrature of the Poisson kernel against G at
/// M_out boundary angles. Each row is read as its trigonometric interpolant
/// (direct sums, no FFT) and integrated against P_{r_j}(phi - t) by adaptive
/// Gauss-Kronrod in t, then summed with the radial weights. Refuses
/// Nr * M * M_out > 1e9.
std::vector<cplx> balayage_bruteforce(const PolarField& G, int M_out);

/// K h = T(P[h]) on the given grid.
TrigPolynomial operator_K(const TrigPolynomial& h, const PolarGrid& grid);

/// (int_D P[h] G da, int_T h (TG) dm); equal by Fubini.
std::pair<cplx, cplx> fubini_check(const TrigPolynomial& h, const PolarField& G);

struct MomentCheck {
  cplx numeric;
  cplx analytic;
};

/// int_D z^n P_z(zeta) da(z) by Gauss-Legendre in r and adaptive
/// Gauss-Kronrod in theta, against zeta^n / (n+1).
MomentCheck poisson_moment(int n, cplx zeta, int radial_nodes = 64);

/// int_0^{2pi} P_r(phi - t) g(t) dt / 2pi by adaptive Gauss-Kronrod, split at
/// the kernel peak.
cplx poisson_angular_quadrature(double r, double phi, const std::function<cplx(double)>& g);

/// Direct quadrature of P[nu](z) for a density given by its coefficients.
double poisson_integral_direct(const TrigPolynomial& density, cplx z);

}  // namespace qdomain
