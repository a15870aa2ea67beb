#pragma once

// Synthesis of f = int_0^z exp(-H[nu]) as truncated power series, plus the
// geometry, univalence and moment computations on the resulting map.

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "qdomain/circle_fourier.hpp"
#include "qdomain/disk_ops.hpp"
#include "qdomain/dss_solver.hpp"
#include "qdomain/power_series.hpp"

namespace qdomain {

/// exp(-F) truncated at `degree` via k g_k = -sum_{j=1}^k j F_j g_{k-j}.
PowerSeries exp_neg_series(const PowerSeries& F, int degree);
/// f_0 = 0, f_k = g_{k-1} / k.
PowerSeries integrate_series(const PowerSeries& g);
PowerSeries differentiate(const PowerSeries& f);
/// Cauchy product truncated at `degree`.
PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, int degree);

/// A map f_nu with nu = w dm + a mu. `w` is the absolutely continuous weight
/// and `mu` the density standing in for the singular part.
struct ConformalMapRecord {
  Mode mode = Mode::singular;
  double a = 0.0;
  TrigPolynomial w;
  TrigPolynomial mu;
  /// Quadrature constant C(a) carried over from the branch (1 for the disk).
  double C = 1.0;
  int series_degree = 0;
  PowerSeries F;
  PowerSeries fprime;
  PowerSeries f;
  /// max |f_k| over k != 1 mod 4; zero for 4-fold inputs.
  double equivariance_defect = 0.0;

  TrigPolynomial nu() const { return w + a * mu; }
  /// log of the declared boundary arclength density: w (singular) or
  /// w + a mu (consistent).
  TrigPolynomial boundary_log_weight() const;
  /// Boundary density sigma = exp(-L) at M uniform angles.
  std::vector<double> boundary_density(int M) const;
};

ConformalMapRecord build_map(const TrigPolynomial& w, const TrigPolynomial& mu, double a, Mode mode,
                             int series_degree, double tail_tol = 1e-10);
ConformalMapRecord build_map(const BranchPoint& point, const SolverConfig& cfg, int series_degree,
                             double tail_tol = 1e-10);
/// f(z) = z.
ConformalMapRecord disk_map(int cutoff, int series_degree);

/// Values of a series on every ring of the grid (row-major like PolarField).
PolarField evaluate_on_grid(const PowerSeries& s, const PolarGrid& grid);

/// max over the grid of | |f'|^2 - exp(-2 P[nu]) |.
double jacobian_crosscheck(const ConformalMapRecord& rec, const PolarGrid& grid);

/// sup over the grid of (1-|z|^2)^2 |S_f| with S_f = -F'' - (F')^2 / 2.
double schwarzian_sup(const ConformalMapRecord& rec, const PolarGrid& grid);

struct UnivalenceVerdict {
  bool simple = true;
  int samples = 0;
  /// Offending boundary parameter pairs (t_i, t_j), at most 16 reported.
  std::vector<std::pair<double, double>> crossings;
  bool fprime_nonvanishing = true;
};

/// Simplicity test of the boundary polyline f(e^{i t_j}), j < M_b, over all
/// non-adjacent segment pairs. Requires M_b >= 8 * degree.
UnivalenceVerdict univalence_check(const PowerSeries& f, int M_b);
/// Same on a synthesized map; requires M_b >= 8 * series_degree.
UnivalenceVerdict univalence_check(const ConformalMapRecord& rec, int M_b);

struct GeometryReport {
  double area = 0.0;
  double perimeter = 0.0;
  /// 2 pi mean |f'(e^{it})| of the truncated series (diagnostic).
  double perimeter_truncated = 0.0;
  cplx centroid{};
  double radius_mean = 0.0;
  double radius_std = 0.0;
  /// radius_std / radius_mean of |f(e^{it}) - centroid|.
  double circularity_deficit = 0.0;
};

/// area = pi sum k |f_k|^2; perimeter = 2 pi int exp(-L) dm with the declared
/// boundary convention.
GeometryReport geometry(const ConformalMapRecord& rec, int M_b);

/// pi int_D |f'|^2 da on the grid (the coefficient formula's oracle).
double grid_area(const ConformalMapRecord& rec, const PolarGrid& grid);

/// int_D f^n |f'|^2 dA on the grid.
cplx moments_area(const ConformalMapRecord& rec, int n, const PolarGrid& grid);
/// (1/2i) int f^n conj(f) f' i e^{it} dt by the trapezoid rule on M_b angles.
cplx moments_contour(const ConformalMapRecord& rec, int n, int M_b);

struct MomentCurve {
  int n = 0;
  std::vector<double> a;
  std::vector<cplx> values;
  double step = 1e-3;
  cplx derivative_fd{};
  cplx derivative_analytic{};
};

/// M_n(a) = int_D z^n exp(-2 a P[mu]) da on the grid, the central difference
/// (M_n(h) - M_n(-h)) / 2h, and the comparator -2 (int zeta^n dmu) / (n+1).
MomentCurve moment_curve(const TrigPolynomial& mu, int n, const std::vector<double>& a_list,
                         const PolarGrid& grid, double step = 1e-3);

}  // namespace qdomain
