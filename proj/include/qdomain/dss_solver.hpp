#pragma once

// Fixed-point construction of the quadrature-domain branch: solve
//   Psi(W, a) = Pi_X4( log T(G_{W,a}) + L ) = 0,  G_{W,a} = exp(-2(P[W] + a P[mu]))
// for W in the discrete 4-fold mean-zero class, continuing in a from a = 0.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qdomain/circle_fourier.hpp"
#include "qdomain/disk_ops.hpp"

namespace qdomain {

/// singular: boundary log-weight L = W (the approximant's a*mu is treated as a
/// singular measure with unimodular boundary factor).
/// consistent: L = W + a * density(mu).
enum class Mode { singular, consistent };

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

enum class Spacing { geometric, linear };

/// {0} followed by J points ending at a_max (a_max 2^{j-J} or a_max j/J).
std::vector<double> make_a_grid(double a_max, int points, Spacing spacing);

struct SolverConfig {
  int N = 255;
  int Nr = 64;
  int M = 512;
  Mode mode = Mode::singular;
  MeasureSpec measure = riesz_product(0, 255);
  std::vector<double> a_grid{0.0};
  double tol_residual = 1e-11;
  int max_iter = 200;
  bool use_newton = false;
  int contraction_probes = 5;
  double contraction_step = 1e-6;
  /// Branch stops once the measured Lipschitz ratio of Gamma_a reaches this.
  double contraction_limit = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct BranchPoint {
  double a = 0.0;
  TrigPolynomial W;
  double log_C = 0.0;
  double C = 1.0;
  double c = 0.5;
  double residual = 0.0;
  double contraction_est = 0.0;
  int iterations = 0;
  std::string stop_reason = "converged";
  /// Largest l2 size of the non-X4 part removed by projection during the solve.
  double projection_correction = 0.0;
  /// Discrete C^{1/2} estimate of W; diagnostic only.
  double holder_half = 0.0;
};

struct Branch {
  SolverConfig config;
  std::vector<BranchPoint> points;
  /// "completed", "contraction_lost", "positivity_lost", "overflow_guard",
  /// "max_iter" or "diverged".
  std::string stop_reason = "completed";
  std::string stop_detail;
  double stopped_at_a = 0.0;
};

struct PsiResult {
  TrigPolynomial psi;
  double log_C = 0.0;
  double min_T = 0.0;
  double projection_correction = 0.0;
};

/// (I - 2K)^{-1} on X4: mode n scaled by (|n|+1)/(|n|-1). Rejects inputs with a
/// mean or a mode outside 4Z.
TrigPolynomial apply_A_inv(const TrigPolynomial& h);

/// The nonlinear operators at a fixed resolution and measure.
class DssProblem {
 public:
  explicit DssProblem(SolverConfig cfg);

  const SolverConfig& config() const { return cfg_; }
  const PolarGrid& grid() const { return grid_; }
  const PolarField& poisson_mu() const { return poisson_mu_; }

  TrigPolynomial log_density(const TrigPolynomial& W, double a) const;
  /// exp(-2(P[W] + a P[mu])) on the grid; refuses exponents beyond 300.
  PolarField jacobian_field(const TrigPolynomial& W, double a) const;
  PsiResult psi(const TrigPolynomial& W, double a) const;
  /// Directional derivative
  ///   H - 2 Pi_X4( T(G P[H]) / T(G) ).
  TrigPolynomial dpsi(const TrigPolynomial& W, double a, const TrigPolynomial& H) const;
  TrigPolynomial gamma_step(const TrigPolynomial& W, double a) const;
  TrigPolynomial newton_step(const TrigPolynomial& W, double a) const;
  /// Largest ||Gamma(W + dH) - Gamma(W)|| / ||dH|| over random X4 directions.
  double contraction_estimate(const TrigPolynomial& W, double a, std::mt19937_64& rng) const;
  /// sup over angles of |T(G) - C e^{-L}|.
  double fixed_point_defect(const TrigPolynomial& W, double a, double C) const;

 private:
  TrigPolynomial solve_newton_system(const TrigPolynomial& W, double a, const TrigPolynomial& rhs) const;

  SolverConfig cfg_;
  PolarGrid grid_;
  PolarField poisson_mu_;
  double sup_poisson_mu_ = 0.0;
};

Branch solve_branch(const SolverConfig& cfg);

/// Re-checks the fixed-point equation T(G) = C e^{-L} on a grid refined by
/// `refine` in both radius and angle. Returns the sup defect.
double verify_fixed_point(const BranchPoint& point, const SolverConfig& cfg, int refine = 2);

/// Random element of X4 with modes 4..4*modes, sup-normalized to 1.
TrigPolynomial random_x4(int cutoff, int modes, std::mt19937_64& rng);

/// Uniform double in [0, 1) from 53 random bits.
double uniform01(std::mt19937_64& rng);

}  // namespace qdomain
