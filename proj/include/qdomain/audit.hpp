#pragma once

// Rigidity checks run on a synthesized map phi: D -> Omega with quadrature
// constant c. Boundary density sigma follows the map's mode convention, so
// ds = sigma dt on the circle.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdomain/conformal.hpp"

namespace qdomain {

struct AuditResolution {
  int Nr = 64;
  int M = 1024;
  /// Boundary samples; 0 selects 8 * N_s.
  int M_b = 0;

  PolarGrid grid() const;
  int boundary_samples(const ConformalMapRecord& rec) const;
};

/// D_n = int_D phi^n |phi'|^2 da - C int_T phi^n sigma dm with C = 2c.
std::vector<cplx> quadrature_defects(const ConformalMapRecord& rec, double c, int n_max,
                                     const AuditResolution& res = {});
/// R_n = |D_n|.
std::vector<double> quadrature_residuals(const ConformalMapRecord& rec, double c, int n_max,
                                         const AuditResolution& res = {});

/// b = conj(phi) - 2ic conj(tau) sigma / |phi'| at M_b boundary samples, with
/// tau = i e^{it} phi' / |phi'|.
std::vector<cplx> boundary_b(const ConformalMapRecord& rec, double c, int M_b);

/// O_k = int phi^k b phi' i e^{it} dm for k = 0..k_max.
std::vector<cplx> cauchy_orthogonality(const ConformalMapRecord& rec, double c, int k_max,
                                       const AuditResolution& res = {});

struct HardyLift {
  /// Nonnegative-frequency part of A = b phi' (modes 0..N_s).
  PowerSeries A_plus;
  /// l2 norm of the negative-frequency coefficients of A.
  double F_defect = 0.0;
  /// F o phi = A_plus e^{F_nu}.
  PowerSeries F;
  /// sup |F(e^{it}) - b|.
  double boundary_dev = 0.0;
  bool in_hardy_class = true;
};

/// Projects the boundary symbol. Never throws on a defect; see build_F.
HardyLift hardy_lift(const ConformalMapRecord& rec, double c, double tol, const AuditResolution& res = {});
/// As hardy_lift but raises not_in_hardy_class when F_defect > tol.
HardyLift build_F(const ConformalMapRecord& rec, double c, double tol = 1e-8,
                  const AuditResolution& res = {});

struct SerrinSolution {
  /// G o phi with (G o phi)' = A_plus.
  PowerSeries G;
  double C0 = 0.0;
  /// u o phi on the audit grid.
  PolarField u;
  std::vector<double> u_boundary;
  double u_boundary_sup = 0.0;
  double u_interior_min = 0.0;
};

/// u o phi = Re(G o phi) / 2 - |phi|^2 / 4 + C0, C0 fixed by a zero boundary mean.
SerrinSolution build_u(const ConformalMapRecord& rec, const HardyLift& F, const AuditResolution& res = {});

struct GradientChecks {
  double sup_half_W = 0.0;
  double grad_bound_excess = 0.0;
  double normal_deriv_dev = 0.0;
};

/// W = F o phi - conj(phi) on the grid against c, and Re(i tau (F - conj phi) / 2)
/// on the boundary against c.
GradientChecks gradient_and_normal_checks(const ConformalMapRecord& rec, const HardyLift& F, double c,
                                          const AuditResolution& res = {});

struct WeinbergerReport {
  double I = 0.0;
  double M = 0.0;
  double B = 0.0;
  double area = 0.0;
  double id1_defect = 0.0;
  double id2_defect = 0.0;
  double volume_defect = 0.0;
};

WeinbergerReport weinberger_identities(const ConformalMapRecord& rec, const SerrinSolution& u, double c,
                                       const AuditResolution& res = {});

/// Real polynomial sum c_pq x^p y^q.
struct TestPolynomial {
  std::map<std::pair<int, int>, double> coeffs;

  static TestPolynomial monomial(int p, int q, double coeff = 1.0);
  /// Re(z^n) or Im(z^n) expanded by the binomial theorem.
  static TestPolynomial harmonic(int n, bool imaginary);
  TestPolynomial laplacian() const;
  double operator()(double x, double y) const;
  int degree() const;
};

/// int_Omega u Lap(phi) dA - [c int phi ds - int_Omega phi dA] (signed).
double weak_serrin_residual(const ConformalMapRecord& rec, const SerrinSolution& u, double c,
                            const TestPolynomial& test, const AuditResolution& res = {});

struct WeakSerrinEntry {
  int p = 0;
  int q = 0;
  double residual = 0.0;
};

/// Residuals for every monomial x^p y^q with p + q <= degree.
std::vector<WeakSerrinEntry> weak_serrin_residuals(const ConformalMapRecord& rec, const SerrinSolution& u,
                                                   double c, int degree, const AuditResolution& res = {});

struct RigidityVerdict {
  bool disk = true;
  double deficit = 0.0;
  static constexpr double threshold = 1e-8;
};

RigidityVerdict rigidity_verdict(const ConformalMapRecord& rec, const AuditResolution& res = {});

/// FNV-1a over mode, a and the Taylor coefficients of f.
std::uint64_t map_hash(const ConformalMapRecord& rec);

struct AuditOptions {
  AuditResolution resolution;
  int n_max = 16;
  int k_max = 16;
  int serrin_degree = 4;
  double hardy_tol = 1e-8;
  /// Replaces C(a)/2 from the map.
  std::optional<double> c;
};

struct AuditReport {
  double c = 0.5;
  std::string convention;
  std::string C0_convention = "boundary_mean_zero";
  AuditResolution resolution;
  int boundary_samples = 0;
  std::uint64_t map_hash = 0;

  std::vector<double> quad_residuals;
  std::vector<double> orth_residuals;
  double F_defect = 0.0;
  bool F_in_hardy_class = true;
  double F_boundary_dev = 0.0;
  double C0 = 0.0;
  double u_boundary_sup = 0.0;
  double u_interior_min = 0.0;
  double sup_half_W = 0.0;
  double grad_bound_excess = 0.0;
  double normal_deriv_dev = 0.0;
  WeinbergerReport weinberger;
  std::vector<WeakSerrinEntry> weak_serrin;
  GeometryReport geometry;
  RigidityVerdict verdict;
  std::vector<std::string> notes;
};

/// Full pipeline. Failures of individual checks are reported, not raised.
AuditReport audit(const ConformalMapRecord& rec, const AuditOptions& opt = {});

}  // namespace qdomain
