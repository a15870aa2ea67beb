#include "qdomain/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include "fft.hpp"
#include "ipow.hpp"
#include "qdomain/error.hpp"

namespace qdomain {
namespace {

constexpr double kPi = std::numbers::pi;

struct Boundary {
  std::vector<double> t;
  std::vector<cplx> phi;
  std::vector<cplx> dphi;
  std::vector<double> sigma;
};

Boundary boundary_data(const ConformalMapRecord& rec, int M_b) {
  require(M_b >= 8, ErrorCode::invalid_argument, "too few boundary samples");
  Boundary b;
  b.t.resize(static_cast<size_t>(M_b));
  for (int j = 0; j < M_b; ++j) b.t[j] = 2.0 * kPi * j / M_b;
  b.phi = rec.f.on_circle(1.0, M_b);
  b.dphi = rec.fprime.on_circle(1.0, M_b);
  b.sigma = rec.boundary_density(M_b);
  return b;
}

// int_Omega g dA = pi int_D g(phi) |phi'|^2 da on the grid.
template <class Fn>
cplx area_integral(const ConformalMapRecord& rec, const PolarGrid& grid, Fn&& g) {
  auto field = evaluate_on_grid(rec.f, grid);
  const auto fp = evaluate_on_grid(rec.fprime, grid);
  for (size_t i = 0; i < field.values().size(); ++i) {
    auto& v = field.values()[i];
    v = g(i, v) * std::norm(fp.values()[i]);
  }
  return kPi * integrate(field);
}

PowerSeries negated(const PowerSeries& s) {
  std::vector<cplx> a(s.taylor().begin(), s.taylor().end());
  for (auto& v : a) v = -v;
  return PowerSeries(std::move(a));
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

template <class T>
void hash_bytes(std::uint64_t& h, const T& value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  for (unsigned char byte : bytes) {
    h ^= byte;
    h *= 1099511628211ULL;
  }
}

}  // namespace

PolarGrid AuditResolution::grid() const { return PolarGrid::disk(Nr, M); }

int AuditResolution::boundary_samples(const ConformalMapRecord& rec) const {
  return M_b > 0 ? M_b : 8 * rec.series_degree;
}

std::vector<cplx> quadrature_defects(const ConformalMapRecord& rec, double c, int n_max,
                                     const AuditResolution& res) {
  require(n_max >= 0, ErrorCode::invalid_argument, "n_max must be >= 0");
  const auto grid = res.grid();
  const auto fg = evaluate_on_grid(rec.f, grid);
  auto jac = evaluate_on_grid(rec.fprime, grid);
  for (auto& v : jac.values()) v = std::norm(v);
  const auto bd = boundary_data(rec, res.boundary_samples(rec));
  const int M_b = static_cast<int>(bd.t.size());

  std::vector<cplx> out;
  PolarField field(grid);
  for (int n = 0; n <= n_max; ++n) {
    for (size_t i = 0; i < field.values().size(); ++i)
      field.values()[i] = detail::ipow(fg.values()[i], n) * jac.values()[i];
    cplx bnd{};
    for (int j = 0; j < M_b; ++j) bnd += detail::ipow(bd.phi[j], n) * bd.sigma[j];
    bnd /= static_cast<double>(M_b);
    out.push_back(integrate(field) - 2.0 * c * bnd);
  }
  return out;
}

std::vector<double> quadrature_residuals(const ConformalMapRecord& rec, double c, int n_max,
                                         const AuditResolution& res) {
  std::vector<double> out;
  for (const auto& d : quadrature_defects(rec, c, n_max, res)) out.push_back(std::abs(d));
  return out;
}

std::vector<cplx> boundary_b(const ConformalMapRecord& rec, double c, int M_b) {
  const auto bd = boundary_data(rec, M_b);
  std::vector<cplx> b(static_cast<size_t>(M_b));
  for (int j = 0; j < M_b; ++j) {
    const double mod = std::abs(bd.dphi[j]);
    require(mod > 0.0, ErrorCode::invalid_argument, "phi' vanishes on the boundary");
    const cplx tau = cplx(0.0, 1.0) * std::polar(1.0, bd.t[j]) * bd.dphi[j] / mod;
    b[j] = std::conj(bd.phi[j]) - cplx(0.0, 2.0 * c) * std::conj(tau) * (bd.sigma[j] / mod);
  }
  return b;
}

std::vector<cplx> cauchy_orthogonality(const ConformalMapRecord& rec, double c, int k_max,
                                       const AuditResolution& res) {
  require(k_max >= 0, ErrorCode::invalid_argument, "k_max must be >= 0");
  const int M_b = res.boundary_samples(rec);
  const auto bd = boundary_data(rec, M_b);
  const auto b = boundary_b(rec, c, M_b);
  std::vector<cplx> out;
  for (int k = 0; k <= k_max; ++k) {
    cplx acc{};
    for (int j = 0; j < M_b; ++j)
      acc += detail::ipow(bd.phi[j], k) * b[j] * bd.dphi[j] * cplx(0.0, 1.0) * std::polar(1.0, bd.t[j]);
    out.push_back(acc / static_cast<double>(M_b));
  }
  return out;
}

HardyLift hardy_lift(const ConformalMapRecord& rec, double c, double tol, const AuditResolution& res) {
  const int M_b = res.boundary_samples(rec);
  const auto bd = boundary_data(rec, M_b);
  // b phi' = conj(phi) phi' - 2c e^{-it} sigma, since conj(tau) phi' = -i e^{-it} |phi'|.
  std::vector<cplx> A(static_cast<size_t>(M_b));
  for (int j = 0; j < M_b; ++j)
    A[j] = std::conj(bd.phi[j]) * bd.dphi[j] - 2.0 * c * std::polar(1.0, -bd.t[j]) * bd.sigma[j];
  const auto coef = detail::analyze(A);

  HardyLift lift;
  double neg = 0.0;
  for (int m = 1; m <= M_b / 2; ++m) neg += std::norm(coef[static_cast<size_t>(M_b - m)]);
  lift.F_defect = std::sqrt(neg);
  lift.in_hardy_class = lift.F_defect <= tol;

  const int K = std::min(rec.series_degree, (M_b - 1) / 2);
  lift.A_plus = PowerSeries(K);
  for (int k = 0; k <= K; ++k) lift.A_plus.at(k) = coef[static_cast<size_t>(k)];
  lift.F = multiply(lift.A_plus, exp_neg_series(negated(rec.F), K), K);

  const auto b = boundary_b(rec, c, M_b);
  const auto Fb = lift.F.on_circle(1.0, M_b);
  for (int j = 0; j < M_b; ++j) lift.boundary_dev = std::max(lift.boundary_dev, std::abs(Fb[j] - b[j]));
  return lift;
}

HardyLift build_F(const ConformalMapRecord& rec, double c, double tol, const AuditResolution& res) {
  auto lift = hardy_lift(rec, c, tol, res);
  if (!lift.in_hardy_class)
    fail(ErrorCode::not_in_hardy_class,
         "weighted boundary symbol has negative-frequency mass " + std::to_string(lift.F_defect) +
             " > " + std::to_string(tol) + ": map and constant do not satisfy the quadrature identity");
  return lift;
}

SerrinSolution build_u(const ConformalMapRecord& rec, const HardyLift& F, const AuditResolution& res) {
  const auto grid = res.grid();
  const int M_b = res.boundary_samples(rec);
  SerrinSolution s;
  s.G = integrate_series(F.A_plus);

  const auto Gb = s.G.on_circle(1.0, M_b);
  const auto phib = rec.f.on_circle(1.0, M_b);
  s.u_boundary.resize(static_cast<size_t>(M_b));
  double mean = 0.0;
  for (int j = 0; j < M_b; ++j) {
    s.u_boundary[j] = 0.5 * Gb[j].real() - 0.25 * std::norm(phib[j]);
    mean += s.u_boundary[j];
  }
  s.C0 = -mean / M_b;
  for (auto& v : s.u_boundary) {
    v += s.C0;
    s.u_boundary_sup = std::max(s.u_boundary_sup, std::abs(v));
  }

  s.u = evaluate_on_grid(s.G, grid);
  const auto phig = evaluate_on_grid(rec.f, grid);
  s.u_interior_min = INFINITY;
  for (size_t i = 0; i < s.u.values().size(); ++i) {
    const double v = 0.5 * s.u.values()[i].real() - 0.25 * std::norm(phig.values()[i]) + s.C0;
    s.u.values()[i] = v;
    s.u_interior_min = std::min(s.u_interior_min, v);
  }
  return s;
}

GradientChecks gradient_and_normal_checks(const ConformalMapRecord& rec, const HardyLift& F, double c,
                                          const AuditResolution& res) {
  const auto grid = res.grid();
  GradientChecks g;
  const auto Fg = evaluate_on_grid(F.F, grid);
  const auto phig = evaluate_on_grid(rec.f, grid);
  for (size_t i = 0; i < Fg.values().size(); ++i)
    g.sup_half_W = std::max(g.sup_half_W, 0.5 * std::abs(Fg.values()[i] - std::conj(phig.values()[i])));
  g.grad_bound_excess = std::max(0.0, g.sup_half_W - c);

  const int M_b = res.boundary_samples(rec);
  const auto bd = boundary_data(rec, M_b);
  const auto Fb = F.F.on_circle(1.0, M_b);
  for (int j = 0; j < M_b; ++j) {
    const cplx tau = cplx(0.0, 1.0) * std::polar(1.0, bd.t[j]) * bd.dphi[j] / std::abs(bd.dphi[j]);
    const double dn = (cplx(0.0, 1.0) * tau * (Fb[j] - std::conj(bd.phi[j])) * 0.5).real();
    g.normal_deriv_dev = std::max(g.normal_deriv_dev, std::abs(dn - c));
  }
  return g;
}

WeinbergerReport weinberger_identities(const ConformalMapRecord& rec, const SerrinSolution& u, double c,
                                       const AuditResolution& res) {
  const auto grid = res.grid();
  WeinbergerReport w;
  w.I = area_integral(rec, grid, [&](size_t i, cplx) { return u.u.values()[i]; }).real();
  w.M = area_integral(rec, grid, [](size_t, cplx z) { return cplx(std::norm(z)); }).real();
  const auto bd = boundary_data(rec, res.boundary_samples(rec));
  double B = 0.0;
  for (size_t j = 0; j < bd.t.size(); ++j) B += std::norm(bd.phi[j]) * bd.sigma[j];
  w.B = 2.0 * kPi * B / static_cast<double>(bd.t.size());
  for (int k = 1; k <= rec.f.degree(); ++k) w.area += k * std::norm(rec.f[k]);
  w.area *= kPi;
  w.id1_defect = std::abs(4.0 * w.I + w.M - c * w.B);
  w.id2_defect = std::abs((w.M - 4.0 * w.I) - (c * w.B - 4.0 * c * c * w.area));
  w.volume_defect = std::abs(2.0 * w.I - c * c * w.area);
  return w;
}

TestPolynomial TestPolynomial::monomial(int p, int q, double coeff) {
  require(p >= 0 && q >= 0, ErrorCode::invalid_argument, "monomial exponents must be >= 0");
  TestPolynomial t;
  t.coeffs[{p, q}] = coeff;
  return t;
}

TestPolynomial TestPolynomial::harmonic(int n, bool imaginary) {
  require(n >= 0, ErrorCode::invalid_argument, "degree must be >= 0");
  TestPolynomial t;
  // z^n = sum_k C(n,k) x^{n-k} (iy)^k
  for (int k = imaginary ? 1 : 0; k <= n; k += 2) {
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    t.coeffs[{n - k, k}] = sign * binomial(n, k);
  }
  return t;
}

TestPolynomial TestPolynomial::laplacian() const {
  TestPolynomial out;
  for (const auto& [pq, v] : coeffs) {
    const auto [p, q] = pq;
    if (p >= 2) out.coeffs[{p - 2, q}] += v * p * (p - 1);
    if (q >= 2) out.coeffs[{p, q - 2}] += v * q * (q - 1);
  }
  return out;
}

double TestPolynomial::operator()(double x, double y) const {
  double s = 0.0;
  for (const auto& [pq, v] : coeffs) s += v * detail::ipow(x, pq.first) * detail::ipow(y, pq.second);
  return s;
}

int TestPolynomial::degree() const {
  int d = 0;
  for (const auto& [pq, v] : coeffs)
    if (v != 0.0) d = std::max(d, pq.first + pq.second);
  return d;
}

double weak_serrin_residual(const ConformalMapRecord& rec, const SerrinSolution& u, double c,
                            const TestPolynomial& test, const AuditResolution& res) {
  const auto grid = res.grid();
  const auto lap = test.laplacian();
  double u_lap = 0.0;
  if (!lap.coeffs.empty())
    u_lap = area_integral(rec, grid, [&](size_t i, cplx z) {
              return cplx(u.u.values()[i].real() * lap(z.real(), z.imag()));
            }).real();
  const double vol = area_integral(rec, grid, [&](size_t, cplx z) { return cplx(test(z.real(), z.imag())); }).real();
  const auto bd = boundary_data(rec, res.boundary_samples(rec));
  double bnd = 0.0;
  for (size_t j = 0; j < bd.t.size(); ++j) bnd += test(bd.phi[j].real(), bd.phi[j].imag()) * bd.sigma[j];
  bnd *= 2.0 * kPi / static_cast<double>(bd.t.size());
  return u_lap - (c * bnd - vol);
}

std::vector<WeakSerrinEntry> weak_serrin_residuals(const ConformalMapRecord& rec, const SerrinSolution& u,
                                                   double c, int degree, const AuditResolution& res) {
  require(degree >= 0, ErrorCode::invalid_argument, "test degree must be >= 0");
  std::vector<WeakSerrinEntry> out;
  for (int d = 0; d <= degree; ++d)
    for (int q = 0; q <= d; ++q)
      out.push_back({d - q, q, weak_serrin_residual(rec, u, c, TestPolynomial::monomial(d - q, q), res)});
  return out;
}

RigidityVerdict rigidity_verdict(const ConformalMapRecord& rec, const AuditResolution& res) {
  RigidityVerdict v;
  v.deficit = geometry(rec, res.boundary_samples(rec)).circularity_deficit;
  v.disk = v.deficit <= RigidityVerdict::threshold;
  return v;
}

std::uint64_t map_hash(const ConformalMapRecord& rec) {
  std::uint64_t h = 14695981039346656037ULL;
  hash_bytes(h, static_cast<int>(rec.mode));
  hash_bytes(h, rec.a);
  for (const auto& v : rec.f.taylor()) {
    hash_bytes(h, v.real());
    hash_bytes(h, v.imag());
  }
  return h;
}

AuditReport audit(const ConformalMapRecord& rec, const AuditOptions& opt) {
  AuditReport r;
  r.c = opt.c.value_or(0.5 * rec.C);
  r.convention = rec.mode == Mode::singular ? "singular: sigma = exp(-W)" : "consistent: sigma = exp(-(W + a mu))";
  r.resolution = opt.resolution;
  r.boundary_samples = opt.resolution.boundary_samples(rec);
  r.map_hash = map_hash(rec);

  r.quad_residuals = quadrature_residuals(rec, r.c, opt.n_max, opt.resolution);
  for (const auto& o : cauchy_orthogonality(rec, r.c, opt.k_max, opt.resolution))
    r.orth_residuals.push_back(std::abs(o));

  const auto lift = hardy_lift(rec, r.c, opt.hardy_tol, opt.resolution);
  r.F_defect = lift.F_defect;
  r.F_in_hardy_class = lift.in_hardy_class;
  r.F_boundary_dev = lift.boundary_dev;
  if (!lift.in_hardy_class)
    r.notes.push_back("F_defect above tolerance; u built from the projected boundary symbol");

  const auto u = build_u(rec, lift, opt.resolution);
  r.C0 = u.C0;
  r.u_boundary_sup = u.u_boundary_sup;
  r.u_interior_min = u.u_interior_min;

  const auto g = gradient_and_normal_checks(rec, lift, r.c, opt.resolution);
  r.sup_half_W = g.sup_half_W;
  r.grad_bound_excess = g.grad_bound_excess;
  r.normal_deriv_dev = g.normal_deriv_dev;

  r.weinberger = weinberger_identities(rec, u, r.c, opt.resolution);
  r.weak_serrin = weak_serrin_residuals(rec, u, r.c, opt.serrin_degree, opt.resolution);
  r.geometry = geometry(rec, r.boundary_samples);
  r.verdict.deficit = r.geometry.circularity_deficit;
  r.verdict.disk = r.verdict.deficit <= RigidityVerdict::threshold;
  return r;
}

}  // namespace qdomain
