#include "qdomain/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ipow.hpp"
#include "qdomain/error.hpp"

namespace qdomain {
namespace {

constexpr double kPi = std::numbers::pi;

// Degree at which the tail would drop below tol, assuming the geometric decay
// seen between the middle and the end of the series continues.
int estimate_required_degree(const PowerSeries& g, double tol) {
  const int n = g.degree();
  const int half = std::max(1, n / 2);
  const double top = std::max(std::abs(g[n]), 1e-300);
  const double mid = std::max(std::abs(g[half]), 1e-300);
  const double rate = std::pow(top / mid, 1.0 / std::max(1, n - half));
  if (!(rate < 1.0)) return 2 * n;
  const double extra = std::log(tol / std::max(g.tail_mass(), 1e-300)) / std::log(rate);
  return n + std::max(1, static_cast<int>(std::ceil(extra)));
}

bool four_fold(const TrigPolynomial& p) {
  for (int n = -p.cutoff(); n <= p.cutoff(); ++n)
    if (n % 4 != 0 && p[n] != cplx{}) return false;
  return true;
}

struct Segment {
  cplx p, q;
  double xmin, xmax, ymin, ymax;
};

double orient(cplx a, cplx b, cplx c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

bool segments_cross(const Segment& s, const Segment& t) {
  const double d1 = orient(s.p, s.q, t.p);
  const double d2 = orient(s.p, s.q, t.q);
  const double d3 = orient(t.p, t.q, s.p);
  const double d4 = orient(t.p, t.q, s.q);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

PowerSeries exp_neg_series(const PowerSeries& F, int degree) {
  require(degree >= 0, ErrorCode::invalid_argument, "series degree must be >= 0");
  require(std::isfinite(std::abs(F[0])), ErrorCode::invalid_argument, "F_0 must be finite");
  std::vector<int> support;
  for (int j = 1; j <= F.degree(); ++j)
    if (F[j] != cplx{}) support.push_back(j);
  PowerSeries g(degree);
  g.at(0) = std::exp(-F[0]);
  for (int k = 1; k <= degree; ++k) {
    cplx acc{};
    for (int j : support) {
      if (j > k) break;
      acc += static_cast<double>(j) * F[j] * g[k - j];
    }
    g.at(k) = -acc / static_cast<double>(k);
  }
  return g;
}

PowerSeries integrate_series(const PowerSeries& g) {
  PowerSeries f(g.degree() + 1);
  for (int k = 1; k <= f.degree(); ++k) f.at(k) = g[k - 1] / static_cast<double>(k);
  return f;
}

PowerSeries differentiate(const PowerSeries& f) {
  PowerSeries d(std::max(0, f.degree() - 1));
  for (int k = 1; k <= f.degree(); ++k) d.at(k - 1) = static_cast<double>(k) * f[k];
  return d;
}

PowerSeries multiply(const PowerSeries& a, const PowerSeries& b, int degree) {
  PowerSeries c(degree);
  for (int i = 0; i <= std::min(a.degree(), degree); ++i) {
    if (a[i] == cplx{}) continue;
    for (int j = 0; j <= std::min(b.degree(), degree - i); ++j) c.at(i + j) += a[i] * b[j];
  }
  return c;
}

TrigPolynomial ConformalMapRecord::boundary_log_weight() const {
  return mode == Mode::singular ? w : w + a * mu;
}

std::vector<double> ConformalMapRecord::boundary_density(int M) const {
  auto L = sample_real(boundary_log_weight(), M);
  for (auto& v : L) v = std::exp(-v);
  return L;
}

ConformalMapRecord build_map(const TrigPolynomial& w, const TrigPolynomial& mu, double a, Mode mode,
                             int series_degree, double tail_tol) {
  require(series_degree >= 1, ErrorCode::invalid_argument, "series degree must be >= 1");
  require(w.is_real() && mu.is_real(), ErrorCode::invalid_argument, "map data must be real");
  ConformalMapRecord rec;
  rec.mode = mode;
  rec.a = a;
  rec.w = w;
  rec.mu = mu;
  rec.series_degree = series_degree;
  rec.F = herglotz_coeffs(rec.nu());
  rec.fprime = exp_neg_series(rec.F, series_degree);
  const double tail = rec.fprime.tail_mass();
  if (!(tail <= tail_tol)) {
    fail(ErrorCode::under_resolved,
         "series tail " + std::to_string(tail) + " exceeds " + std::to_string(tail_tol) +
             " at N_s=" + std::to_string(series_degree) + "; estimated N_s >= " +
             std::to_string(estimate_required_degree(rec.fprime, tail_tol)));
  }
  rec.f = integrate_series(rec.fprime);
  if (four_fold(w) && four_fold(mu)) {
    for (int k = 0; k <= rec.f.degree(); ++k)
      if (k % 4 != 1) rec.equivariance_defect = std::max(rec.equivariance_defect, std::abs(rec.f[k]));
    require(rec.equivariance_defect <= 1e-13, ErrorCode::invalid_argument,
            "4-fold equivariance broken by the synthesized map");
  }
  return rec;
}

ConformalMapRecord build_map(const BranchPoint& point, const SolverConfig& cfg, int series_degree,
                             double tail_tol) {
  auto rec = build_map(point.W, cfg.measure.density, point.a, cfg.mode, series_degree, tail_tol);
  rec.C = point.C;
  return rec;
}

ConformalMapRecord disk_map(int cutoff, int series_degree) {
  return build_map(TrigPolynomial(cutoff), TrigPolynomial(cutoff), 0.0, Mode::singular, series_degree);
}

PolarField evaluate_on_grid(const PowerSeries& s, const PolarGrid& grid) {
  PolarField field(grid);
  const int M = grid.angles;
  for (int j = 0; j < grid.radial_nodes(); ++j) {
    const auto row = s.on_circle(grid.radii[j], M);
    std::copy(row.begin(), row.end(), field.values().begin() + static_cast<long>(j) * M);
  }
  return field;
}

double jacobian_crosscheck(const ConformalMapRecord& rec, const PolarGrid& grid) {
  const auto fp = evaluate_on_grid(rec.fprime, grid);
  const auto P = poisson_extend(rec.nu(), grid);
  double worst = 0.0;
  for (size_t i = 0; i < fp.values().size(); ++i) {
    const double lhs = std::norm(fp.values()[i]);
    const double rhs = std::exp(-2.0 * P.values()[i].real());
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

double schwarzian_sup(const ConformalMapRecord& rec, const PolarGrid& grid) {
  const auto F1 = differentiate(rec.F);
  const auto F2 = differentiate(F1);
  const auto v1 = evaluate_on_grid(F1, grid);
  const auto v2 = evaluate_on_grid(F2, grid);
  double worst = 0.0;
  for (int j = 0; j < grid.radial_nodes(); ++j) {
    const double r = grid.radii[j];
    const double weight = (1.0 - r * r) * (1.0 - r * r);
    for (int k = 0; k < grid.angles; ++k) {
      const cplx S = -v2.at(j, k) - 0.5 * v1.at(j, k) * v1.at(j, k);
      worst = std::max(worst, weight * std::abs(S));
    }
  }
  return worst;
}

UnivalenceVerdict univalence_check(const PowerSeries& f, int M_b) {
  require(M_b >= 8 * std::max(1, f.degree()) && M_b >= 3, ErrorCode::invalid_argument,
          "univalence check needs M_b >= 8 * degree");
  UnivalenceVerdict verdict;
  verdict.samples = M_b;
  const auto pts = f.on_circle(1.0, M_b);
  const auto fp = differentiate(f).on_circle(1.0, M_b);
  for (const auto& v : fp)
    if (std::abs(v) == 0.0) verdict.fprime_nonvanishing = false;

  std::vector<Segment> seg(static_cast<size_t>(M_b));
  for (int i = 0; i < M_b; ++i) {
    const cplx p = pts[i], q = pts[(i + 1) % M_b];
    seg[i] = {p, q, std::min(p.real(), q.real()), std::max(p.real(), q.real()),
              std::min(p.imag(), q.imag()), std::max(p.imag(), q.imag())};
  }
  std::vector<int> order(static_cast<size_t>(M_b));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return seg[x].xmin < seg[y].xmin; });

  const double dt = 2.0 * kPi / M_b;
  for (size_t oi = 0; oi < order.size(); ++oi) {
    const int i = order[oi];
    for (size_t oj = oi + 1; oj < order.size() && seg[order[oj]].xmin <= seg[i].xmax; ++oj) {
      const int j = order[oj];
      const int gap = std::abs(i - j);
      if (gap <= 1 || gap == M_b - 1) continue;
      if (seg[j].ymin > seg[i].ymax || seg[i].ymin > seg[j].ymax) continue;
      if (!segments_cross(seg[i], seg[j])) continue;
      verdict.simple = false;
      if (verdict.crossings.size() < 16)
        verdict.crossings.emplace_back(std::min(i, j) * dt, std::max(i, j) * dt);
    }
  }
  std::sort(verdict.crossings.begin(), verdict.crossings.end());
  return verdict;
}

UnivalenceVerdict univalence_check(const ConformalMapRecord& rec, int M_b) {
  require(M_b >= 8 * rec.series_degree, ErrorCode::invalid_argument,
          "univalence check needs M_b >= 8 * N_s");
  auto verdict = univalence_check(rec.f, std::max(M_b, 8 * rec.f.degree()));
  verdict.samples = std::max(M_b, 8 * rec.f.degree());
  return verdict;
}

GeometryReport geometry(const ConformalMapRecord& rec, int M_b) {
  require(M_b >= 2 * rec.f.degree() + 1, ErrorCode::aliasing, "boundary sampling too coarse for the series");
  GeometryReport g;
  for (int k = 1; k <= rec.f.degree(); ++k) g.area += k * std::norm(rec.f[k]);
  g.area *= kPi;

  const auto sigma = rec.boundary_density(M_b);
  g.perimeter = 2.0 * kPi * std::accumulate(sigma.begin(), sigma.end(), 0.0) / M_b;
  const auto fp = rec.fprime.on_circle(1.0, M_b);
  double len = 0.0;
  for (const auto& v : fp) len += std::abs(v);
  g.perimeter_truncated = 2.0 * kPi * len / M_b;

  g.centroid = moments_contour(rec, 1, M_b) / g.area;

  const auto pts = rec.f.on_circle(1.0, M_b);
  double s = 0.0;
  for (const auto& p : pts) s += std::abs(p - g.centroid);
  g.radius_mean = s / M_b;
  double s2 = 0.0;
  for (const auto& p : pts) {
    const double d = std::abs(p - g.centroid) - g.radius_mean;
    s2 += d * d;
  }
  g.radius_std = std::sqrt(s2 / M_b);
  g.circularity_deficit = g.radius_std / g.radius_mean;
  return g;
}

double grid_area(const ConformalMapRecord& rec, const PolarGrid& grid) {
  auto field = evaluate_on_grid(rec.fprime, grid);
  for (auto& v : field.values()) v = std::norm(v);
  return kPi * integrate(field).real();
}

cplx moments_area(const ConformalMapRecord& rec, int n, const PolarGrid& grid) {
  require(n >= 0, ErrorCode::invalid_argument, "moment order must be >= 0");
  auto field = evaluate_on_grid(rec.f, grid);
  const auto fp = evaluate_on_grid(rec.fprime, grid);
  for (size_t i = 0; i < field.values().size(); ++i) {
    auto& v = field.values()[i];
    v = detail::ipow(v, n) * std::norm(fp.values()[i]);
  }
  return kPi * integrate(field);
}

cplx moments_contour(const ConformalMapRecord& rec, int n, int M_b) {
  require(n >= 0, ErrorCode::invalid_argument, "moment order must be >= 0");
  const auto f = rec.f.on_circle(1.0, M_b);
  const auto fp = rec.fprime.on_circle(1.0, M_b);
  cplx acc{};
  for (int j = 0; j < M_b; ++j) {
    const double t = 2.0 * kPi * j / M_b;
    acc += detail::ipow(f[j], n) * std::conj(f[j]) * fp[j] * std::polar(1.0, t);
  }
  return kPi * acc / static_cast<double>(M_b);
}

MomentCurve moment_curve(const TrigPolynomial& mu, int n, const std::vector<double>& a_list,
                         const PolarGrid& grid, double step) {
  require(n >= 1, ErrorCode::invalid_argument, "moment order must be >= 1");
  require(step > 0.0, ErrorCode::invalid_argument, "finite-difference step must be positive");
  const auto P = poisson_extend(mu, grid);
  auto moment = [&](double a) {
    PolarField field(grid);
    for (int j = 0; j < grid.radial_nodes(); ++j) {
      for (int k = 0; k < grid.angles; ++k) {
        const cplx z = std::polar(grid.radii[j], grid.angle(k));
        field.at(j, k) = detail::ipow(z, n) * std::exp(-2.0 * a * P.at(j, k).real());
      }
    }
    return integrate(field);
  };
  MomentCurve out;
  out.n = n;
  out.a = a_list;
  out.step = step;
  for (double a : a_list) out.values.push_back(moment(a));
  out.derivative_fd = (moment(step) - moment(-step)) / (2.0 * step);
  out.derivative_analytic = -2.0 * mu[-n] / static_cast<double>(n + 1);
  return out;
}

}  // namespace qdomain
