#include "qdomain/disk_ops.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "fft.hpp"
#include "ipow.hpp"
#include "qdomain/error.hpp"

namespace qdomain {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Gauss-Legendre nodes/weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  const auto zeros = boost::math::legendre_p_zeros<double>(n);
  x.clear();
  w.clear();
  for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
    if (*it == 0.0) continue;
    x.push_back(-*it);
  }
  if (n % 2 == 1) x.push_back(0.0);
  for (double z : zeros)
    if (z != 0.0) x.push_back(z);
  for (double xi : x) {
    const double dp = boost::math::legendre_p_prime(n, xi);
    w.push_back(2.0 / ((1.0 - xi * xi) * dp * dp));
  }
}

double poisson_kernel(double r, double t) {
  const double s = std::sin(0.5 * t);
  return (1.0 - r) * (1.0 + r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s);
}

}  // namespace

PolarGrid PolarGrid::disk(int radial_nodes, int angles) { return annulus(0.0, radial_nodes, angles); }

PolarGrid PolarGrid::annulus(double r_inner, int radial_nodes, int angles) {
  require(radial_nodes >= 1, ErrorCode::invalid_argument, "need at least one radial node");
  require(angles >= 1, ErrorCode::invalid_argument, "need at least one angle");
  require(r_inner >= 0.0 && r_inner < 1.0, ErrorCode::invalid_argument, "annulus inner radius must lie in [0,1)");
  std::vector<double> x, w;
  gauss_legendre(radial_nodes, x, w);
  PolarGrid g;
  g.angles = angles;
  const double half = 0.5 * (1.0 - r_inner);
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = r_inner + half * (1.0 + x[i]);
    g.radii.push_back(r);
    g.weights.push_back(w[i] * half * 2.0 * r);
  }
  return g;
}

double PolarGrid::angle(int k) const { return kTwoPi * k / angles; }

PolarField::PolarField(PolarGrid grid) : grid_(std::move(grid)) {
  v_.assign(static_cast<size_t>(grid_.radial_nodes()) * grid_.angles, cplx{});
}

PolarField::PolarField(PolarGrid grid, const std::function<cplx(double, double)>& fn)
    : PolarField(std::move(grid)) {
  for (int j = 0; j < grid_.radial_nodes(); ++j)
    for (int k = 0; k < grid_.angles; ++k) at(j, k) = fn(grid_.radii[j], grid_.angle(k));
}

double PolarField::sup_abs() const {
  double s = 0.0;
  for (const auto& v : v_) s = std::max(s, std::abs(v));
  return s;
}

double PolarField::min_real() const {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& v : v_) s = std::min(s, v.real());
  return s;
}

bool PolarField::is_real(double tol) const {
  return std::all_of(v_.begin(), v_.end(), [tol](cplx v) { return std::abs(v.imag()) <= tol; });
}

bool PolarField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(),
                     [](cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

PolarField& PolarField::operator*=(const PolarField& other) {
  require(other.v_.size() == v_.size(), ErrorCode::invalid_argument, "field shapes differ");
  for (size_t i = 0; i < v_.size(); ++i) v_[i] *= other.v_[i];
  return *this;
}

cplx integrate(const PolarField& field) {
  const auto& g = field.grid();
  cplx total{};
  for (int j = 0; j < g.radial_nodes(); ++j) {
    cplx row{};
    for (const auto& v : field.row(j)) row += v;
    total += g.weights[j] * row / static_cast<double>(g.angles);
  }
  return total;
}

PolarField poisson_extend(const TrigPolynomial& h, const PolarGrid& grid) {
  const int N = h.cutoff();
  const int M = grid.angles;
  require(N <= grid.max_cutoff(), ErrorCode::aliasing,
          "cutoff " + std::to_string(N) + " exceeds grid resolution (M=" + std::to_string(M) + ")");
  PolarField field(grid);
  std::vector<cplx> c(static_cast<size_t>(M));
  for (int j = 0; j < grid.radial_nodes(); ++j) {
    const double r = grid.radii[j];
    std::fill(c.begin(), c.end(), cplx{});
    double rn = 1.0;
    for (int n = 0; n <= N; ++n) {
      c[static_cast<size_t>(n)] += h[n] * rn;
      if (n > 0) c[static_cast<size_t>(M - n)] += h[-n] * rn;
      rn *= r;
    }
    auto row = detail::synthesize(c);
    if (h.is_real())
      for (auto& v : row) v = {v.real(), 0.0};
    std::copy(row.begin(), row.end(), field.values().begin() + static_cast<long>(j) * M);
  }
  return field;
}

TrigPolynomial balayage(const PolarField& G, int cutoff) {
  const auto& grid = G.grid();
  const int M = grid.angles;
  require(cutoff <= grid.max_cutoff(), ErrorCode::aliasing,
          "balayage cutoff " + std::to_string(cutoff) + " exceeds grid resolution");
  const bool real = G.is_real(1e-13 * std::max(1.0, G.sup_abs()));
  std::vector<cplx> acc(static_cast<size_t>(2 * cutoff + 1), cplx{});
  for (int j = 0; j < grid.radial_nodes(); ++j) {
    const auto g = detail::analyze(G.row(j));
    const double r = grid.radii[j];
    const double w = grid.weights[j];
    double rn = 1.0;
    for (int n = 0; n <= cutoff; ++n) {
      acc[static_cast<size_t>(cutoff + n)] += w * rn * g[static_cast<size_t>(n)];
      if (n > 0) acc[static_cast<size_t>(cutoff - n)] += w * rn * g[static_cast<size_t>(M - n)];
      rn *= r;
    }
  }
  TrigPolynomial out(cutoff, real);
  for (int n = -cutoff; n <= cutoff; ++n) {
    if (real && n < 0) continue;
    out.set(n, acc[static_cast<size_t>(cutoff + n)]);
  }
  if (real) out.symmetrize();
  return out;
}

namespace {

// Globally adaptive Gauss-Kronrod: bisect the panel with the largest error
// estimate until the total falls below rel * int |f|.
cplx integrate_adaptive(const std::function<cplx(double)>& f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  constexpr double rel = 1e-13;
  constexpr int max_panels = 4000;
  struct Panel {
    double a, b;
    cplx value;
    double err, l1;
    bool operator<(const Panel& o) const { return err < o.err; }
  };
  auto eval = [&](double x, double y) {
    Panel p{x, y, {}, 0.0, 0.0};
    p.value = gauss_kronrod<double, 31>::integrate(f, x, y, 0, 0.0, &p.err, &p.l1);
    p.err *= 0.5 * (y - x);  // Boost reports the error on the reference interval
    return p;
  };
  std::priority_queue<Panel> panels;
  panels.push(eval(a, b));
  cplx total = panels.top().value;
  double err = panels.top().err, l1 = panels.top().l1;
  for (int count = 1; err > rel * l1 && count < max_panels; ++count) {
    const Panel p = panels.top();
    panels.pop();
    const double mid = 0.5 * (p.a + p.b);
    const Panel left = eval(p.a, mid), right = eval(mid, p.b);
    total += left.value + right.value - p.value;
    err += left.err + right.err - p.err;
    l1 += left.l1 + right.l1 - p.l1;
    panels.push(left);
    panels.push(right);
  }
  return total;
}

}  // namespace

cplx poisson_angular_quadrature(double r, double phi, const std::function<cplx(double)>& g) {
  auto integrand = [&](double t) { return poisson_kernel(r, phi - t) * g(t); };
  const cplx left = integrate_adaptive(integrand, phi - std::numbers::pi, phi);
  const cplx right = integrate_adaptive(integrand, phi, phi + std::numbers::pi);
  return (left + right) / kTwoPi;
}

std::vector<cplx> balayage_bruteforce(const PolarField& G, int M_out) {
  const auto& grid = G.grid();
  const int M = grid.angles;
  const double cost = static_cast<double>(grid.radial_nodes()) * M * M_out;
  require(cost <= 1e9, ErrorCode::too_expensive,
          "brute-force balayage refused: Nr*M*M_out = " + std::to_string(cost) + " > 1e9");

  // Trigonometric interpolant of each row by direct summation; the Nyquist
  // mode of an even M is split evenly between +M/2 and -M/2.
  struct Mode {
    int n;
    cplx c;
  };
  std::vector<std::vector<Mode>> rows(static_cast<size_t>(grid.radial_nodes()));
  for (int j = 0; j < grid.radial_nodes(); ++j) {
    const auto v = G.row(j);
    std::vector<Mode> modes;
    double largest = 0.0;
    const int lo = -((M - 1) / 2), hi = M / 2;
    for (int n = lo; n <= hi; ++n) {
      cplx c{};
      for (int k = 0; k < M; ++k) c += v[static_cast<size_t>(k)] * std::polar(1.0, -kTwoPi * n * k / M);
      c /= static_cast<double>(M);
      if (M % 2 == 0 && n == M / 2) {
        modes.push_back({n, 0.5 * c});
        modes.push_back({-n, 0.5 * c});
      } else {
        modes.push_back({n, c});
      }
      largest = std::max(largest, std::abs(c));
    }
    std::erase_if(modes, [&](const Mode& m) { return std::abs(m.c) <= 1e-15 * largest; });
    rows[static_cast<size_t>(j)] = std::move(modes);
  }

  std::vector<cplx> out(static_cast<size_t>(M_out), cplx{});
  for (int o = 0; o < M_out; ++o) {
    const double phi = kTwoPi * o / M_out;
    cplx total{};
    for (int j = 0; j < grid.radial_nodes(); ++j) {
      const auto& modes = rows[static_cast<size_t>(j)];
      auto interp = [&](double t) {
        cplx s{};
        for (const auto& m : modes) s += m.c * std::polar(1.0, m.n * t);
        return s;
      };
      total += grid.weights[j] * poisson_angular_quadrature(grid.radii[j], phi, interp);
    }
    out[static_cast<size_t>(o)] = total;
  }
  return out;
}

TrigPolynomial operator_K(const TrigPolynomial& h, const PolarGrid& grid) {
  return balayage(poisson_extend(h, grid), h.cutoff());
}

std::pair<cplx, cplx> fubini_check(const TrigPolynomial& h, const PolarField& G) {
  PolarField product = poisson_extend(h, G.grid());
  product *= G;
  const cplx interior = integrate(product);
  const auto TG = balayage(G, h.cutoff());
  cplx boundary{};
  for (int n = -h.cutoff(); n <= h.cutoff(); ++n) boundary += h[n] * TG[-n];
  return {interior, boundary};
}

MomentCheck poisson_moment(int n, cplx zeta, int radial_nodes) {
  require(n >= 1, ErrorCode::invalid_argument, "poisson_moment needs n >= 1");
  require(std::abs(std::abs(zeta) - 1.0) < 1e-12, ErrorCode::invalid_argument, "zeta must lie on the unit circle");
  const auto grid = PolarGrid::disk(radial_nodes, 1);
  const double phi = std::arg(zeta);
  cplx total{};
  for (int j = 0; j < grid.radial_nodes(); ++j) {
    const double r = grid.radii[j];
    auto zn = [&](double t) { return detail::ipow(r, n) * std::polar(1.0, n * t); };
    total += grid.weights[j] * poisson_angular_quadrature(r, phi, zn);
  }
  return {total, detail::ipow(zeta, n) / static_cast<double>(n + 1)};
}

double poisson_integral_direct(const TrigPolynomial& density, cplx z) {
  const double r = std::abs(z);
  require(r < 1.0, ErrorCode::invalid_argument, "point must lie inside the disk");
  auto h = [&](double t) {
    cplx s{};
    for (int n = -density.cutoff(); n <= density.cutoff(); ++n)
      if (density[n] != cplx{}) s += density[n] * std::polar(1.0, n * t);
    return s;
  };
  return poisson_angular_quadrature(r, std::arg(z), h).real();
}

}  // namespace qdomain
