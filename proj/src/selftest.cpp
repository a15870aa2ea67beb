#include "qdomain/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace qdomain {
namespace {

// Smooth bounded field with angular modes |m| <= modes.
PolarField random_field(const PolarGrid& grid, int modes, std::mt19937_64& rng) {
  struct Term {
    int m, p;
    cplx amp;
  };
  std::vector<Term> terms;
  for (int m = -modes; m <= modes; ++m) {
    const int p = static_cast<int>(uniform01(rng) * 4);
    terms.push_back({m, p, cplx(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1) / (1.0 + std::abs(m))});
  }
  return PolarField(grid, [&](double r, double theta) {
    cplx s = 1.0;
    for (const auto& t : terms) s += t.amp * std::pow(r, t.p) * std::polar(1.0, t.m * theta);
    return s;
  });
}

}  // namespace

std::string SelftestReport::table() const {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-22s %-14s %-14s %s\n", "check", "max error", "tolerance", "status");
  os << line;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-22s %-14.3e %-14.1e %s\n", c.name.c_str(), c.error, c.tolerance,
                  c.passed ? "ok" : "FAIL");
    os << line;
  }
  os << (passed ? "selftest passed\n" : "selftest FAILED: " + first_failure + "\n");
  return os.str();
}

SelftestReport run_selftest(const RunConfig& cfg) {
  const auto& s = cfg.solver;
  SelftestReport rep;
  auto record = [&](const std::string& name, double err, double tol) {
    const bool ok = std::isfinite(err) && err <= tol;
    rep.checks.push_back({name, err, tol, ok});
    if (!ok && rep.passed) {
      rep.passed = false;
      rep.first_failure = name;
    }
  };
  std::mt19937_64 rng(s.seed);

  auto grid = PolarGrid::disk(s.Nr, s.M);
  if (cfg.selftest_fault == "radial_weights")
    for (auto& w : grid.weights) w *= 1.01;

  {
    const int top = std::min(64, s.N);
    double err = 0.0;
    for (int n = -top; n <= top; ++n) {
      const auto e = TrigPolynomial::exponential(n, s.N);
      const auto diff = operator_K(e, grid) - (1.0 / (std::abs(n) + 1.0)) * e;
      err = std::max(err, sup_norm(diff, s.M));
    }
    record("balayage diagonal", err, 1e-10);
  }
  {
    const auto small = PolarGrid::disk(16, 64);
    const auto G = random_field(small, 12, rng);
    const auto fast = sample(balayage(G, 12), 32);
    const auto slow = balayage_bruteforce(G, 32);
    double err = 0.0;
    for (size_t i = 0; i < fast.size(); ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
    record("balayage oracle", err, 1e-8);
  }
  {
    double err = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      TrigPolynomial h(std::min(16, s.N));
      for (int n = 0; n <= h.cutoff(); ++n)
        h.set(n, n == 0 ? cplx(2 * uniform01(rng) - 1) : cplx(2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1));
      const auto G = random_field(grid, 8, rng);
      const auto [interior, boundary] = fubini_check(h, G);
      err = std::max(err, std::abs(interior - boundary));
    }
    record("fubini pairing", err, 1e-9);
  }
  {
    double err = 0.0;
    for (int k = 0; k < 8; ++k) {
      const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * k / 8 + 0.1);
      for (int n = 1; n <= 16; ++n) {
        const auto m = poisson_moment(n, zeta, s.Nr);
        err = std::max(err, std::abs(m.numeric - m.analytic));
      }
    }
    record("poisson moment", err, 1e-9);
  }
  {
    const auto w = 0.05 * random_x4(s.N, 4, rng);
    const auto rec = build_map(w, TrigPolynomial(s.N), 0.0, Mode::singular, std::max(cfg.series_degree(), 128));
    const auto mgrid = PolarGrid::disk(s.Nr, std::max(s.M, 1024));
    const int M_b = 8 * rec.series_degree;
    double err = 0.0;
    for (int n = 0; n <= 16; ++n) err = std::max(err, std::abs(moments_area(rec, n, mgrid) - moments_contour(rec, n, M_b)));
    record("green cross-check", err, 1e-8);
    record("area formula", std::abs(geometry(rec, M_b).area - grid_area(rec, mgrid)), 1e-9);
  }
  return rep;
}

}  // namespace qdomain
