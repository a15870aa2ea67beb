#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qdomain/dss_solver.hpp"
#include "qdomain/error.hpp"

using namespace qdomain;

namespace {

SolverConfig small_config(Mode mode, int depth = 0) {
  SolverConfig cfg;
  cfg.N = 63;
  cfg.M = 128;
  cfg.Nr = 48;
  cfg.mode = mode;
  cfg.measure = riesz_product(depth, cfg.N);
  return cfg;
}

TrigPolynomial pi0(const MeasureSpec& mu) {
  auto d = mu.density;
  d.set(0, 0.0);
  return d;
}

double mode4_over_a(const SolverConfig& base, double a) {
  SolverConfig cfg = base;
  cfg.a_grid = {0.0, a};
  const auto br = solve_branch(cfg);
  REQUIRE(br.points.size() == 2);
  return br.points[1].W[4].real() / a;
}

}  // namespace

TEST_CASE("a grid construction") {
  const auto g = make_a_grid(0.08, 4, Spacing::geometric);
  REQUIRE(g.size() == 5);
  CHECK(g[0] == 0.0);
  CHECK(g[1] == doctest::Approx(0.01));
  CHECK(g[4] == doctest::Approx(0.08));
  const auto l = make_a_grid(0.04, 4, Spacing::linear);
  CHECK(l[2] == doctest::Approx(0.02));
  SolverConfig cfg;
  cfg.a_grid = {0.0, 0.02, 0.01};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.a_grid = {0.01};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.a_grid = {0.0};
  cfg.tol_residual = 0.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("log_density by mode") {
  std::mt19937_64 rng(1);
  const auto W = 0.1 * random_x4(63, 4, rng);
  const DssProblem sing(small_config(Mode::singular));
  CHECK((sing.log_density(W, 0.3) - W).l2_norm() == 0.0);
  const DssProblem cons(small_config(Mode::consistent));
  const auto L = cons.log_density(TrigPolynomial(63), 0.1);
  CHECK(L[0].real() == doctest::Approx(0.1));
  CHECK(L[4].real() == doctest::Approx(0.05));
  CHECK(L[-4].real() == doctest::Approx(0.05));
}

TEST_CASE("jacobian_field basics") {
  const DssProblem p(small_config(Mode::singular));
  for (const auto& v : p.jacobian_field(TrigPolynomial(63), 0.0).values()) CHECK(v == cplx(1.0));
  for (const auto& v : p.jacobian_field(TrigPolynomial(63), 0.2).values()) CHECK(v.real() <= 1.0);
  std::mt19937_64 rng(2);
  try {
    p.jacobian_field(200.0 * random_x4(63, 3, rng), 0.0);
    FAIL("no overflow guard");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::overflow_guard);
  }
}

TEST_CASE("jacobian_field agrees with the Herglotz series") {
  std::mt19937_64 rng(3);
  const auto cfg = small_config(Mode::singular, 1);
  const DssProblem p(cfg);
  const auto W = 0.2 * random_x4(63, 6, rng);
  const double a = 0.05;
  const auto G = p.jacobian_field(W, a);
  const auto F = herglotz_coeffs(W + a * cfg.measure.density);
  double err = 0.0;
  for (int j = 0; j < p.grid().radial_nodes(); j += 5)
    for (int k = 0; k < p.grid().angles; k += 7) {
      const cplx z = std::polar(p.grid().radii[j], p.grid().angle(k));
      err = std::max(err, std::abs(G.at(j, k) - std::exp(-2 * F.evaluate(z).real())));
    }
  CHECK(err <= 1e-10);
}

TEST_CASE("psi at the origin vanishes") {
  const DssProblem p(small_config(Mode::singular));
  const auto r = p.psi(TrigPolynomial(63), 0.0);
  CHECK(sup_norm(r.psi, 128) <= 1e-14);
  CHECK(std::abs(r.log_C) <= 1e-14);
}

TEST_CASE("psi linearizes to -2 K mu in a") {
  const DssProblem p(small_config(Mode::singular));
  const double h = 1e-4;
  const double fd = (p.psi(TrigPolynomial(63), h).psi[4].real() - p.psi(TrigPolynomial(63), -h).psi[4].real()) / (2 * h);
  CHECK(fd == doctest::Approx(-0.2).epsilon(1e-7));
  CHECK(p.psi(TrigPolynomial(63), 1e-3).psi[4].real() == doctest::Approx(-1e-3 / 5).epsilon(2e-3));
}

TEST_CASE("consistent substitution W = -a Pi0 mu zeroes psi") {
  const auto cfg = small_config(Mode::consistent, 1);
  const DssProblem p(cfg);
  for (double a : {0.01, 0.05, 0.2}) {
    const auto r = p.psi(-a * pi0(cfg.measure), a);
    CHECK(sup_norm(r.psi, cfg.M) <= 1e-12);
    CHECK(r.log_C == doctest::Approx(-a).epsilon(1e-12));
  }
}

TEST_CASE("apply_A_inv scales X4 modes") {
  TrigPolynomial h(16);
  h.set(4, 1.0);
  auto out = apply_A_inv(h);
  CHECK(out[4].real() == doctest::Approx(5.0 / 3));
  CHECK(out[-4].real() == doctest::Approx(5.0 / 3));
  TrigPolynomial h8(16);
  h8.set(8, 1.0);
  CHECK(apply_A_inv(h8)[8].real() == doctest::Approx(9.0 / 7));
  h.set(0, 1.0);
  CHECK_THROWS_AS(apply_A_inv(h), Error);
  TrigPolynomial h2(16);
  h2.set(2, 1.0);
  CHECK_THROWS_AS(apply_A_inv(h2), Error);
}

TEST_CASE("apply_A_inv inverts I - 2K on X4") {
  std::mt19937_64 rng(5);
  const auto grid = PolarGrid::disk(64, 512);
  for (int trial = 0; trial < 5; ++trial) {
    const auto h = random_x4(255, 40, rng);
    const auto Ah = project_x4(h - 2.0 * operator_K(h, grid));
    CHECK(sup_norm(apply_A_inv(Ah) - h, 512) <= 1e-10);
  }
}

TEST_CASE("gamma_step fixes the origin") {
  const DssProblem p(small_config(Mode::singular));
  CHECK(sup_norm(p.gamma_step(TrigPolynomial(63), 0.0), 128) <= 1e-14);
}

TEST_CASE("gamma is a contraction near the branch") {
  auto cfg = small_config(Mode::singular, 1);
  cfg.a_grid = {0.0, 0.01};
  const auto br = solve_branch(cfg);
  REQUIRE(br.points.size() == 2);
  const DssProblem p(cfg);
  std::mt19937_64 rng(7);
  const auto& W = br.points[1].W;
  for (int trial = 0; trial < 5; ++trial) {
    const auto W1 = W + 1e-3 * random_x4(63, 8, rng);
    const auto W2 = W + 1e-3 * random_x4(63, 8, rng);
    const double num = sup_norm(p.gamma_step(W1, 0.01) - p.gamma_step(W2, 0.01), 128);
    CHECK(num <= 0.5 * sup_norm(W1 - W2, 128));
  }
  CHECK(br.points[1].contraction_est <= 0.75);
}

TEST_CASE("contraction iterates converge with decreasing residual") {
  const DssProblem p(small_config(Mode::singular));
  TrigPolynomial W(63);
  std::vector<double> res;
  for (int it = 0; it < 12; ++it) {
    res.push_back(sup_norm(p.psi(W, 0.01).psi, 128));
    W = p.gamma_step(W, 0.01);
  }
  for (size_t i = 2; i < res.size(); ++i)
    if (res[i - 1] > 1e-14) CHECK(res[i] < res[i - 1]);
  CHECK(res.back() <= 1e-13);
}

TEST_CASE("dpsi at the origin is I - 2K") {
  const DssProblem p(small_config(Mode::singular));
  TrigPolynomial H(63);
  H.set(4, 1.0);
  const auto D = p.dpsi(TrigPolynomial(63), 0.0, H);
  CHECK(D[4].real() == doctest::Approx(3.0 / 5).epsilon(1e-12));
  CHECK(std::abs(D[8]) <= 1e-14);
}

TEST_CASE("dpsi matches central differences of psi") {
  std::mt19937_64 rng(11);
  const DssProblem p(small_config(Mode::singular, 1));
  const auto W = 0.05 * random_x4(63, 6, rng);
  const auto H = random_x4(63, 10, rng);
  const double a = 0.02;
  const auto D = p.dpsi(W, a, H);
  std::vector<double> err;
  for (double eps : {1e-4, 1e-5}) {
    const auto fd = (1.0 / (2 * eps)) * (p.psi(W + eps * H, a).psi - p.psi(W - eps * H, a).psi);
    err.push_back(sup_norm(fd - D, 128) / sup_norm(D, 128));
  }
  CHECK(err[0] <= 1e-6);
  CHECK(err[1] <= 1e-6);
  // O(eps^2): a decade in eps buys two decades until roundoff (~1e-11) sets in.
  CHECK(err[1] <= std::max(0.05 * err[0], 1e-10));
}

TEST_CASE("dpsi is linear") {
  std::mt19937_64 rng(13);
  const DssProblem p(small_config(Mode::singular));
  const auto W = 0.05 * random_x4(63, 6, rng);
  const auto H1 = random_x4(63, 10, rng), H2 = random_x4(63, 10, rng);
  const auto lhs = p.dpsi(W, 0.01, 0.7 * H1 + (-1.3) * H2);
  const auto rhs = 0.7 * p.dpsi(W, 0.01, H1) + (-1.3) * p.dpsi(W, 0.01, H2);
  CHECK(sup_norm(lhs - rhs, 128) <= 1e-11);
}

TEST_CASE("a = 0 branch point is the unit disk") {
  auto cfg = small_config(Mode::singular);
  const auto br = solve_branch(cfg);
  REQUIRE(br.points.size() == 1);
  CHECK(br.points[0].W.l2_norm() == 0.0);
  CHECK(br.points[0].C == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(br.points[0].c == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("first-order branch formula") {
  // W_1 = 2 (I - 2K)^{-1} K mu from the operators, against 2 mu_n / (|n| - 1).
  const auto grid = PolarGrid::disk(64, 512);
  const auto mu = riesz_product(2, 255);
  const auto W1 = 2.0 * apply_A_inv(project_x4(operator_K(pi0(mu), grid)));
  for (int n = 4; n <= riesz_max_frequency(2); n += 4) CHECK(std::abs(W1[n] - 2.0 * mu.density[n] / (n - 1.0)) <= 1e-12);
  CHECK(W1[4].real() == doctest::Approx(1.0 / 3));

  // It solves the linearized equation D_W Psi [W_1] + d_a Psi = 0 at the origin.
  auto cfg = small_config(Mode::singular, 2);
  const DssProblem p(cfg);
  const auto W1s = W1.truncated(63);
  const double h = 1e-5;
  const auto dA = (1.0 / (2 * h)) * (p.psi(TrigPolynomial(63), h).psi - p.psi(TrigPolynomial(63), -h).psi);
  const auto lin = p.dpsi(TrigPolynomial(63), 0.0, W1s) + dA;
  CHECK(sup_norm(lin, 128) <= 1e-6 * sup_norm(dA, 128));
}

TEST_CASE("singular branch slope tends to 1/3") {
  const auto cfg = small_config(Mode::singular);
  const double r1 = mode4_over_a(cfg, 1e-2), r2 = mode4_over_a(cfg, 5e-3), r3 = mode4_over_a(cfg, 2.5e-3);
  for (auto [r, a] : {std::pair{r1, 1e-2}, {r2, 5e-3}, {r3, 2.5e-3}}) CHECK(std::abs(r - 1.0 / 3) <= 2 * a);
  // The deviation is even in a: r(a) = 1/3 + k a^2 + O(a^3).
  const double d1 = r1 - 1.0 / 3, d2 = r2 - 1.0 / 3, d3 = r3 - 1.0 / 3;
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.05));
  CHECK(d2 / d3 == doctest::Approx(4.0).epsilon(0.05));
  const double R1 = (4 * r2 - r1) / 3, R2 = (4 * r3 - r2) / 3;
  CHECK(std::abs(R1 - 1.0 / 3) <= 1e-8);
  CHECK(std::abs(R2 - 1.0 / 3) <= std::abs(R1 - 1.0 / 3) + 1e-10);
}

TEST_CASE("consistent branch collapses to the disk") {
  auto cfg = small_config(Mode::consistent);
  cfg.a_grid = make_a_grid(0.05, 3, Spacing::geometric);
  const auto br = solve_branch(cfg);
  REQUIRE(br.points.size() == 4);
  for (const auto& pt : br.points) {
    CHECK(sup_norm(pt.W + pt.a * pi0(cfg.measure), cfg.M) <= 1e-9);
    CHECK(pt.log_C == doctest::Approx(-pt.a).epsilon(1e-10));
    if (pt.a > 0) CHECK(pt.W[4].real() == doctest::Approx(-pt.a / 2).epsilon(1e-9));
  }
}

TEST_CASE("singular branch is nontrivial and certified") {
  auto cfg = small_config(Mode::singular, 1);
  cfg.a_grid = make_a_grid(0.02, 3, Spacing::geometric);
  const auto br = solve_branch(cfg);
  CHECK(br.stop_reason == "completed");
  REQUIRE(br.points.size() == 4);
  for (const auto& pt : br.points) {
    CAPTURE(pt.a);
    CHECK(pt.residual <= cfg.tol_residual);
    CHECK(pt.C > 0.0);
    CHECK(in_x4(pt.W));
    CHECK(pt.projection_correction < 1e-12);
    CHECK(pt.contraction_est <= 0.75);
    CHECK(sup_norm(pt.W, cfg.M) >= pt.a * 0.5 / 2);
    CHECK(verify_fixed_point(pt, cfg, 2) <= 10 * cfg.tol_residual);
  }
}

TEST_CASE("Newton and contraction reach the same solution") {
  auto cfg = small_config(Mode::singular, 1);
  cfg.a_grid = {0.0, 0.01, 0.02};
  const auto a = solve_branch(cfg);
  cfg.use_newton = true;
  const auto b = solve_branch(cfg);
  REQUIRE(a.points.size() == 3);
  REQUIRE(b.points.size() == 3);
  for (size_t i = 0; i < 3; ++i) CHECK(sup_norm(a.points[i].W - b.points[i].W, cfg.M) <= 1e-10);
  CHECK(b.points[2].iterations <= a.points[2].iterations);
}

TEST_CASE("large a leaves the small-data regime") {
  auto cfg = small_config(Mode::singular);
  cfg.a_grid = make_a_grid(10.0, 8, Spacing::geometric);
  const auto br = solve_branch(cfg);
  CHECK(br.points.size() < cfg.a_grid.size());
  CHECK((br.stop_reason == "contraction_lost" || br.stop_reason == "positivity_lost"));
  CHECK(br.stopped_at_a > 0.0);
  CHECK_FALSE(br.stop_detail.empty());
}

TEST_CASE("solve_branch is deterministic") {
  auto cfg = small_config(Mode::singular, 1);
  cfg.a_grid = {0.0, 0.01};
  const auto a = solve_branch(cfg), b = solve_branch(cfg);
  for (int n = -63; n <= 63; ++n) CHECK(a.points[1].W[n] == b.points[1].W[n]);
  CHECK(a.points[1].contraction_est == b.points[1].contraction_est);
}
