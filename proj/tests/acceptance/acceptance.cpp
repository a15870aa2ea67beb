// Acceptance run at the default resolution. One PASS/FAIL line per criterion;
// the exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qdomain/audit.hpp"
#include "qdomain/conformal.hpp"
#include "qdomain/dss_solver.hpp"
#include "qdomain/io.hpp"
#include "qdomain/qdomain.h"

using namespace qdomain;

namespace {

constexpr double kPi = 3.14159265358979323846;

int failed = 0;

void check(bool ok, std::string& why, const std::string& what) {
  if (!ok) why += (why.empty() ? "" : "; ") + what;
}

void run(int id, const char* title, const std::function<std::string()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string why;
  try {
    why = body();
  } catch (const std::exception& e) {
    why = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = why.empty();
  failed += !ok;
  std::printf("%s %2d %s (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id, title, secs, ok ? "" : ": ", why.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double eval(const TrigPolynomial& p, double t) {
  cplx s = 0.0;
  for (int n = -p.cutoff(); n <= p.cutoff(); ++n) s += p[n] * std::polar(1.0, n * t);
  return s.real();
}

double field_sup(const PolarField& G) {
  double s = 0.0;
  for (const auto& v : G.values()) s = std::max(s, std::abs(v));
  return s;
}

// Real field bounded by 1: a few r^p cos(m theta + phase) terms plus a bump.
PolarField random_field(const PolarGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  struct Term {
    int p, m;
    double amp, phase;
  };
  std::vector<Term> terms;
  for (int k = 0; k < 6; ++k)
    terms.push_back({int(3 * (U(rng) + 1)), int(8 * (U(rng) + 1)), 0.1 * U(rng), kPi * U(rng)});
  const double x0 = 0.7 * U(rng), y0 = 0.7 * U(rng), s = 5 + 10 * (U(rng) + 1);
  return PolarField(g, [=](double r, double th) {
    double v = 0.2 * std::exp(-s * ((r * std::cos(th) - x0) * (r * std::cos(th) - x0) +
                                    (r * std::sin(th) - y0) * (r * std::sin(th) - y0)));
    for (const auto& t : terms) v += t.amp * std::pow(r, t.p) * std::cos(t.m * th + t.phase);
    return cplx(v);
  });
}

SolverConfig base_config(Mode mode, std::vector<double> a_grid) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.measure = riesz_product(0, cfg.N);
  cfg.a_grid = std::move(a_grid);
  return cfg;
}

constexpr int kSeries = 1020;

struct SolvedBranch {
  SolverConfig cfg;
  Branch branch;
  std::vector<ConformalMapRecord> maps;
};

SolvedBranch solve_and_map(const SolverConfig& cfg) {
  SolvedBranch out{cfg, solve_branch(cfg), {}};
  for (const auto& p : out.branch.points) out.maps.push_back(build_map(p, cfg, kSeries));
  return out;
}

}  // namespace

int main() {
  std::printf("qdomain %s acceptance, N=255 Nr=64 M=512 N_s=%d\n", version_string(), kSeries);

  const SolvedBranch consistent = solve_and_map(base_config(Mode::consistent, {0.0, 0.01, 0.02, 0.05}));
  const SolvedBranch singular = solve_and_map(base_config(Mode::singular, {0.0, 0.0025, 0.005, 0.01, 0.02}));

  run(1, "operator identities", [] {
    std::string why;
    const auto g = PolarGrid::disk(64, 512);
    double err = 0.0;
    for (int n = -64; n <= 64; ++n) {
      const auto e = TrigPolynomial::exponential(n, 255);
      err = std::max(err, sup_norm(operator_K(e, g) - (1.0 / (std::abs(n) + 1)) * e, 512));
    }
    check(err <= 1e-10, why, "K eigen error " + fmt("%.3g", err));

    double pm = 0.0;
    for (int n = 1; n <= 16; ++n)
      for (int k = 0; k < 8; ++k) {
        const cplx zeta = std::polar(1.0, 2 * kPi * k / 8 + 0.1);
        pm = std::max(pm, std::abs(poisson_moment(n, zeta).numeric - std::pow(zeta, n) / double(n + 1)));
      }
    check(pm <= 1e-9, why, "poisson moment error " + fmt("%.3g", pm));

    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const auto gf = PolarGrid::disk(64, 256);
    double fb = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      TrigPolynomial h(40);
      h.set(0, U(rng));
      for (int n = 1; n <= 40; ++n) h.set(n, cplx(U(rng), U(rng)) / double(n));
      const auto [a, b] = fubini_check(h, random_field(gf, rng));
      fb = std::max(fb, std::abs(a - b));
    }
    check(fb <= 1e-9, why, "fubini gap " + fmt("%.3g", fb));
    std::printf("     K %.2e  moments %.2e  fubini %.2e\n", err, pm, fb);
    return why;
  });

  run(2, "balayage oracle", [] {
    std::string why;
    std::mt19937_64 rng(103);
    const auto g = PolarGrid::disk(64, 256);
    const int M_out = 8;
    double err = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto G = random_field(g, rng);
      const auto fast = balayage(G, 127);
      const auto slow = balayage_bruteforce(G, M_out);
      for (int k = 0; k < M_out; ++k) err = std::max(err, std::abs(eval(fast, 2 * kPi * k / M_out) - slow[k].real()));
    }
    check(err <= 1e-8, why, "max gap " + fmt("%.3g", err));
    std::printf("     fast vs brute force %.2e over 20 fields\n", err);
    return why;
  });

  run(3, "Hoelder and strip bounds", [] {
    std::string why;
    const double alpha = 0.5;
    // One constant over 20 random fields, refit on the doubled grid.
    auto fit = [&](int Nr, int M) {
      std::mt19937_64 rng(107);
      const auto g = PolarGrid::disk(Nr, M);
      double C = 0.0;
      for (int trial = 0; trial < 20; ++trial) {
        const auto G = random_field(g, rng);
        C = std::max(C, holder_estimate(balayage(G, M / 2 - 1), alpha, M) / field_sup(G));
      }
      return C;
    };
    const double C1 = fit(64, 256), C2 = fit(128, 512);
    check(std::abs(C2 / C1 - 1) <= 0.2, why, "C_alpha unstable " + fmt("%.3g", C1) + " -> " + fmt("%.3g", C2));

    // Strip fields: sign(sin theta) on 1 - delta < r < 1.
    const std::vector<double> deltas{0.2, 0.1, 0.05};
    auto strip = [&](int Nr, int M) {
      std::vector<double> h;
      for (double d : deltas) {
        const auto g = PolarGrid::annulus(1 - d, Nr, M);
        const PolarField G(g, [](double, double th) { return cplx(std::sin(th) >= 0 ? 1.0 : -1.0); });
        h.push_back(holder_estimate(balayage(G, M / 2 - 1), alpha, M));
      }
      return h;
    };
    const auto h1 = strip(32, 1024), h2 = strip(64, 2048);
    double S1 = 0.0, S2 = 0.0;
    for (size_t i = 0; i < deltas.size(); ++i) {
      const double shape = std::pow(deltas[i], 1 - alpha) * std::log(2 / deltas[i]);
      S1 = std::max(S1, h1[i] / shape);
      S2 = std::max(S2, h2[i] / shape);
      std::printf("     delta %.2f  |T G| %.4f (doubled %.4f)  bound shape %.4f\n", deltas[i], h1[i], h2[i], shape);
    }
    for (size_t i = 1; i < deltas.size(); ++i) {
      check(h1[i] < h1[i - 1], why, "strip norm not decreasing at delta " + fmt("%.2f", deltas[i]));
      check(h2[i] < h2[i - 1], why, "doubled strip norm not decreasing at delta " + fmt("%.2f", deltas[i]));
    }
    check(std::abs(S2 / S1 - 1) <= 0.2, why, "strip constant unstable " + fmt("%.3g", S1) + " -> " + fmt("%.3g", S2));
    std::printf("     C_alpha %.4f -> %.4f   strip C %.4f -> %.4f\n", C1, C2, S1, S2);
    return why;
  });

  run(4, "rigidity witness (consistent mode)", [&] {
    std::string why;
    const auto& br = consistent.branch;
    check(br.stop_reason == "completed", why, "branch stopped: " + br.stop_reason);
    check(br.points.size() == 4, why, "accepted " + std::to_string(br.points.size()) + " of 4 points");
    const auto mu0 = consistent.cfg.measure.density - TrigPolynomial::constant(1.0, consistent.cfg.N);
    for (size_t i = 0; i < br.points.size(); ++i) {
      const auto& p = br.points[i];
      const auto& rec = consistent.maps[i];
      const double collapse = sup_norm(p.W + p.a * mu0, 2048);
      double map_err = std::abs(rec.f[1] - std::exp(-p.a));
      for (int k = 0; k <= rec.f.degree(); ++k)
        if (k != 1) map_err = std::max(map_err, std::abs(rec.f[k]));
      const auto rep = audit(rec);
      const auto& w = rep.weinberger;
      const double wd = std::max({w.id1_defect, w.id2_defect, w.volume_defect});
      std::printf("     a=%.3g  collapse %.2e  map %.2e  verdict %s  weinberger %.2e\n", p.a, collapse, map_err,
                  rep.verdict.disk ? "DISK" : "NON_DISK", wd);
      const std::string at = " at a=" + fmt("%.3g", p.a);
      check(collapse <= 1e-9, why, "collapse " + fmt("%.3g", collapse) + at);
      check(map_err <= 1e-9, why, "map deviation " + fmt("%.3g", map_err) + at);
      check(rep.verdict.disk, why, "verdict NON_DISK" + at);
      check(wd <= 1e-9, why, "weinberger defect " + fmt("%.3g", wd) + at);
    }
    return why;
  });

  run(5, "flexibility witness (singular mode)", [&] {
    std::string why;
    const auto& br = singular.branch;
    check(br.stop_reason == "completed", why, "branch stopped: " + br.stop_reason);
    check(br.points.size() == 5, why, "accepted " + std::to_string(br.points.size()) + " of 5 points");
    std::vector<double> deficits;
    for (size_t i = 0; i < br.points.size(); ++i) {
      const auto& p = br.points[i];
      const auto rep = audit(singular.maps[i]);
      deficits.push_back(rep.verdict.deficit);
      const std::string at = " at a=" + fmt("%.3g", p.a);
      check(p.residual <= 1e-11, why, "residual " + fmt("%.3g", p.residual) + at);
      if (p.a == 0.0) continue;
      const double slope = p.W[4].real() / p.a;
      std::printf("     a=%.4g  residual %.2e  W4/a %.8f  deficit %.4e  %s\n", p.a, p.residual, slope,
                  rep.verdict.deficit, rep.verdict.disk ? "DISK" : "NON_DISK");
      check(std::abs(slope - 1.0 / 3.0) <= 2 * p.a, why, "W4/a off by " + fmt("%.3g", slope - 1.0 / 3.0) + at);
      check(!rep.verdict.disk, why, "verdict DISK" + at);
    }
    for (size_t i = 2; i < deficits.size(); ++i) {
      const double ratio = deficits[i] / deficits[i - 1];
      std::printf("     deficit(%.4g)/deficit(%.4g) = %.4f\n", br.points[i].a, br.points[i - 1].a, ratio);
      check(ratio >= 1.8 && ratio <= 2.2, why, "deficit ratio " + fmt("%.4f", ratio));
    }

    // First-order slope rests on the linearization; check it by central differences.
    DssProblem prob(singular.cfg);
    std::mt19937_64 rng(109);
    double worst = 0.0;
    for (size_t i = 1; i < br.points.size(); ++i) {
      const auto& p = br.points[i];
      const auto H = random_x4(p.W.cutoff(), 16, rng);
      const double eps = 1e-5;
      const auto fd = (1.0 / (2 * eps)) * (prob.psi(p.W + eps * H, p.a).psi - prob.psi(p.W - eps * H, p.a).psi);
      const auto d = prob.dpsi(p.W, p.a, H);
      worst = std::max(worst, (fd - d).l2_norm() / d.l2_norm());
    }
    std::printf("     dpsi finite-difference relative error %.2e\n", worst);
    check(worst <= 1e-6, why, "dpsi relative error " + fmt("%.3g", worst));
    return why;
  });

  run(6, "quadrature certificate", [&] {
    std::string why;
    double fp = 0.0, rn = 0.0;
    for (const auto* sb : {&consistent, &singular}) {
      for (size_t i = 0; i < sb->branch.points.size(); ++i) {
        const auto& p = sb->branch.points[i];
        fp = std::max(fp, verify_fixed_point(p, sb->cfg, 2));
        const auto r = quadrature_residuals(sb->maps[i], p.c, 32);
        rn = std::max(rn, *std::max_element(r.begin(), r.end()));
      }
    }
    std::printf("     doubled-resolution fixed point %.2e   max R_n (n<=32) %.2e\n", fp, rn);
    check(fp <= 1e-9, why, "fixed-point defect " + fmt("%.3g", fp));
    check(rn <= 1e-9, why, "quadrature residual " + fmt("%.3g", rn));
    return why;
  });

  run(7, "moment obstruction", [] {
    std::string why;
    const auto mu = riesz_product(0, 255);
    const auto curve = moment_curve(mu.density, 4, {1e-3, 1e-2}, PolarGrid::disk(64, 512), 1e-3);
    const double dev = std::abs(curve.derivative_fd - cplx(-0.2));
    std::printf("     M4'(0) %.10f   M4(1e-3) %.4e   M4(1e-2) %.4e\n", curve.derivative_fd.real(),
                std::abs(curve.values[0]), std::abs(curve.values[1]));
    check(dev <= 1e-4, why, "M4'(0) off by " + fmt("%.3g", dev));
    for (size_t i = 0; i < curve.a.size(); ++i)
      check(std::abs(curve.values[i]) >= curve.a[i] / 10, why, "M4 too small at a=" + fmt("%.3g", curve.a[i]));
    return why;
  });

  run(8, "disk Weinberger audit", [] {
    std::string why;
    const auto rep = audit(disk_map(255, kSeries));
    const auto& w = rep.weinberger;
    auto near = [&](double got, double want, double tol, const char* name) {
      check(std::abs(got - want) <= tol, why, std::string(name) + " = " + fmt("%.15g", got));
    };
    near(w.I, kPi / 8, 1e-12, "I");
    near(w.M, kPi / 2, 1e-12, "M");
    near(w.B, 2 * kPi, 1e-12, "B");
    near(w.area, kPi, 1e-12, "area");
    near(rep.c, 0.5, 0.0, "c");
    near(w.id1_defect, 0, 1e-12, "first identity defect");
    near(w.id2_defect, 0, 1e-12, "second identity defect");
    near(w.volume_defect, 0, 1e-12, "volume defect");
    check(rep.grad_bound_excess == 0.0, why, "gradient excess " + fmt("%.3g", rep.grad_bound_excess));
    near(rep.normal_deriv_dev, 0, 1e-10, "normal derivative deviation");
    double ws = 0.0;
    for (const auto& e : rep.weak_serrin) ws = std::max(ws, std::abs(e.residual));
    near(ws, 0, 1e-10, "weak-Serrin residual");
    check(rep.weak_serrin.size() == 15, why, "expected 15 test monomials of degree <= 4");
    std::printf("     I %.2e  M %.2e  B %.2e  defects %.1e %.1e %.1e  normal %.1e  serrin %.1e\n", w.I - kPi / 8,
                w.M - kPi / 2, w.B - 2 * kPi, w.id1_defect, w.id2_defect, w.volume_defect, rep.normal_deriv_dev, ws);
    return why;
  });

  run(9, "geometry cross-checks", [&] {
    std::string why;
    const auto grid = PolarGrid::disk(64, 4096);
    double area = 0.0, green = 0.0, schw = 0.0;
    for (const auto* sb : {&consistent, &singular}) {
      for (const auto& rec : sb->maps) {
        area = std::max(area, std::abs(geometry(rec, 8 * kSeries).area - grid_area(rec, grid)));
        for (int n = 0; n <= 16; ++n)
          green = std::max(green, std::abs(moments_area(rec, n, grid) - moments_contour(rec, n, 8 * kSeries)));
        schw = std::max(schw, schwarzian_sup(rec, grid));
      }
    }
    std::printf("     area %.2e  green %.2e  schwarzian sup %.4e\n", area, green, schw);
    check(area <= 1e-9, why, "area gap " + fmt("%.3g", area));
    check(green <= 1e-8, why, "green gap " + fmt("%.3g", green));
    check(schw <= 2, why, "schwarzian sup " + fmt("%.3g", schw));
    const auto& maps = singular.maps;
    for (size_t i = 2; i < maps.size(); ++i) {
      const double ratio = schwarzian_sup(maps[i], grid) / schwarzian_sup(maps[i - 1], grid);
      std::printf("     S(%.4g)/S(%.4g) = %.4f\n", maps[i].a, maps[i - 1].a, ratio);
      check(std::abs(ratio / 2 - 1) <= 0.2, why, "schwarzian ratio " + fmt("%.4f", ratio));
    }
    return why;
  });

  run(10, "determinism", [] {
    std::string why;
    const char* config = R"({"measure": {"riesz_depth": 1}, "a_grid": {"a_max": 0.02, "points": 3}, "seed": 7})";
    std::string docs[2];
    for (auto& doc : docs) {
      qd_branch* b = nullptr;
      char* text = nullptr;
      if (qd_solve(config, &b) != QD_OK || qd_branch_to_json(b, &text) != QD_OK) {
        qd_branch_destroy(b);
        return std::string("solve failed: ") + qd_last_error();
      }
      doc = text;
      qd_free_string(text);
      qd_branch_destroy(b);
    }
    check(docs[0] == docs[1], why, "branch documents differ");
    std::printf("     %zu bytes, identical\n", docs[0].size());
    return why;
  });

  std::printf("%d of 10 criteria failed\n", failed);
  return failed;
}
