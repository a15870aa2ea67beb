#include "qdomain/dss_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "qdomain/error.hpp"

namespace qdomain {

std::string to_string(Mode mode) { return mode == Mode::singular ? "singular" : "consistent"; }

Mode mode_from_string(const std::string& name) {
  if (name == "singular") return Mode::singular;
  if (name == "consistent") return Mode::consistent;
  fail(ErrorCode::invalid_argument, "unknown mode '" + name + "' (expected singular|consistent)");
}

std::vector<double> make_a_grid(double a_max, int points, Spacing spacing) {
  require(a_max > 0.0, ErrorCode::invalid_argument, "a_max must be positive");
  require(points >= 1, ErrorCode::invalid_argument, "a_points must be >= 1");
  std::vector<double> grid{0.0};
  for (int j = 1; j <= points; ++j) {
    if (spacing == Spacing::geometric)
      grid.push_back(std::ldexp(a_max, j - points));
    else
      grid.push_back(a_max * j / points);
  }
  return grid;
}

void SolverConfig::validate() const {
  require(N >= 4, ErrorCode::invalid_argument, "mode cutoff N must be >= 4");
  require(Nr >= 2, ErrorCode::invalid_argument, "need at least two radial nodes");
  require(N <= (M - 1) / 2, ErrorCode::invalid_argument,
          "resolution inconsistent: N=" + std::to_string(N) + " needs M >= " + std::to_string(2 * N + 1));
  require(!a_grid.empty() && a_grid.front() == 0.0, ErrorCode::invalid_argument, "a_grid must start at 0");
  for (size_t i = 1; i < a_grid.size(); ++i)
    require(a_grid[i] > a_grid[i - 1], ErrorCode::invalid_argument, "a_grid must be strictly increasing");
  require(tol_residual > 0.0, ErrorCode::invalid_argument, "tol_residual must be positive");
  require(max_iter >= 1, ErrorCode::invalid_argument, "max_iter must be >= 1");
  // with_cutoff raises a truncation error if the measure has modes beyond N.
  (void)measure.density.with_cutoff(N);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

TrigPolynomial random_x4(int cutoff, int modes, std::mt19937_64& rng) {
  TrigPolynomial h(cutoff);
  const int top = std::min(modes, cutoff / 4);
  for (int k = 1; k <= top; ++k) {
    const double re = 2.0 * uniform01(rng) - 1.0;
    const double im = 2.0 * uniform01(rng) - 1.0;
    h.set(4 * k, cplx{re, im} / static_cast<double>(k));
  }
  const double s = sup_norm(h, std::max(2 * cutoff + 1, 8 * top + 1));
  if (s > 0.0) h *= 1.0 / s;
  return h;
}

TrigPolynomial apply_A_inv(const TrigPolynomial& h) {
  require(std::abs(h[0]) == 0.0, ErrorCode::invalid_argument, "A^{-1} needs a mean-zero input");
  TrigPolynomial out(h.cutoff(), h.is_real());
  for (int n = 1; n <= h.cutoff(); ++n) {
    if (n % 4 != 0) {
      require(h[n] == cplx{} && h[-n] == cplx{}, ErrorCode::invalid_argument,
              "A^{-1} is defined on X4 only; mode " + std::to_string(n) + " is nonzero");
      continue;
    }
    const double scale = (n + 1.0) / (n - 1.0);
    out.set(n, scale * h[n]);
    if (!h.is_real()) out.set(-n, scale * h[-n]);
  }
  return out;
}

DssProblem::DssProblem(SolverConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  grid_ = PolarGrid::disk(cfg_.Nr, cfg_.M);
  cfg_.measure.density = cfg_.measure.density.with_cutoff(cfg_.N);
  poisson_mu_ = poisson_extend(cfg_.measure.density, grid_);
  sup_poisson_mu_ = poisson_mu_.sup_abs();
}

TrigPolynomial DssProblem::log_density(const TrigPolynomial& W, double a) const {
  if (cfg_.mode == Mode::singular) return W;
  return W + a * cfg_.measure.density;
}

PolarField DssProblem::jacobian_field(const TrigPolynomial& W, double a) const {
  const double w_sup = sup_norm(W, cfg_.M);
  const double exponent = 2.0 * (w_sup + a * sup_poisson_mu_);
  require(exponent <= 300.0, ErrorCode::overflow_guard,
          "jacobian exponent 2(|W| + a sup P[mu]) = " + std::to_string(exponent) + " exceeds 300");
  PolarField G = poisson_extend(W.with_cutoff(cfg_.N), grid_);
  auto g = G.values();
  const auto pm = poisson_mu_.values();
  for (size_t i = 0; i < g.size(); ++i) g[i] = std::exp(-2.0 * (g[i].real() + a * pm[i].real()));
  return G;
}

PsiResult DssProblem::psi(const TrigPolynomial& W, double a) const {
  const PolarField G = jacobian_field(W, a);
  const auto T = sample_real(balayage(G, cfg_.N), cfg_.M);
  PsiResult out;
  out.min_T = *std::min_element(T.begin(), T.end());
  // T(G) >= (1/3) e^{-2|W| - 6 a mu(T)} da(D(0,1/2)) with da(D(0,1/2)) = 1/4.
  const double floor = std::exp(-2.0 * sup_norm(W, cfg_.M) - 6.0 * a * cfg_.measure.mass()) / 12.0;
  require(out.min_T > 0.0 && out.min_T >= floor * (1.0 - 1e-9), ErrorCode::positivity_lost,
          "T(G) fell to " + std::to_string(out.min_T) + " below the lower bound " + std::to_string(floor));

  const auto L = sample_real(log_density(W, a), cfg_.M);
  std::vector<double> s(T.size());
  for (size_t i = 0; i < s.size(); ++i) s[i] = std::log(T[i]) + L[i];
  const auto S = TrigPolynomial::from_samples(s, cfg_.N);
  out.log_C = S.mean();
  out.psi = project_x4(S);
  TrigPolynomial removed = S - out.psi;
  removed.set(0, 0.0);
  out.projection_correction = removed.l2_norm();
  return out;
}

TrigPolynomial DssProblem::dpsi(const TrigPolynomial& W, double a, const TrigPolynomial& H) const {
  const PolarField G = jacobian_field(W, a);
  PolarField GH = poisson_extend(H.with_cutoff(cfg_.N), grid_);
  GH *= G;
  const auto num = sample(balayage(GH, cfg_.N), cfg_.M);
  const auto den = sample_real(balayage(G, cfg_.N), cfg_.M);
  std::vector<cplx> ratio(num.size());
  for (size_t i = 0; i < ratio.size(); ++i) ratio[i] = num[i] / den[i];
  const auto R = TrigPolynomial::from_samples(ratio, cfg_.N, H.is_real());
  return project_x4(H.with_cutoff(cfg_.N) - 2.0 * R);
}

TrigPolynomial DssProblem::gamma_step(const TrigPolynomial& W, double a) const {
  return W - apply_A_inv(psi(W, a).psi);
}

TrigPolynomial DssProblem::solve_newton_system(const TrigPolynomial& W, double a,
                                               const TrigPolynomial& rhs) const {
  // Real coordinates (Re c_{4k}, Im c_{4k}), k = 1..K, of the X4 class.
  const int K = cfg_.N / 4;
  const int dim = 2 * K;
  Eigen::MatrixXd J(dim, dim);
  auto coords = [K](const TrigPolynomial& p, Eigen::Ref<Eigen::VectorXd> v) {
    for (int k = 1; k <= K; ++k) {
      v(2 * (k - 1)) = p[4 * k].real();
      v(2 * (k - 1) + 1) = p[4 * k].imag();
    }
  };
  for (int k = 1; k <= K; ++k) {
    for (int part = 0; part < 2; ++part) {
      const auto basis = TrigPolynomial::real_mode(4 * k, part == 0 ? cplx{1.0, 0.0} : cplx{0.0, 1.0}, cfg_.N);
      coords(dpsi(W, a, basis), J.col(2 * (k - 1) + part));
    }
  }
  Eigen::VectorXd b(dim);
  coords(rhs, b);
  const Eigen::VectorXd x = J.partialPivLu().solve(b);
  TrigPolynomial step(cfg_.N);
  for (int k = 1; k <= K; ++k) step.set(4 * k, cplx{x(2 * (k - 1)), x(2 * (k - 1) + 1)});
  return step;
}

TrigPolynomial DssProblem::newton_step(const TrigPolynomial& W, double a) const {
  return W - solve_newton_system(W, a, psi(W, a).psi);
}

double DssProblem::contraction_estimate(const TrigPolynomial& W, double a, std::mt19937_64& rng) const {
  const TrigPolynomial base = gamma_step(W, a);
  double worst = 0.0;
  for (int p = 0; p < cfg_.contraction_probes; ++p) {
    TrigPolynomial dH = random_x4(cfg_.N, 16, rng);
    dH *= cfg_.contraction_step;
    const double dn = sup_norm(dH, cfg_.M);
    const double diff = sup_norm(gamma_step(W + dH, a) - base, cfg_.M);
    worst = std::max(worst, diff / dn);
  }
  return worst;
}

double DssProblem::fixed_point_defect(const TrigPolynomial& W, double a, double C) const {
  const auto T = sample_real(balayage(jacobian_field(W, a), cfg_.N), cfg_.M);
  const auto L = sample_real(log_density(W, a), cfg_.M);
  double worst = 0.0;
  for (size_t i = 0; i < T.size(); ++i) worst = std::max(worst, std::abs(T[i] - C * std::exp(-L[i])));
  return worst;
}

namespace {

const char* reason_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::positivity_lost: return "positivity_lost";
    case ErrorCode::overflow_guard: return "overflow_guard";
    default: return "diverged";
  }
}

struct PointOutcome {
  bool accepted = false;
  std::string reason;
  std::string detail;
  BranchPoint point;
};

PointOutcome solve_point(const DssProblem& problem, const TrigPolynomial& warm, double a,
                         std::mt19937_64& rng) {
  const auto& cfg = problem.config();
  PointOutcome out;
  out.point.a = a;
  TrigPolynomial W = warm;

  if (!cfg.use_newton) {
    const double ratio = problem.contraction_estimate(W, a, rng);
    if (!(ratio < cfg.contraction_limit)) {
      out.reason = "contraction_lost";
      out.detail = "Lipschitz ratio " + std::to_string(ratio) + " at warm start";
      return out;
    }
  }

  double first = -1.0;
  int worsening = 0;
  double previous = 0.0;
  for (int iter = 0;; ++iter) {
    const PsiResult r = problem.psi(W, a);
    const double res = sup_norm(r.psi, cfg.M);
    out.point.projection_correction = std::max(out.point.projection_correction, r.projection_correction);
    if (first < 0.0) first = res;
    if (!std::isfinite(res)) {
      out.reason = "diverged";
      out.detail = "non-finite residual";
      return out;
    }
    if (res <= cfg.tol_residual) {
      out.point.W = W;
      out.point.log_C = r.log_C;
      out.point.C = std::exp(r.log_C);
      out.point.c = 0.5 * out.point.C;
      out.point.residual = res;
      out.point.iterations = iter;
      break;
    }
    if (iter >= cfg.max_iter) {
      out.reason = "max_iter";
      out.detail = "residual " + std::to_string(res) + " after " + std::to_string(iter) + " iterations";
      return out;
    }
    worsening = (iter > 0 && res > previous) ? worsening + 1 : 0;
    if (worsening >= 10 || res > 1e3 * std::max(first, cfg.tol_residual)) {
      out.reason = "diverged";
      out.detail = "residual grew to " + std::to_string(res);
      return out;
    }
    previous = res;
    W = cfg.use_newton ? problem.newton_step(W, a) : W - apply_A_inv(r.psi);
    W = project_x4(W);
  }

  out.point.contraction_est = problem.contraction_estimate(out.point.W, a, rng);
  out.point.holder_half = holder_estimate(out.point.W, 0.5, cfg.M);
  if (!(out.point.contraction_est < cfg.contraction_limit)) {
    out.reason = "contraction_lost";
    out.detail = "Lipschitz ratio " + std::to_string(out.point.contraction_est) + " at the solution";
    return out;
  }
  out.accepted = true;
  return out;
}

}  // namespace

Branch solve_branch(const SolverConfig& cfg) {
  const DssProblem problem(cfg);
  Branch branch;
  branch.config = problem.config();
  std::mt19937_64 rng(cfg.seed);
  TrigPolynomial W(cfg.N);
  for (double a : cfg.a_grid) {
    PointOutcome outcome;
    try {
      outcome = solve_point(problem, W, a, rng);
    } catch (const Error& e) {
      outcome.reason = reason_for(e.code());
      outcome.detail = e.what();
    }
    if (!outcome.accepted) {
      branch.stop_reason = outcome.reason;
      branch.stop_detail = outcome.detail;
      branch.stopped_at_a = a;
      break;
    }
    W = outcome.point.W;
    branch.points.push_back(std::move(outcome.point));
  }
  return branch;
}

double verify_fixed_point(const BranchPoint& point, const SolverConfig& cfg, int refine) {
  SolverConfig fine = cfg;
  fine.Nr = cfg.Nr * refine;
  fine.M = cfg.M * refine;
  const DssProblem problem(fine);
  return problem.fixed_point_defect(point.W, point.a, point.C);
}

}  // namespace qdomain
