#include "qdomain/circle_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "qdomain/error.hpp"

namespace qdomain {

TrigPolynomial::TrigPolynomial(int cutoff, bool is_real) : N_(cutoff), real_(is_real) {
  require(cutoff >= 0, ErrorCode::invalid_argument, "mode cutoff must be >= 0");
  c_.assign(static_cast<size_t>(2 * cutoff + 1), cplx{});
}

TrigPolynomial TrigPolynomial::constant(double value, int cutoff) {
  TrigPolynomial p(cutoff);
  p.set(0, value);
  return p;
}

TrigPolynomial TrigPolynomial::real_mode(int n, cplx value, int cutoff) {
  require(std::abs(n) <= cutoff, ErrorCode::truncation, "mode exceeds cutoff");
  TrigPolynomial p(cutoff);
  p.set(n, n == 0 ? cplx{value.real(), 0.0} : value);
  return p;
}

TrigPolynomial TrigPolynomial::exponential(int n, int cutoff) {
  require(std::abs(n) <= cutoff, ErrorCode::truncation, "mode exceeds cutoff");
  TrigPolynomial p(cutoff, n == 0);
  p.set(n, 1.0);
  return p;
}

TrigPolynomial TrigPolynomial::from_samples(std::span<const cplx> values, int cutoff,
                                            bool is_real) {
  const int M = static_cast<int>(values.size());
  require(M >= 2 * cutoff + 1, ErrorCode::aliasing,
          "need at least 2N+1 samples for cutoff " + std::to_string(cutoff));
  const auto c = detail::analyze(values);
  TrigPolynomial p(cutoff, is_real);
  for (int n = -cutoff; n <= cutoff; ++n)
    p.c_[static_cast<size_t>(n + cutoff)] = c[static_cast<size_t>(((n % M) + M) % M)];
  if (is_real) p.symmetrize();
  return p;
}

TrigPolynomial TrigPolynomial::from_samples(std::span<const double> values, int cutoff) {
  std::vector<cplx> v(values.begin(), values.end());
  return from_samples(v, cutoff, true);
}

void TrigPolynomial::set(int n, cplx value) {
  require(std::abs(n) <= N_, ErrorCode::truncation,
          "mode " + std::to_string(n) + " exceeds cutoff " + std::to_string(N_));
  c_[static_cast<size_t>(n + N_)] = value;
  if (real_) {
    if (n == 0)
      c_[static_cast<size_t>(N_)] = {value.real(), 0.0};
    else
      c_[static_cast<size_t>(-n + N_)] = std::conj(value);
  }
}

TrigPolynomial TrigPolynomial::with_cutoff(int cutoff) const {
  for (int n = cutoff + 1; n <= N_; ++n)
    require((*this)[n] == cplx{} && (*this)[-n] == cplx{}, ErrorCode::truncation,
            "cutoff " + std::to_string(cutoff) + " would drop nonzero mode " + std::to_string(n));
  return truncated(cutoff);
}

TrigPolynomial TrigPolynomial::truncated(int cutoff) const {
  TrigPolynomial p(cutoff, real_);
  const int m = std::min(cutoff, N_);
  for (int n = -m; n <= m; ++n) p.c_[static_cast<size_t>(n + cutoff)] = (*this)[n];
  return p;
}

void TrigPolynomial::symmetrize() {
  if (!real_) return;
  for (int n = 1; n <= N_; ++n) {
    auto& pos = c_[static_cast<size_t>(N_ + n)];
    auto& neg = c_[static_cast<size_t>(N_ - n)];
    const cplx avg = 0.5 * (pos + std::conj(neg));
    pos = avg;
    neg = std::conj(avg);
  }
  c_[static_cast<size_t>(N_)] = {c_[static_cast<size_t>(N_)].real(), 0.0};
}

double TrigPolynomial::l2_norm() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::norm(c);
  return std::sqrt(s);
}

TrigPolynomial& TrigPolynomial::operator+=(const TrigPolynomial& other) {
  if (other.N_ > N_) *this = truncated(other.N_);
  for (int n = -other.N_; n <= other.N_; ++n) c_[static_cast<size_t>(n + N_)] += other[n];
  real_ = real_ && other.real_;
  symmetrize();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator-=(const TrigPolynomial& other) {
  if (other.N_ > N_) *this = truncated(other.N_);
  for (int n = -other.N_; n <= other.N_; ++n) c_[static_cast<size_t>(n + N_)] -= other[n];
  real_ = real_ && other.real_;
  symmetrize();
  return *this;
}

TrigPolynomial& TrigPolynomial::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

std::vector<cplx> sample(const TrigPolynomial& p, int M) {
  const int N = p.cutoff();
  require(M >= 2 * N + 1, ErrorCode::aliasing,
          "sampling at M=" + std::to_string(M) + " aliases cutoff N=" + std::to_string(N));
  std::vector<cplx> c(static_cast<size_t>(M), cplx{});
  for (int n = -N; n <= N; ++n) c[static_cast<size_t>(((n % M) + M) % M)] = p[n];
  return detail::synthesize(c);
}

std::vector<double> sample_real(const TrigPolynomial& p, int M) {
  const auto v = sample(p, M);
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](cplx z) { return z.real(); });
  return out;
}

double sup_norm(const TrigPolynomial& p, int M) {
  double s = 0.0;
  for (const auto& v : sample(p, M)) s = std::max(s, std::abs(v));
  return s;
}

TrigPolynomial project_x4(const TrigPolynomial& p) {
  TrigPolynomial q(p.cutoff(), p.is_real());
  for (int n = -p.cutoff(); n <= p.cutoff(); ++n)
    if (n != 0 && n % 4 == 0) q.set(n, p[n]);
  return q;
}

bool in_x4(const TrigPolynomial& p, double tol) {
  for (int n = -p.cutoff(); n <= p.cutoff(); ++n)
    if ((n == 0 || n % 4 != 0) && std::abs(p[n]) > tol) return false;
  return true;
}

int riesz_max_frequency(int depth) {
  int q = 4, total = 0;
  for (int k = 0; k <= depth; ++k, q *= 3) total += q;
  return total;
}

MeasureSpec riesz_product(int depth, int cutoff) {
  require(depth >= 0, ErrorCode::invalid_argument, "riesz depth must be >= 0");
  require(depth <= 12, ErrorCode::invalid_argument, "riesz depth above 12 is not representable");
  const int top = riesz_max_frequency(depth);
  require(cutoff >= top, ErrorCode::truncation,
          "riesz_product(" + std::to_string(depth) + ") needs cutoff >= " + std::to_string(top));
  // Multiply factor by factor; each (1 + cos qt) = 1 + e^{iqt}/2 + e^{-iqt}/2.
  std::vector<double> c(static_cast<size_t>(2 * top + 1), 0.0);
  c[static_cast<size_t>(top)] = 1.0;
  int q = 4;
  for (int k = 0; k <= depth; ++k, q *= 3) {
    std::vector<double> next(c.size(), 0.0);
    for (int m = -top; m <= top; ++m) {
      const double v = c[static_cast<size_t>(m + top)];
      if (v == 0.0) continue;
      next[static_cast<size_t>(m + top)] += v;
      if (m + q <= top) next[static_cast<size_t>(m + q + top)] += 0.5 * v;
      if (m - q >= -top) next[static_cast<size_t>(m - q + top)] += 0.5 * v;
    }
    c = std::move(next);
  }
  MeasureSpec spec;
  spec.kind = MeasureSpec::Kind::riesz_product;
  spec.depth = depth;
  spec.density = TrigPolynomial(cutoff);
  for (int m = 0; m <= top; ++m) spec.density.set(m, c[static_cast<size_t>(m + top)]);
  return spec;
}

MeasureSpec explicit_measure(const TrigPolynomial& density) {
  require(density.is_real(), ErrorCode::invalid_argument, "measure coefficients must be real");
  for (int n = 1; n <= density.cutoff(); ++n) {
    require(std::abs(density[-n] - std::conj(density[n])) <= 1e-14, ErrorCode::invalid_argument,
            "measure coefficients violate c_{-n} = conj(c_n)");
    if (n % 4 != 0)
      require(density[n] == cplx{}, ErrorCode::invalid_argument,
              "measure must be 4-fold symmetric; nonzero mode " + std::to_string(n));
  }
  MeasureSpec spec;
  spec.kind = MeasureSpec::Kind::explicit_coeffs;
  spec.density = density;
  return spec;
}

PowerSeries herglotz_coeffs(const TrigPolynomial& nu) {
  PowerSeries F(nu.cutoff());
  F.at(0) = nu[0];
  for (int k = 1; k <= nu.cutoff(); ++k) F.at(k) = 2.0 * nu[k];
  return F;
}

double holder_estimate(const TrigPolynomial& p, double alpha, int M) {
  require(alpha > 0.0 && alpha < 1.0, ErrorCode::invalid_argument, "Holder exponent must be in (0,1)");
  const auto v = sample(p, M);
  double sup = 0.0;
  for (const auto& x : v) sup = std::max(sup, std::abs(x));
  // The quotient depends only on the lag; chord |xi - eta| = 2 sin(pi lag / M).
  double seminorm = 0.0;
  for (int lag = 1; lag <= M / 2; ++lag) {
    const double chord = 2.0 * std::sin(std::numbers::pi * lag / M);
    const double denom = std::pow(chord, alpha);
    double worst = 0.0;
    for (int j = 0; j < M; ++j)
      worst = std::max(worst, std::abs(v[static_cast<size_t>((j + lag) % M)] - v[static_cast<size_t>(j)]));
    seminorm = std::max(seminorm, worst / denom);
  }
  return sup + seminorm;
}

}  // namespace qdomain
