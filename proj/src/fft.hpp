#pragma once

#include <complex>
#include <span>
#include <vector>

namespace qdomain::detail {

using cplx = std::complex<double>;

// Uniform-angle transforms on t_j = 2 pi j / M, backed by FFTW.
//   analyze:    c[n mod M] = (1/M) sum_j v_j e^{-i n t_j}
//   synthesize: v_j = sum_{n mod M} c[n] e^{+i n t_j}
std::vector<cplx> analyze(std::span<const cplx> values);
std::vector<cplx> synthesize(std::span<const cplx> coeffs);

}  // namespace qdomain::detail
