#pragma once

#include <complex>

namespace qdomain::detail {

/// z^n by repeated squaring; exact at z = 0 unlike std::pow.
template <class T>
T ipow(T z, int n) {
  T result(1);
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

}  // namespace qdomain::detail
