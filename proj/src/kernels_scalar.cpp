#include <cmath>
#include <cstddef>
#include <cstdint>

#include "cosetlab/kernels.hpp"

namespace cosetlab::kernels::scalar {

double sum(const double* v, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += v[i];
  return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void scale(double* dst, const double* src, double c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = c * src[i];
}

double neg_plogp_sum(const double* p, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = p[i];
    if (pi > 0.0) acc -= pi * std::log2(pi);
  }
  return acc;
}

void select3_add(double* acc, const std::uint8_t* sym, double v0, double v1,
                 double v2, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t s = sym[i];
    acc[i] += s == 0 ? v0 : (s == 1 ? v1 : v2);
  }
}

}  // namespace cosetlab::kernels::scalar
