#include "cosetlab/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace cosetlab::kernels {

namespace {

struct Vtable {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*scale)(double*, const double*, double, std::size_t);
  double (*neg_plogp_sum)(const double*, std::size_t);
  void (*select3_add)(double*, const std::uint8_t*, double, double, double,
                      std::size_t);
};

constexpr Vtable kScalar{scalar::sum, scalar::dot, scalar::scale,
                         scalar::neg_plogp_sum, scalar::select3_add};

#if defined(COSETLAB_HAVE_AVX2)
constexpr Vtable kAvx2{avx2::sum, avx2::dot, avx2::scale, avx2::neg_plogp_sum,
                       avx2::select3_add};
#endif

bool host_has_avx2() {
#if defined(COSETLAB_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("COSETLAB_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2))
      return Backend::avx2;
  }
  return host_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{detect()};

const Vtable& table_for(Backend b) {
#if defined(COSETLAB_HAVE_AVX2)
  if (b == Backend::avx2) return kAvx2;
#endif
  (void)b;
  return kScalar;
}

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
  return b == Backend::scalar || host_has_avx2();
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void force_backend(Backend b) {
  if (!backend_supported(b))
    throw std::invalid_argument(std::string("kernel backend not supported: ") +
                                backend_name(b));
  g_backend.store(b, std::memory_order_relaxed);
}

void reset_backend() { g_backend.store(detect(), std::memory_order_relaxed); }

double sum(std::span<const double> v) {
  return table_for(active_backend()).sum(v.data(), v.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  return table_for(active_backend()).dot(a.data(), b.data(), a.size());
}

void scale(std::span<double> dst, std::span<const double> src, double c) {
  if (dst.size() != src.size())
    throw std::invalid_argument("scale: length mismatch");
  table_for(active_backend()).scale(dst.data(), src.data(), c, dst.size());
}

double neg_plogp_sum(std::span<const double> p) {
  return table_for(active_backend()).neg_plogp_sum(p.data(), p.size());
}

void select3_add(std::span<double> acc, const std::uint8_t* sym, double v0,
                 double v1, double v2) {
  table_for(active_backend())
      .select3_add(acc.data(), sym, v0, v1, v2, acc.size());
}

}  // namespace cosetlab::kernels
