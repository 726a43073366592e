#pragma once
// Data-parallel inner loops used across the library: plain sums, dot
// products, broadcast scaling, the Shannon-entropy accumulation
// -sum p*log2(p), and the 3-way table lookup-accumulate used by the
// maximum-likelihood sum decoder.
//
// Every kernel has a scalar reference implementation and (on x86-64) an
// AVX2+FMA variant selected at runtime. The two are equivalence-tested
// against each other; COSETLAB_SIMD=scalar|avx2 overrides auto-detection.

#include <cstddef>
#include <cstdint>
#include <span>

namespace cosetlab::kernels {

enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);

// True if this build+host can run the given backend.
bool backend_supported(Backend b);

// Backend currently in use. Resolved once from COSETLAB_SIMD or CPU
// detection; force_backend() replaces the choice (throws std::invalid_argument
// if unsupported), reset_backend() returns to auto-detection.
Backend active_backend();
void force_backend(Backend b);
void reset_backend();

// sum of all entries
double sum(std::span<const double> v);

// inner product; a and b must have equal length
double dot(std::span<const double> a, std::span<const double> b);

// dst[i] = c * src[i]; dst and src must have equal length
void scale(std::span<double> dst, std::span<const double> src, double c);

// -sum_i p[i]*log2(p[i]) over entries p[i] > 0 (the 0*log0 := 0 convention)
double neg_plogp_sum(std::span<const double> p);

// acc[i] += v[sym[i]] with sym[i] in {0,1,2}; sym has acc.size() entries
void select3_add(std::span<double> acc, const std::uint8_t* sym,
                 double v0, double v1, double v2);

namespace scalar {
double sum(const double* v, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void scale(double* dst, const double* src, double c, std::size_t n);
double neg_plogp_sum(const double* p, std::size_t n);
void select3_add(double* acc, const std::uint8_t* sym, double v0, double v1,
                 double v2, std::size_t n);
}  // namespace scalar

#if defined(COSETLAB_HAVE_AVX2)
namespace avx2 {
double sum(const double* v, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
void scale(double* dst, const double* src, double c, std::size_t n);
double neg_plogp_sum(const double* p, std::size_t n);
void select3_add(double* acc, const std::uint8_t* sym, double v0, double v1,
                 double v2, std::size_t n);
}  // namespace avx2
#endif

}  // namespace cosetlab::kernels
