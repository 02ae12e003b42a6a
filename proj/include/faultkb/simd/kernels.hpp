#pragma once

#include <cstddef>
#include <span>
#include <string>

// Data-parallel kernels behind the numeric inner loops (LSTM gate matvecs,
// skip-gram updates, all-pairs cosine similarity). Scalar reference
// implementations are always available; an AVX2 (x86-64) or NEON (aarch64)
// variant is selected once at startup when the CPU supports it. The
// environment variable FAULTKB_SIMD=scalar|avx2|neon|auto forces a backend.
//
// Backends may reassociate additions, so results can differ from the scalar
// reference in the low bits; equivalence tests bound the relative error.

namespace faultkb::simd {

enum class Backend { scalar, avx2, neon };

// Backend chosen at startup for this process.
Backend active_backend();
std::string backend_name(Backend b);

// y . x
double dot(std::span<const double> x, std::span<const double> y);

// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

// Scalar reference kernels (fixed evaluation order).
namespace ref {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace ref

#if defined(FAULTKB_HAVE_AVX2)
namespace avx2 {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace avx2
#endif

#if defined(FAULTKB_HAVE_NEON)
namespace neon {
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
}  // namespace neon
#endif

}  // namespace faultkb::simd
