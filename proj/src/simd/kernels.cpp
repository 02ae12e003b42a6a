#include "faultkb/simd/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace faultkb::simd {

namespace {

using DotFn = double (*)(std::span<const double>, std::span<const double>);
using AxpyFn = void (*)(double, std::span<const double>, std::span<double>);

struct Dispatch {
  Backend backend = Backend::scalar;
  DotFn dot = &ref::dot;
  AxpyFn axpy = &ref::axpy;
};

bool cpu_has_avx2() {
#if defined(FAULTKB_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Dispatch select() {
  Dispatch d;
  const char* forced = std::getenv("FAULTKB_SIMD");
  const bool want_scalar = forced && std::strcmp(forced, "scalar") == 0;
  const bool want_auto = !forced || std::strcmp(forced, "auto") == 0;
#if defined(FAULTKB_HAVE_AVX2)
  const bool want_avx2 = forced && std::strcmp(forced, "avx2") == 0;
  if (!want_scalar && (want_auto || want_avx2) && cpu_has_avx2()) {
    d.backend = Backend::avx2;
    d.dot = &avx2::dot;
    d.axpy = &avx2::axpy;
    return d;
  }
#endif
#if defined(FAULTKB_HAVE_NEON)
  const bool want_neon = forced && std::strcmp(forced, "neon") == 0;
  if (!want_scalar && (want_auto || want_neon)) {
    d.backend = Backend::neon;
    d.dot = &neon::dot;
    d.axpy = &neon::axpy;
    return d;
  }
#endif
  return d;
}

const Dispatch& dispatch() {
  static const Dispatch d = select();
  return d;
}

}  // namespace

Backend active_backend() { return dispatch().backend; }

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "scalar";
}

double dot(std::span<const double> x, std::span<const double> y) {
  return dispatch().dot(x, y);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  dispatch().axpy(a, x, y);
}

}  // namespace faultkb::simd
