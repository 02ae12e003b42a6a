#include "faultkb/simd/kernels.hpp"

#if defined(FAULTKB_HAVE_NEON)

#include <arm_neon.h>

namespace faultkb::simd::neon {

double dot(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  const double* py = y.data();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(px + i), vld1q_f64(py + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(px + i + 2), vld1q_f64(py + i + 2));
  }
  for (; i + 2 <= n; i += 2) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(px + i), vld1q_f64(py + i));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += px[i] * py[i];
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t vy = vld1q_f64(py + i);
    vy = vfmaq_f64(vy, va, vld1q_f64(px + i));
    vst1q_f64(py + i, vy);
  }
  for (; i < n; ++i) py[i] += a * px[i];
}

}  // namespace faultkb::simd::neon

#endif  // FAULTKB_HAVE_NEON
