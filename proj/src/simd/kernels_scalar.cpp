#include "faultkb/simd/kernels.hpp"

namespace faultkb::simd::ref {

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

}  // namespace faultkb::simd::ref
