#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

#include "faultkb/rng.hpp"
#include "faultkb/simd/kernels.hpp"

namespace faultkb {

// Dense row-major matrix of doubles. Vectors are 1-row matrices so model
// parameters, gradients, and serialized tensors all share one shape.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t r) {
    assert(r < rows);
    return {data.data() + r * cols, cols};
  }
  std::span<const double> row(std::size_t r) const {
    assert(r < rows);
    return {data.data() + r * cols, cols};
  }

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  void fill(double v) { data.assign(data.size(), v); }

  void fill_uniform(Rng& rng, double lo, double hi) {
    for (double& v : data) v = rng.uniform(lo, hi);
  }
};

// out = W x, one dot per row.
inline void matvec(const Matrix& w, std::span<const double> x,
                   std::span<double> out) {
  assert(x.size() == w.cols && out.size() == w.rows);
  for (std::size_t r = 0; r < w.rows; ++r) out[r] = simd::dot(w.row(r), x);
}

// out += W^T y, accumulated row-wise so the kernel stays a stride-1 axpy.
inline void matvec_transpose_acc(const Matrix& w, std::span<const double> y,
                                 std::span<double> out) {
  assert(y.size() == w.rows && out.size() == w.cols);
  for (std::size_t r = 0; r < w.rows; ++r) simd::axpy(y[r], w.row(r), out);
}

// G += u v^T
inline void add_outer(std::span<const double> u, std::span<const double> v,
                      Matrix& g) {
  assert(u.size() == g.rows && v.size() == g.cols);
  for (std::size_t r = 0; r < g.rows; ++r) simd::axpy(u[r], v, g.row(r));
}

}  // namespace faultkb
