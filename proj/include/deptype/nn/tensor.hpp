#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace deptype {

// Row-major dense matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  std::span<double> row(int r) { return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
  std::span<const double> row(int r) const {
    return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
  }

  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  std::size_t size() const { return data.size(); }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

namespace linalg {

// y += W x for W (out x in).
inline void gemv_add(const Matrix& w, std::span<const double> x, std::span<double> y) {
  assert(static_cast<int>(x.size()) == w.cols && static_cast<int>(y.size()) == w.rows);
  for (int r = 0; r < w.rows; ++r) {
    const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
    double acc = 0.0;
    for (int c = 0; c < w.cols; ++c) acc += wr[c] * x[c];
    y[r] += acc;
  }
}

// x_grad += W^T y_grad.
inline void gemv_t_add(const Matrix& w, std::span<const double> y_grad, std::span<double> x_grad) {
  for (int r = 0; r < w.rows; ++r) {
    const double g = y_grad[r];
    if (g == 0.0) continue;
    const double* wr = w.data.data() + static_cast<std::size_t>(r) * w.cols;
    for (int c = 0; c < w.cols; ++c) x_grad[c] += wr[c] * g;
  }
}

// W_grad += y_grad x^T.
inline void outer_add(std::span<const double> y_grad, std::span<const double> x, Matrix& w_grad) {
  for (int r = 0; r < w_grad.rows; ++r) {
    const double g = y_grad[r];
    if (g == 0.0) continue;
    double* wr = w_grad.data.data() + static_cast<std::size_t>(r) * w_grad.cols;
    for (int c = 0; c < w_grad.cols; ++c) wr[c] += g * x[c];
  }
}

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Numerically stable softmax.
inline std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double m = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (auto& v : p) {
    v = std::exp(v - m);
    sum += v;
  }
  for (auto& v : p) v /= sum;
  return p;
}

inline double l2_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace linalg
}  // namespace deptype
