#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "deptype/error.hpp"
#include "deptype/features.hpp"
#include "deptype/nn/tensor.hpp"
#include "deptype/rng.hpp"

namespace deptype {

// One-vs-rest linear SVM. The bias is the weight of an implicit constant
// feature, so weights has dim + 1 columns.
struct LinearSvmModel {
  int n_classes = 0;
  int dim = 0;
  Matrix weights;

  std::vector<double> margins(const SparseVector& x) const {
    std::vector<double> m(static_cast<std::size_t>(n_classes), 0.0);
    for (int c = 0; c < n_classes; ++c) {
      double s = weights(c, dim);
      for (const auto& [i, w] : x.entries)
        if (i < dim) s += weights(c, i) * w;
      m[c] = s;
    }
    return m;
  }

  // Softmax over the one-vs-rest margins. This is a ranking-preserving
  // approximation, not a calibrated probability.
  std::vector<double> probabilities(const SparseVector& x) const { return linalg::softmax(margins(x)); }
};

struct SvmOptions {
  double C = 1.0;
  int epochs = 20;
  std::uint64_t seed = 42;
  std::vector<double> class_weights;  // empty: all 1
};

// Pegasos: stochastic subgradient descent on
//   lambda/2 |w|^2 + 1/n sum_i max(0, 1 - y_i w.x_i),  lambda = 1 / (C n)
// with step 1/(lambda t) and projection onto the ball of radius 1/sqrt(lambda).
// One binary problem per class, all visiting examples in the same seeded
// order. The weight vector is kept as scale * v so that the shrink step is O(1).
inline LinearSvmModel train_linear_svm(std::span<const SparseVector> docs, std::span<const int> labels, int n_classes,
                                       const SvmOptions& opt) {
  if (docs.size() != labels.size()) throw DataError("documents and labels differ in length");
  if (docs.empty()) throw DataError("linear SVM needs training data");
  if (!(opt.C > 0.0)) throw DataError("SVM C must be positive");
  if (opt.epochs < 1) throw DataError("SVM epochs must be positive");
  {
    std::vector<int> present(static_cast<std::size_t>(n_classes), 0);
    for (int y : labels) {
      if (y < 0 || y >= n_classes) throw DataError("label out of range");
      present[y] = 1;
    }
    int distinct = 0;
    for (int p : present) distinct += p;
    if (distinct < 2) throw DataError("linear SVM needs at least two classes in the training data");
    bool all_same = true;
    for (std::size_t i = 1; i < docs.size() && all_same; ++i) all_same = docs[i] == docs[0];
    if (all_same) throw DataError("degenerate training data: every feature vector is identical");
  }
  const int dim = docs.front().dim;
  const auto n = static_cast<double>(docs.size());
  const double lambda = 1.0 / (opt.C * n);
  const double radius = 1.0 / std::sqrt(lambda);

  LinearSvmModel model;
  model.n_classes = n_classes;
  model.dim = dim;
  model.weights = Matrix(n_classes, dim + 1);

  std::vector<double> sq_norm_x(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) sq_norm_x[i] = docs[i].norm() * docs[i].norm() + 1.0;

  for (int c = 0; c < n_classes; ++c) {
    std::vector<double> v(static_cast<std::size_t>(dim + 1), 0.0);
    double scale = 1.0;
    double v_sq = 0.0;
    Rng rng(splitmix64(opt.seed));
    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    long t = 0;
    for (int epoch = 0; epoch < opt.epochs; ++epoch) {
      rng.shuffle(std::span<std::size_t>(order));
      for (std::size_t i : order) {
        ++t;
        const SparseVector& x = docs[i];
        const double y = labels[i] == c ? 1.0 : -1.0;
        double vx = v[dim];
        for (const auto& [k, w] : x.entries) vx += v[k] * w;
        const double margin = y * scale * vx;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double shrink = 1.0 - eta * lambda;
        if (shrink <= 0.0) {
          std::fill(v.begin(), v.end(), 0.0);
          scale = 1.0;
          v_sq = 0.0;
        } else {
          scale *= shrink;
        }
        if (margin < 1.0) {
          const double weight = opt.class_weights.empty() ? 1.0 : opt.class_weights[labels[i]];
          const double a = eta * y * weight / scale;
          v_sq += 2.0 * a * vx + a * a * sq_norm_x[i];
          for (const auto& [k, w] : x.entries) v[k] += a * w;
          v[dim] += a;
        }
        const double w_norm = scale * std::sqrt(std::max(v_sq, 0.0));
        if (w_norm > radius) scale *= radius / w_norm;
        if (scale < 1e-9) {
          for (auto& e : v) e *= scale;
          v_sq *= scale * scale;
          scale = 1.0;
        }
      }
    }
    for (int k = 0; k <= dim; ++k) model.weights(c, k) = scale * v[k];
  }
  return model;
}

}  // namespace deptype
