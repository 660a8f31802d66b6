#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "deptype/error.hpp"
#include "deptype/features.hpp"
#include "deptype/nn/tensor.hpp"

namespace deptype {

// Multinomial naive Bayes over (possibly fractional) term counts.
struct NaiveBayesModel {
  int n_classes = 0;
  int dim = 0;
  double alpha = 1.0;
  // log(count_c / N)
  std::vector<double> log_prior;
  // log((count(c, t) + alpha) / (sum_t count(c, t) + alpha * dim)), n_classes x dim
  Matrix log_likelihood;

  std::vector<double> joint_log(const SparseVector& x) const {
    std::vector<double> s(log_prior);
    for (int c = 0; c < n_classes; ++c)
      for (const auto& [t, w] : x.entries) s[c] += w * log_likelihood(c, t);
    return s;
  }

  std::vector<double> posterior(const SparseVector& x) const { return linalg::softmax(joint_log(x)); }
};

inline NaiveBayesModel train_naive_bayes(std::span<const SparseVector> docs, std::span<const int> labels,
                                         int n_classes, double alpha) {
  if (!(alpha > 0.0)) throw DataError("naive Bayes alpha must be positive");
  if (docs.size() != labels.size()) throw DataError("documents and labels differ in length");
  if (docs.empty()) throw DataError("naive Bayes needs at least one training document");
  const int dim = docs.front().dim;
  std::vector<int> class_docs(static_cast<std::size_t>(n_classes), 0);
  Matrix counts(n_classes, dim);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const int c = labels[i];
    if (c < 0 || c >= n_classes) throw DataError("label out of range");
    if (docs[i].dim != dim) throw DataError("documents have different dimensions");
    ++class_docs[c];
    for (const auto& [t, w] : docs[i].entries) counts(c, t) += w;
  }
  for (int c = 0; c < n_classes; ++c)
    if (class_docs[c] == 0) throw DataError("class " + std::to_string(c) + " has no training documents");

  NaiveBayesModel m;
  m.n_classes = n_classes;
  m.dim = dim;
  m.alpha = alpha;
  m.log_likelihood = Matrix(n_classes, dim);
  for (int c = 0; c < n_classes; ++c) {
    m.log_prior.push_back(std::log(static_cast<double>(class_docs[c]) / static_cast<double>(docs.size())));
    double total = 0.0;
    for (int t = 0; t < dim; ++t) total += counts(c, t);
    const double denom = total + alpha * dim;
    for (int t = 0; t < dim; ++t) m.log_likelihood(c, t) = std::log((counts(c, t) + alpha) / denom);
  }
  return m;
}

}  // namespace deptype
