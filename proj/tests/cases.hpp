#pragma once

// Experiment set-ups shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "deptype/deptype.hpp"
#include "deptype/nn/networks.hpp"
#include "oracles.hpp"

namespace cases {

using deptype::Matrix;
using deptype::Rng;
using deptype::nn::SequenceInput;

// Three examples over max_len 8 with lengths 8, 5 and 3.
inline std::vector<SequenceInput> grad_inputs(int vocab_size, int embed_dim, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SequenceInput> xs;
  for (int len : {8, 5, 3}) {
    SequenceInput in;
    in.length = len;
    in.ids.assign(8, 0);
    for (int i = 0; i < len; ++i) in.ids[i] = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(vocab_size - 1)));
    if (vocab_size == 0 || embed_dim > 0) {
      in.embedded = Matrix(8, embed_dim);
      for (int r = 0; r < len; ++r)
        for (int c = 0; c < embed_dim; ++c) in.embedded(r, c) = rng.normal();
    }
    xs.push_back(std::move(in));
  }
  return xs;
}

template <typename Net>
oracle::GradCheck grad_check(Net& net, const std::vector<SequenceInput>& xs, const std::vector<int>& labels) {
  auto params = net.params();
  deptype::nn::zero_grads(params);
  for (std::size_t i = 0; i < xs.size(); ++i) net.loss_and_grad(xs[i], labels[i], nullptr);
  auto loss = [&] {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) total -= std::log(net.proba(xs[i])[static_cast<std::size_t>(labels[i])]);
    return total;
  };
  return oracle::check_gradients(params, loss, 1e-3, 1e-4);
}

struct NamedCheck {
  std::string name;
  oracle::GradCheck result;
};

// CNN and LSTM, each with a learned embedding and with pre-embedded input.
inline std::vector<NamedCheck> all_grad_checks() {
  using deptype::nn::CnnNet;
  using deptype::nn::LstmNet;
  const std::vector<int> labels = {0, 3, 5};
  std::vector<NamedCheck> out;
  {
    CnnNet net(CnnNet::Shape{12, 5, {2, 3}, 4, 6, 0.5}, 101);
    out.push_back({"cnn", grad_check(net, grad_inputs(12, 0, 1), labels)});
  }
  {
    CnnNet net(CnnNet::Shape{0, 5, {2, 3}, 4, 6, 0.5}, 102);
    out.push_back({"cnn_pre_embedded", grad_check(net, grad_inputs(12, 5, 2), labels)});
  }
  {
    LstmNet net(LstmNet::Shape{12, 4, 2, 5, 6, 0.2}, 103);
    out.push_back({"lstm", grad_check(net, grad_inputs(12, 0, 3), labels)});
  }
  {
    LstmNet net(LstmNet::Shape{0, 4, 1, 6, 6, 0.4}, 104);
    out.push_back({"lstm_pre_embedded", grad_check(net, grad_inputs(12, 4, 4), labels)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Naive Bayes enumeration

struct NbSweep {
  long corpora = 0;
  long comparisons = 0;
  // Corpora missing a label, which training must reject.
  long one_label = 0;
  bool one_label_rejected = true;
  double max_abs_diff = 0.0;
};

// Every corpus of 1..max_docs documents (as a multiset) over a vocabulary of
// 1..3 terms, each document holding 1 or 2 tokens and carrying one of two
// labels. Each trained model is queried on every document of 0..3 tokens.
// Corpora holding only one label are checked to be rejected instead.
inline NbSweep nb_sweep(int max_docs, double alpha) {
  NbSweep sweep;
  for (int vocab = 1; vocab <= 3; ++vocab) {
    // all count vectors with total tokens in [lo, hi]
    auto count_vectors = [&](int lo, int hi) {
      std::vector<std::vector<int>> out;
      std::vector<int> c(static_cast<std::size_t>(vocab), 0);
      std::function<void(int, int)> rec = [&](int t, int left) {
        if (t == vocab) {
          int total = 0;
          for (int x : c) total += x;
          if (total >= lo && total <= hi) out.push_back(c);
          return;
        }
        for (int k = 0; k <= left; ++k) {
          c[t] = k;
          rec(t + 1, left - k);
        }
        c[t] = 0;
      };
      rec(0, hi);
      return out;
    };
    const auto doc_types = count_vectors(1, 2);
    const auto queries = count_vectors(0, 3);
    const int options = static_cast<int>(doc_types.size()) * 2;

    std::vector<int> chosen;
    auto check = [&] {
      std::vector<std::vector<int>> counts;
      std::vector<int> labels;
      std::vector<deptype::SparseVector> docs;
      for (int o : chosen) {
        counts.push_back(doc_types[static_cast<std::size_t>(o / 2)]);
        labels.push_back(o % 2);
        deptype::SparseVector v;
        v.dim = vocab;
        for (int t = 0; t < vocab; ++t)
          if (counts.back()[t]) v.entries.emplace_back(t, counts.back()[t]);
        docs.push_back(std::move(v));
      }
      if (std::count(labels.begin(), labels.end(), labels.front()) == static_cast<long>(labels.size())) {
        ++sweep.one_label;
        try {
          deptype::train_naive_bayes(docs, labels, 2, alpha);
          sweep.one_label_rejected = false;
        } catch (const deptype::DataError&) {
        }
        return;
      }
      auto model = deptype::train_naive_bayes(docs, labels, 2, alpha);
      ++sweep.corpora;
      for (const auto& q : queries) {
        deptype::SparseVector v;
        v.dim = vocab;
        for (int t = 0; t < vocab; ++t)
          if (q[t]) v.entries.emplace_back(t, q[t]);
        const auto got = model.posterior(v);
        const auto want = oracle::nb_posterior(counts, labels, 2, vocab, alpha, q);
        for (int c = 0; c < 2; ++c) {
          const double d = std::abs(got[c] - want[c]);
          if (!(d <= sweep.max_abs_diff)) sweep.max_abs_diff = std::isnan(d) ? INFINITY : d;
        }
        ++sweep.comparisons;
      }
    };
    std::function<void(int)> grow = [&](int start) {
      if (!chosen.empty()) check();
      if (static_cast<int>(chosen.size()) == max_docs) return;
      for (int o = start; o < options; ++o) {
        chosen.push_back(o);
        grow(o);
        chosen.pop_back();
      }
    };
    grow(0);
  }
  return sweep;
}

// ---------------------------------------------------------------------------
// Shapley

struct ShapleyComparison {
  std::vector<std::string> tokens;
  std::vector<double> sampled;
  std::vector<double> exact;
  double max_abs_diff = 0.0;
  double efficiency_gap = 0.0;
};

inline ShapleyComparison compare_shapley(const deptype::ModelArtifact& art, const std::string& text, int samples,
                                         std::uint64_t seed) {
  ShapleyComparison r;
  auto attr = deptype::explain_shapley(art, text, samples, seed);
  r.tokens = attr.tokens;
  r.sampled = attr.scores;
  const auto cls = attr.predicted.label;
  const int n = static_cast<int>(attr.tokens.size());
  r.exact = oracle::exact_shapley(n, [&](std::uint32_t mask) {
    std::vector<std::string> kept;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) kept.push_back(attr.tokens[static_cast<std::size_t>(i)]);
    return art.probability(kept, cls);
  });
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    r.max_abs_diff = std::max(r.max_abs_diff, std::abs(r.sampled[i] - r.exact[i]));
    total += r.sampled[i];
  }
  r.efficiency_gap = std::abs(total - (art.probability(attr.tokens, cls) - art.probability({}, cls)));
  return r;
}

}  // namespace cases
