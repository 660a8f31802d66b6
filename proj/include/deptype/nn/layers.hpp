#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "deptype/error.hpp"
#include "deptype/nn/tensor.hpp"
#include "deptype/rng.hpp"

namespace deptype::nn {

// A trainable tensor with its gradient accumulator and optimizer moments.
struct Param {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix m;
  Matrix v;
  bool trainable = true;

  Param() = default;
  Param(std::string n, int rows, int cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols), m(rows, cols), v(rows, cols) {}

  void init_uniform(Rng& rng, double limit) {
    for (auto& x : value.data) x = rng.uniform(-limit, limit);
  }
  // Glorot/Xavier uniform.
  void init_glorot(Rng& rng, int fan_in, int fan_out) {
    init_uniform(rng, std::sqrt(6.0 / static_cast<double>(fan_in + fan_out)));
  }
};

enum class OptimizerKind { adam, adamax };

inline std::string_view optimizer_name(OptimizerKind k) { return k == OptimizerKind::adam ? "adam" : "adamax"; }
inline OptimizerKind parse_optimizer(std::string_view s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "adamax") return OptimizerKind::adamax;
  throw DataError("unknown optimizer '" + std::string(s) + "' (expected adam or adamax)");
}

// Adam and Adamax with the usual defaults (beta1 0.9, beta2 0.999, eps 1e-8).
// Adamax keeps an exponentially weighted infinity norm in `v`.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double lr) : kind_(kind), lr_(lr) {}

  void step(const std::vector<Param*>& params) {
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (Param* p : params) {
      if (!p->trainable) continue;
      auto& w = p->value.data;
      auto& g = p->grad.data;
      auto& m = p->m.data;
      auto& v = p->v.data;
      for (std::size_t i = 0; i < w.size(); ++i) {
        m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
        if (kind_ == OptimizerKind::adam) {
          v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
          w[i] -= lr_ * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + kEps);
        } else {
          v[i] = std::max(kBeta2 * v[i], std::abs(g[i]));
          w[i] -= (lr_ / bc1) * m[i] / (v[i] + kEps);
        }
      }
    }
  }

  long steps() const { return t_; }

 private:
  static constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  OptimizerKind kind_;
  double lr_;
  long t_ = 0;
};

inline void zero_grads(const std::vector<Param*>& params) {
  for (Param* p : params) p->grad.zero();
}

inline void scale_grads(const std::vector<Param*>& params, double s) {
  for (Param* p : params)
    for (auto& g : p->grad.data) g *= s;
}

// Inverted dropout mask: kept units are scaled by 1/(1-rate).
inline std::vector<double> dropout_mask(std::size_t n, double rate, Rng* rng) {
  std::vector<double> mask(n, 1.0);
  if (rng == nullptr || rate <= 0.0) return mask;
  const double keep = 1.0 - rate;
  for (auto& m : mask) m = rng->uniform() < keep ? 1.0 / keep : 0.0;
  return mask;
}

// Cross-entropy of softmax(logits) against `label`. Writes dL/dlogits.
inline double softmax_cross_entropy(std::span<const double> logits, int label, std::vector<double>& dlogits,
                                    std::vector<double>* probs_out = nullptr) {
  auto p = linalg::softmax(logits);
  dlogits.assign(p.begin(), p.end());
  dlogits[static_cast<std::size_t>(label)] -= 1.0;
  const double loss = -std::log(std::max(p[static_cast<std::size_t>(label)], 1e-300));
  if (probs_out) *probs_out = std::move(p);
  return loss;
}

// ---------------------------------------------------------------------------

// Fully connected layer y = W x + b.
struct Dense {
  Param weight;
  Param bias;

  Dense() = default;
  Dense(const std::string& name, int in, int out, Rng& rng)
      : weight(name + ".weight", out, in), bias(name + ".bias", out, 1) {
    weight.init_glorot(rng, in, out);
  }

  int in() const { return weight.value.cols; }
  int out() const { return weight.value.rows; }

  std::vector<double> forward(std::span<const double> x) const {
    std::vector<double> y(bias.value.data);
    linalg::gemv_add(weight.value, x, y);
    return y;
  }

  // Accumulates parameter gradients and returns dL/dx.
  std::vector<double> backward(std::span<const double> x, std::span<const double> dy) {
    linalg::outer_add(dy, x, weight.grad);
    for (std::size_t i = 0; i < dy.size(); ++i) bias.grad.data[i] += dy[i];
    std::vector<double> dx(x.size(), 0.0);
    linalg::gemv_t_add(weight.value, dy, dx);
    return dx;
  }

  void collect(std::vector<Param*>& out) {
    out.push_back(&weight);
    out.push_back(&bias);
  }
};

// Learned lookup table. Rows are gathered on the forward pass and the
// gradient is scattered back by id.
struct Embedding {
  Param table;

  Embedding() = default;
  Embedding(const std::string& name, int vocab, int dim, Rng& rng) : table(name + ".table", vocab, dim) {
    table.init_uniform(rng, 0.05);
  }

  int dim() const { return table.value.cols; }

  Matrix forward(const std::vector<int>& ids) const {
    Matrix x(static_cast<int>(ids.size()), dim());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto src = table.value.row(ids[i]);
      std::copy(src.begin(), src.end(), x.row(static_cast<int>(i)).begin());
    }
    return x;
  }

  void backward(const std::vector<int>& ids, const Matrix& dx) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto dst = table.grad.row(ids[i]);
      const auto src = dx.row(static_cast<int>(i));
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
  }

  void collect(std::vector<Param*>& out) { out.push_back(&table); }
};

// Bank of 1-D convolutions of several widths over the rows of an L x d
// input, each followed by ReLU and a global max over positions. Output is
// filters * widths.size() features.
struct ConvBank {
  std::vector<int> widths;
  int filters = 0;
  std::vector<Param> weights;  // per width: filters x (width * d)
  std::vector<Param> biases;   // per width: filters x 1

  struct Cache {
    std::vector<std::vector<int>> argmax;  // per width, per filter: best position or -1
    std::vector<std::vector<double>> best;  // pre-activation at argmax
  };

  ConvBank() = default;
  ConvBank(const std::string& name, std::vector<int> ws, int n_filters, int dim, Rng& rng)
      : widths(std::move(ws)), filters(n_filters) {
    for (int w : widths) {
      weights.emplace_back(name + ".w" + std::to_string(w), filters, w * dim);
      weights.back().init_glorot(rng, w * dim, filters);
      biases.emplace_back(name + ".b" + std::to_string(w), filters, 1);
    }
  }

  int out_dim() const { return filters * static_cast<int>(widths.size()); }

  std::vector<double> forward(const Matrix& x, Cache* cache) const {
    std::vector<double> out(static_cast<std::size_t>(out_dim()), 0.0);
    if (cache) {
      cache->argmax.assign(widths.size(), std::vector<int>(static_cast<std::size_t>(filters), -1));
      cache->best.assign(widths.size(), std::vector<double>(static_cast<std::size_t>(filters), 0.0));
    }
    const int d = x.cols;
    for (std::size_t wi = 0; wi < widths.size(); ++wi) {
      const int w = widths[wi];
      const int positions = x.rows - w + 1;
      const Matrix& wt = weights[wi].value;
      for (int f = 0; f < filters; ++f) {
        double best = -std::numeric_limits<double>::infinity();
        int best_pos = -1;
        const double* wr = wt.data.data() + static_cast<std::size_t>(f) * wt.cols;
        for (int p = 0; p < positions; ++p) {
          // Window rows p..p+w-1 are contiguous in row-major storage.
          const double* xs = x.data.data() + static_cast<std::size_t>(p) * d;
          double z = biases[wi].value.data[f];
          for (int k = 0; k < w * d; ++k) z += wr[k] * xs[k];
          if (z > best) {
            best = z;
            best_pos = p;
          }
        }
        const double act = best_pos < 0 ? 0.0 : std::max(0.0, best);
        out[wi * filters + f] = act;
        if (cache) {
          cache->argmax[wi][f] = best_pos;
          cache->best[wi][f] = best_pos < 0 ? 0.0 : best;
        }
      }
    }
    return out;
  }

  // Returns dL/dx given dL/dout.
  Matrix backward(const Matrix& x, const Cache& cache, std::span<const double> dout) {
    Matrix dx(x.rows, x.cols);
    const int d = x.cols;
    for (std::size_t wi = 0; wi < widths.size(); ++wi) {
      const int w = widths[wi];
      Matrix& wg = weights[wi].grad;
      const Matrix& wt = weights[wi].value;
      for (int f = 0; f < filters; ++f) {
        const int p = cache.argmax[wi][f];
        if (p < 0 || cache.best[wi][f] <= 0.0) continue;
        const double g = dout[wi * filters + f];
        if (g == 0.0) continue;
        biases[wi].grad.data[f] += g;
        const double* xs = x.data.data() + static_cast<std::size_t>(p) * d;
        double* dxs = dx.data.data() + static_cast<std::size_t>(p) * d;
        double* wgr = wg.data.data() + static_cast<std::size_t>(f) * wg.cols;
        const double* wr = wt.data.data() + static_cast<std::size_t>(f) * wt.cols;
        for (int k = 0; k < w * d; ++k) {
          wgr[k] += g * xs[k];
          dxs[k] += g * wr[k];
        }
      }
    }
    return dx;
  }

  void collect(std::vector<Param*>& out) {
    for (std::size_t i = 0; i < weights.size(); ++i) {
      out.push_back(&weights[i]);
      out.push_back(&biases[i]);
    }
  }
};

// One LSTM layer. Gate order in the stacked weights: input, forget, cell,
// output. The forget-gate bias starts at 1.
struct LstmLayer {
  Param wx;  // 4H x in
  Param wh;  // 4H x H
  Param b;   // 4H x 1
  int units = 0;

  struct Cache {
    Matrix gates;  // T x 4H, post-activation
    Matrix c;      // T x H
    Matrix h;      // T x H
  };

  LstmLayer() = default;
  LstmLayer(const std::string& name, int in, int hidden, Rng& rng)
      : wx(name + ".wx", 4 * hidden, in), wh(name + ".wh", 4 * hidden, hidden), b(name + ".b", 4 * hidden, 1),
        units(hidden) {
    wx.init_glorot(rng, in, 4 * hidden);
    wh.init_glorot(rng, hidden, 4 * hidden);
    for (int j = 0; j < hidden; ++j) b.value.data[hidden + j] = 1.0;
  }

  // x: T x in. Returns hidden states T x H.
  const Matrix& forward(const Matrix& x, Cache& cache) const {
    const int T = x.rows, H = units;
    cache.gates = Matrix(T, 4 * H);
    cache.c = Matrix(T, H);
    cache.h = Matrix(T, H);
    std::vector<double> z(static_cast<std::size_t>(4 * H));
    for (int t = 0; t < T; ++t) {
      std::copy(b.value.data.begin(), b.value.data.end(), z.begin());
      linalg::gemv_add(wx.value, x.row(t), z);
      if (t > 0) linalg::gemv_add(wh.value, cache.h.row(t - 1), z);
      auto g = cache.gates.row(t);
      for (int j = 0; j < H; ++j) {
        g[j] = linalg::sigmoid(z[j]);
        g[H + j] = linalg::sigmoid(z[H + j]);
        g[2 * H + j] = std::tanh(z[2 * H + j]);
        g[3 * H + j] = linalg::sigmoid(z[3 * H + j]);
        const double c_prev = t > 0 ? cache.c(t - 1, j) : 0.0;
        const double c = g[H + j] * c_prev + g[j] * g[2 * H + j];
        cache.c(t, j) = c;
        cache.h(t, j) = g[3 * H + j] * std::tanh(c);
      }
    }
    return cache.h;
  }

  // dh: T x H gradient w.r.t. every output state. Returns dL/dx (T x in).
  Matrix backward(const Matrix& x, const Cache& cache, const Matrix& dh_out) {
    const int T = x.rows, H = units;
    Matrix dx(T, x.cols);
    std::vector<double> dh_next(static_cast<std::size_t>(H), 0.0), dc_next(static_cast<std::size_t>(H), 0.0);
    std::vector<double> dz(static_cast<std::size_t>(4 * H));
    for (int t = T - 1; t >= 0; --t) {
      const auto g = cache.gates.row(t);
      for (int j = 0; j < H; ++j) {
        const double dh = dh_out(t, j) + dh_next[j];
        const double c = cache.c(t, j);
        const double tc = std::tanh(c);
        const double c_prev = t > 0 ? cache.c(t - 1, j) : 0.0;
        const double i = g[j], f = g[H + j], gg = g[2 * H + j], o = g[3 * H + j];
        const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
        dz[j] = dc * gg * i * (1.0 - i);
        dz[H + j] = dc * c_prev * f * (1.0 - f);
        dz[2 * H + j] = dc * i * (1.0 - gg * gg);
        dz[3 * H + j] = dh * tc * o * (1.0 - o);
        dc_next[j] = dc * f;
      }
      for (int k = 0; k < 4 * H; ++k) b.grad.data[k] += dz[k];
      linalg::outer_add(dz, x.row(t), wx.grad);
      linalg::gemv_t_add(wx.value, dz, dx.row(t));
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      if (t > 0) {
        linalg::outer_add(dz, cache.h.row(t - 1), wh.grad);
        linalg::gemv_t_add(wh.value, dz, dh_next);
      }
    }
    return dx;
  }

  void collect(std::vector<Param*>& out) {
    out.push_back(&wx);
    out.push_back(&wh);
    out.push_back(&b);
  }
};

}  // namespace deptype::nn
