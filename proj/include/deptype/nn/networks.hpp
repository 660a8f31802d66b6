#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "deptype/nn/layers.hpp"
#include "deptype/nn/tensor.hpp"
#include "deptype/rng.hpp"

namespace deptype::nn {

// One network input. Learned-embedding networks read `ids`; networks on a
// fixed pretrained table read the rows of `embedded`, of which the first
// `length` carry tokens.
struct SequenceInput {
  std::vector<int> ids;
  Matrix embedded;
  int length = 0;
};

// Text CNN: embedding -> conv bank (ReLU, global max pool) -> dropout ->
// dense -> softmax. Without a learned embedding the input rows are used as
// they are.
class CnnNet {
 public:
  struct Shape {
    int vocab_size = 0;  // 0: input is pre-embedded
    int embed_dim = 100;
    std::vector<int> widths = {3, 4, 5};
    int filters = 64;
    int classes = 6;
    double dropout = 0.5;
  };

  CnnNet() = default;
  CnnNet(const Shape& shape, std::uint64_t seed) : shape_(shape) {
    Rng rng(seed);
    if (shape.vocab_size > 0) embedding_ = Embedding("embedding", shape.vocab_size, shape.embed_dim, rng);
    conv_ = ConvBank("conv", shape.widths, shape.filters, shape.embed_dim, rng);
    out_ = Dense("out", conv_.out_dim(), shape.classes, rng);
  }

  const Shape& shape() const { return shape_; }

  std::vector<Param*> params() {
    std::vector<Param*> p;
    if (embedding_) embedding_->collect(p);
    conv_.collect(p);
    out_.collect(p);
    return p;
  }

  std::vector<double> logits(const SequenceInput& in) const {
    const Matrix x = input_matrix(in);
    return out_.forward(conv_.forward(x, nullptr));
  }

  std::vector<double> proba(const SequenceInput& in) const { return linalg::softmax(logits(in)); }

  // Cross-entropy loss of one example; gradients are added to the params.
  // `dropout_rng` null means inference mode (no dropout).
  double loss_and_grad(const SequenceInput& in, int label, Rng* dropout_rng, double weight = 1.0,
                       std::vector<double>* probs = nullptr) {
    const Matrix x = input_matrix(in);
    ConvBank::Cache cache;
    auto pooled = conv_.forward(x, &cache);
    const auto mask = dropout_mask(pooled.size(), shape_.dropout, dropout_rng);
    for (std::size_t i = 0; i < pooled.size(); ++i) pooled[i] *= mask[i];
    const auto z = out_.forward(pooled);
    std::vector<double> dz;
    const double loss = softmax_cross_entropy(z, label, dz, probs);
    for (auto& g : dz) g *= weight;
    auto dpooled = out_.backward(pooled, dz);
    for (std::size_t i = 0; i < dpooled.size(); ++i) dpooled[i] *= mask[i];
    const Matrix dx = conv_.backward(x, cache, dpooled);
    if (embedding_) embedding_->backward(in.ids, dx);
    return loss * weight;
  }

 private:
  Matrix input_matrix(const SequenceInput& in) const {
    return embedding_ ? embedding_->forward(in.ids) : in.embedded;
  }

  Shape shape_;
  std::optional<Embedding> embedding_;
  ConvBank conv_;
  Dense out_;
};

// Stacked LSTM classifier: embedding -> LSTM layers -> last hidden state ->
// dropout -> dense -> softmax. Runs over the attended positions only.
class LstmNet {
 public:
  struct Shape {
    int vocab_size = 0;  // 0: input is pre-embedded
    int embed_dim = 100;
    int layers = 2;
    int units = 64;
    int classes = 6;
    double dropout = 0.2;
  };

  LstmNet() = default;
  LstmNet(const Shape& shape, std::uint64_t seed) : shape_(shape) {
    Rng rng(seed);
    if (shape.vocab_size > 0) embedding_ = Embedding("embedding", shape.vocab_size, shape.embed_dim, rng);
    int in = shape.embed_dim;
    for (int l = 0; l < shape.layers; ++l) {
      layers_.emplace_back("lstm" + std::to_string(l), in, shape.units, rng);
      in = shape.units;
    }
    out_ = Dense("out", shape.units, shape.classes, rng);
  }

  const Shape& shape() const { return shape_; }
  const std::vector<LstmLayer>& layers() const { return layers_; }

  std::vector<Param*> params() {
    std::vector<Param*> p;
    if (embedding_) embedding_->collect(p);
    for (auto& l : layers_) l.collect(p);
    out_.collect(p);
    return p;
  }

  std::vector<double> logits(const SequenceInput& in) const {
    std::vector<LstmLayer::Cache> caches(layers_.size());
    std::vector<Matrix> inputs;
    return out_.forward(encode(in, caches, inputs));
  }

  std::vector<double> proba(const SequenceInput& in) const { return linalg::softmax(logits(in)); }

  double loss_and_grad(const SequenceInput& in, int label, Rng* dropout_rng, double weight = 1.0,
                       std::vector<double>* probs = nullptr) {
    std::vector<LstmLayer::Cache> caches(layers_.size());
    std::vector<Matrix> inputs;
    auto h = encode(in, caches, inputs);
    const auto mask = dropout_mask(h.size(), shape_.dropout, dropout_rng);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] *= mask[i];
    const auto z = out_.forward(h);
    std::vector<double> dz;
    const double loss = softmax_cross_entropy(z, label, dz, probs);
    for (auto& g : dz) g *= weight;
    auto dh = out_.backward(h, dz);
    const int T = inputs.empty() ? 0 : inputs.front().rows;
    if (T == 0) return loss * weight;
    for (std::size_t i = 0; i < dh.size(); ++i) dh[i] *= mask[i];
    Matrix dstates(T, shape_.units);
    std::copy(dh.begin(), dh.end(), dstates.row(T - 1).begin());
    for (std::size_t l = layers_.size(); l-- > 0;) {
      Matrix dx = layers_[l].backward(inputs[l], caches[l], dstates);
      dstates = std::move(dx);
    }
    if (embedding_) embedding_->backward(attended_ids(in), dstates);
    return loss * weight;
  }

 private:
  static std::vector<int> attended_ids(const SequenceInput& in) {
    return std::vector<int>(in.ids.begin(), in.ids.begin() + in.length);
  }

  Matrix input_matrix(const SequenceInput& in) const {
    if (embedding_) return embedding_->forward(attended_ids(in));
    Matrix x(in.length, in.embedded.cols);
    std::copy(in.embedded.data.begin(), in.embedded.data.begin() + static_cast<std::ptrdiff_t>(x.size()), x.data.begin());
    return x;
  }

  // Final hidden state of the top layer (zeros for an empty sequence).
  std::vector<double> encode(const SequenceInput& in, std::vector<LstmLayer::Cache>& caches,
                             std::vector<Matrix>& inputs) const {
    inputs.clear();
    inputs.push_back(input_matrix(in));
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Matrix& h = layers_[l].forward(inputs[l], caches[l]);
      if (l + 1 < layers_.size()) inputs.push_back(h);
    }
    std::vector<double> last(static_cast<std::size_t>(shape_.units), 0.0);
    const Matrix& top = caches.back().h;
    if (top.rows > 0) std::copy(top.row(top.rows - 1).begin(), top.row(top.rows - 1).end(), last.begin());
    return last;
  }

  Shape shape_;
  std::optional<Embedding> embedding_;
  std::vector<LstmLayer> layers_;
  Dense out_;
};

// Classification head over a pooled encoder vector: dropout -> dense -> softmax.
class PooledHead {
 public:
  PooledHead() = default;
  PooledHead(int hidden, int classes, double dropout, std::uint64_t seed) : dropout_(dropout) {
    Rng rng(seed);
    out_ = Dense("head", hidden, classes, rng);
  }

  std::vector<Param*> params() {
    std::vector<Param*> p;
    out_.collect(p);
    return p;
  }

  std::vector<double> proba(const std::vector<double>& pooled) const { return linalg::softmax(out_.forward(pooled)); }

  double loss_and_grad(const std::vector<double>& pooled, int label, Rng* dropout_rng, double weight = 1.0,
                       std::vector<double>* probs = nullptr) {
    const auto mask = dropout_mask(pooled.size(), dropout_, dropout_rng);
    std::vector<double> x(pooled);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= mask[i];
    const auto z = out_.forward(x);
    std::vector<double> dz;
    const double loss = softmax_cross_entropy(z, label, dz, probs);
    for (auto& g : dz) g *= weight;
    out_.backward(x, dz);
    return loss * weight;
  }

 private:
  double dropout_ = 0.1;
  Dense out_;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

using TrainingHistory = std::vector<EpochRecord>;

struct FitOptions {
  int epochs = 10;
  int batch_size = 32;
  OptimizerKind optimizer = OptimizerKind::adam;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  std::vector<double> class_weights;  // empty: all 1
};

// Mini-batch training loop shared by every network. Each epoch visits the
// examples in a seeded shuffled order; the gradient of a batch is the mean
// over its examples. Train loss/accuracy are running values over the epoch
// (dropout active); validation is measured after the epoch in inference
// mode.
template <typename Net, typename Input>
TrainingHistory fit(Net& net, const std::vector<Input>& train, const std::vector<int>& labels,
                    const std::vector<Input>& val, const std::vector<int>& val_labels, const FitOptions& opt) {
  if (train.empty()) throw DataError("cannot train on an empty batch");
  if (train.size() != labels.size() || val.size() != val_labels.size())
    throw DataError("inputs and labels differ in length");
  if (opt.epochs < 1 || opt.batch_size < 1) throw DataError("epochs and batch_size must be positive");
  auto params = net.params();
  Optimizer optimizer(opt.optimizer, opt.learning_rate);
  Rng order_rng(splitmix64(opt.seed ^ 0x6f72646572ULL));
  Rng dropout_rng(splitmix64(opt.seed ^ 0x64726f70ULL));
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto weight_of = [&](int label) {
    return opt.class_weights.empty() ? 1.0 : opt.class_weights[static_cast<std::size_t>(label)];
  };

  TrainingHistory history;
  std::vector<double> probs;
  for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(opt.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(opt.batch_size));
      zero_grads(params);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t i = order[k];
        loss_sum += net.loss_and_grad(train[i], labels[i], &dropout_rng, weight_of(labels[i]), &probs);
        const auto pred = std::max_element(probs.begin(), probs.end()) - probs.begin();
        correct += pred == labels[i];
      }
      scale_grads(params, 1.0 / static_cast<double>(end - start));
      optimizer.step(params);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(train.size());
    rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    if (!val.empty()) {
      double vloss = 0.0;
      std::size_t vcorrect = 0;
      for (std::size_t i = 0; i < val.size(); ++i) {
        const auto p = net.proba(val[i]);
        vloss += -std::log(std::max(p[static_cast<std::size_t>(val_labels[i])], 1e-300));
        vcorrect += (std::max_element(p.begin(), p.end()) - p.begin()) == val_labels[i];
      }
      rec.val_loss = vloss / static_cast<double>(val.size());
      rec.val_accuracy = static_cast<double>(vcorrect) / static_cast<double>(val.size());
    } else {
      rec.val_loss = std::numeric_limits<double>::quiet_NaN();
      rec.val_accuracy = std::numeric_limits<double>::quiet_NaN();
    }
    history.push_back(rec);
  }
  return history;
}

}  // namespace deptype::nn
