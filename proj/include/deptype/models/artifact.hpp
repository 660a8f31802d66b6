#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptype/classes.hpp"
#include "deptype/corpus.hpp"
#include "deptype/error.hpp"
#include "deptype/features.hpp"
#include "deptype/models/config.hpp"
#include "deptype/models/linear_svm.hpp"
#include "deptype/models/naive_bayes.hpp"
#include "deptype/models/param_io.hpp"
#include "deptype/models/random_forest.hpp"
#include "deptype/nn/networks.hpp"
#include "deptype/textprep.hpp"

namespace deptype {

struct Prediction {
  DepressionClass label = DepressionClass::NoDepression;
  // Aligned to the artifact's label order.
  std::array<double, kNumClasses> probabilities{};
};

// Picks the most probable class; ties go to the earlier label.
inline Prediction make_prediction(const std::vector<double>& probs, const std::vector<DepressionClass>& label_order) {
  if (probs.size() != static_cast<std::size_t>(kNumClasses) || label_order.size() != probs.size())
    throw DataError("model produced " + std::to_string(probs.size()) + " probabilities, expected " +
                    std::to_string(kNumClasses));
  Prediction p;
  std::size_t best = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    p.probabilities[i] = probs[i];
    if (probs[i] > probs[best]) best = i;
  }
  p.label = label_order[best];
  return p;
}

// A trained model over preprocessed word tokens.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<double> probabilities(const std::vector<std::string>& tokens) const = 0;
  virtual TensorMap parameters() const = 0;
  // Writes the feature files into `dir` and describes them.
  virtual nlohmann::ordered_json save_features(const std::filesystem::path& dir) const = 0;
};

// ---------------------------------------------------------------------------
// Classical models

class NaiveBayesClassifier final : public Classifier {
 public:
  NaiveBayesClassifier(Vocabulary vocab, FeatureMode mode, NaiveBayesModel model)
      : vocab_(std::move(vocab)), mode_(mode), model_(std::move(model)) {}

  std::vector<double> probabilities(const std::vector<std::string>& tokens) const override {
    return model_.posterior(transform(tokens, vocab_, mode_));
  }
  TensorMap parameters() const override {
    return {{"nb.log_prior", Tensor::from_vector(model_.log_prior)},
            {"nb.log_likelihood", Tensor::from_matrix(model_.log_likelihood)},
            {"nb.alpha", Tensor::from_vector({model_.alpha})}};
  }
  nlohmann::ordered_json save_features(const std::filesystem::path& dir) const override {
    vocab_.save(dir / "vocab.txt");
    return {{"type", feature_mode_name(mode_)}, {"vocabulary", "vocab.txt"}};
  }
  const NaiveBayesModel& model() const { return model_; }
  const Vocabulary& vocabulary() const { return vocab_; }

 private:
  Vocabulary vocab_;
  FeatureMode mode_;
  NaiveBayesModel model_;
};

class SvmClassifier final : public Classifier {
 public:
  SvmClassifier(Vocabulary vocab, FeatureMode mode, LinearSvmModel model)
      : vocab_(std::move(vocab)), mode_(mode), model_(std::move(model)) {}

  std::vector<double> probabilities(const std::vector<std::string>& tokens) const override {
    return model_.probabilities(transform(tokens, vocab_, mode_));
  }
  TensorMap parameters() const override { return {{"svm.weights", Tensor::from_matrix(model_.weights)}}; }
  nlohmann::ordered_json save_features(const std::filesystem::path& dir) const override {
    vocab_.save(dir / "vocab.txt");
    return {{"type", feature_mode_name(mode_)}, {"vocabulary", "vocab.txt"}};
  }

 private:
  Vocabulary vocab_;
  FeatureMode mode_;
  LinearSvmModel model_;
};

class ForestClassifier final : public Classifier {
 public:
  ForestClassifier(Vocabulary vocab, FeatureMode mode, RandomForestModel model)
      : vocab_(std::move(vocab)), mode_(mode), model_(std::move(model)) {}

  std::vector<double> probabilities(const std::vector<std::string>& tokens) const override {
    return model_.vote_fractions(transform(tokens, vocab_, mode_).dense());
  }
  TensorMap parameters() const override {
    TensorMap t;
    t["rf.n_trees"] = Tensor::from_vector({static_cast<double>(model_.trees.size())});
    for (std::size_t i = 0; i < model_.trees.size(); ++i) {
      const auto& tree = model_.trees[i];
      const std::string p = "rf.tree" + std::to_string(i) + ".";
      t[p + "feature"] = Tensor::from_ints(tree.feature);
      t[p + "threshold"] = Tensor::from_vector(tree.threshold);
      t[p + "left"] = Tensor::from_ints(tree.left);
      t[p + "right"] = Tensor::from_ints(tree.right);
      t[p + "leaf_class"] = Tensor::from_ints(tree.leaf_class);
    }
    return t;
  }
  nlohmann::ordered_json save_features(const std::filesystem::path& dir) const override {
    vocab_.save(dir / "vocab.txt");
    return {{"type", feature_mode_name(mode_)}, {"vocabulary", "vocab.txt"}};
  }

 private:
  Vocabulary vocab_;
  FeatureMode mode_;
  RandomForestModel model_;
};

// ---------------------------------------------------------------------------
// Neural models

// How a network turns word tokens into a SequenceInput.
struct SequenceFeatures {
  std::shared_ptr<const SubwordVocab> subword;       // set for learned embeddings
  std::shared_ptr<const EmbeddingTable> embeddings;  // set for pretrained tables
  int max_len = 64;
  // CNNs read the whole padded window; LSTMs only the attended positions.
  bool full_window = true;

  nn::SequenceInput build(const std::vector<std::string>& tokens) const {
    nn::SequenceInput in;
    if (subword) {
      auto seq = subword->encode(tokens);
      in.length = full_window ? static_cast<int>(seq.ids.size()) : seq.content_length();
      in.ids = std::move(seq.ids);
    } else {
      in.embedded = embed_sequence(tokens, *embeddings, max_len);
      in.length = full_window ? max_len : std::min<int>(static_cast<int>(tokens.size()), max_len);
    }
    return in;
  }

  nlohmann::ordered_json save(const std::filesystem::path& dir) const {
    if (subword) {
      subword->save(dir / "subword.txt");
      return {{"type", "subword"}, {"subword_vocab", "subword.txt"}, {"max_len", max_len}};
    }
    embeddings->save(dir / "embeddings.txt");
    return {{"type", "glove"},
            {"embeddings", "embeddings.txt"},
            {"embedding_dim", embeddings->dim()},
            {"oov_policy", oov_policy_name(embeddings->oov_policy())},
            {"max_len", max_len}};
  }
};

inline TensorMap collect_tensors(std::vector<nn::Param*> params) {
  TensorMap t;
  for (auto* p : params) t[p->name] = Tensor::from_matrix(p->value);
  return t;
}

inline void assign_tensors(std::vector<nn::Param*> params, const TensorMap& tensors) {
  for (auto* p : params) {
    Matrix m = require(tensors, p->name).to_matrix();
    if (m.rows != p->value.rows || m.cols != p->value.cols)
      throw DataError("tensor '" + p->name + "' has the wrong shape for this configuration");
    p->value = std::move(m);
  }
}

template <typename Net>
class NetClassifier final : public Classifier {
 public:
  NetClassifier(SequenceFeatures features, Net net) : features_(std::move(features)), net_(std::move(net)) {}

  std::vector<double> probabilities(const std::vector<std::string>& tokens) const override {
    return net_.proba(features_.build(tokens));
  }
  TensorMap parameters() const override { return collect_tensors(const_cast<Net&>(net_).params()); }
  nlohmann::ordered_json save_features(const std::filesystem::path& dir) const override {
    return features_.save(dir);
  }
  const Net& net() const { return net_; }

 private:
  SequenceFeatures features_;
  Net net_;
};

class EncoderClassifier final : public Classifier {
 public:
  EncoderClassifier(std::shared_ptr<const SubwordVocab> vocab, std::shared_ptr<const EncoderAdapter> adapter,
                    nn::PooledHead head, std::uint64_t adapter_seed)
      : vocab_(std::move(vocab)), adapter_(std::move(adapter)), head_(std::move(head)), adapter_seed_(adapter_seed) {}

  std::vector<double> probabilities(const std::vector<std::string>& tokens) const override {
    return head_.proba(adapter_->encode(vocab_->encode(tokens)).pooled);
  }
  TensorMap parameters() const override { return collect_tensors(const_cast<nn::PooledHead&>(head_).params()); }
  nlohmann::ordered_json save_features(const std::filesystem::path& dir) const override {
    vocab_->save(dir / "subword.txt");
    return {{"type", "encoder"},
            {"subword_vocab", "subword.txt"},
            {"max_len", vocab_->max_len()},
            {"adapter",
             {{"name", adapter_->name()}, {"hidden_dim", adapter_->hidden_dim()}, {"seed", adapter_seed_}}}};
  }

 private:
  std::shared_ptr<const SubwordVocab> vocab_;
  std::shared_ptr<const EncoderAdapter> adapter_;
  nn::PooledHead head_;
  std::uint64_t adapter_seed_;
};

// ---------------------------------------------------------------------------
// Artifact

struct PipelineSettings {
  NormalizationConfig normalization;
  Stoplist stoplist = default_stoplist();
};

inline nlohmann::ordered_json to_json(const NormalizationConfig& c) {
  return {{"lowercase", c.lowercase},
          {"strip_urls", c.strip_urls},
          {"strip_handles", c.strip_handles},
          {"strip_hashtag_marks", c.strip_hashtag_marks},
          {"strip_punct_and_digits", c.strip_punct_and_digits},
          {"collapse_whitespace", c.collapse_whitespace}};
}

inline NormalizationConfig normalization_from_json(const nlohmann::json& j) {
  NormalizationConfig c;
  c.lowercase = j.at("lowercase").get<bool>();
  c.strip_urls = j.at("strip_urls").get<bool>();
  c.strip_handles = j.at("strip_handles").get<bool>();
  c.strip_hashtag_marks = j.at("strip_hashtag_marks").get<bool>();
  c.strip_punct_and_digits = j.at("strip_punct_and_digits").get<bool>();
  c.collapse_whitespace = j.at("collapse_whitespace").get<bool>();
  return c;
}

inline nlohmann::ordered_json history_to_json(const nn::TrainingHistory& h) {
  auto series = [&](auto field) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& r : h) a.push_back(r.*field);
    return a;
  };
  return {{"epochs", h.size()},
          {"train_loss", series(&nn::EpochRecord::train_loss)},
          {"val_loss", series(&nn::EpochRecord::val_loss)},
          {"train_accuracy", series(&nn::EpochRecord::train_accuracy)},
          {"val_accuracy", series(&nn::EpochRecord::val_accuracy)}};
}

inline nn::TrainingHistory history_from_json(const nlohmann::json& j) {
  nn::TrainingHistory h;
  const auto n = j.at("epochs").get<std::size_t>();
  auto value = [&](const char* key, std::size_t i) {
    const auto& v = j.at(key).at(i);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  for (std::size_t i = 0; i < n; ++i)
    h.push_back({static_cast<int>(i + 1), value("train_loss", i), value("train_accuracy", i), value("val_loss", i),
                 value("val_accuracy", i)});
  return h;
}

class ModelArtifact {
 public:
  ModelKind kind = ModelKind::nb;
  TrainConfig config;
  std::vector<DepressionClass> label_order{kAllClasses.begin(), kAllClasses.end()};
  PipelineSettings pipeline;
  std::shared_ptr<const Classifier> model;
  nn::TrainingHistory history;

  std::vector<std::string> tokenize(std::string_view text) const {
    return preprocess_tokens(text, pipeline.normalization, pipeline.stoplist);
  }

  Prediction predict_tokens(const std::vector<std::string>& tokens) const {
    if (!model) throw DataError("artifact has no trained model");
    return make_prediction(model->probabilities(tokens), label_order);
  }

  Prediction predict(std::string_view text) const { return predict_tokens(tokenize(text)); }

  // Probability of `cls` for a token list.
  double probability(const std::vector<std::string>& tokens, DepressionClass cls) const {
    const auto p = predict_tokens(tokens);
    for (std::size_t i = 0; i < label_order.size(); ++i)
      if (label_order[i] == cls) return p.probabilities[i];
    return 0.0;
  }

  // Layout: artifact.json, params.bin, the feature files, stoplist.txt and
  // (neural kinds) history.json.
  void save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["kind"] = model_kind_name(kind);
    j["config"] = config.to_json();
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (auto c : label_order) labels.push_back(class_name(c));
    j["label_order"] = std::move(labels);
    j["normalization"] = to_json(pipeline.normalization);
    save_stoplist(pipeline.stoplist, dir / "stoplist.txt");
    j["stoplist"] = "stoplist.txt";
    j["feature_spec"] = model->save_features(dir);
    save_params(dir / "params.bin", model->parameters());
    j["params"] = "params.bin";
    if (!history.empty()) {
      std::ofstream h(dir / "history.json", std::ios::binary);
      h << history_to_json(history).dump(2) << '\n';
      j["history"] = "history.json";
    } else {
      j["history"] = nullptr;
    }
    std::ofstream out(dir / "artifact.json", std::ios::binary);
    if (!out) throw MissingResource("cannot write artifact to " + dir.string(), dir.string());
    out << j.dump(2) << '\n';
  }

  static ModelArtifact load(const std::filesystem::path& dir);
};

// ---------------------------------------------------------------------------
// Training

struct TrainResources {
  std::shared_ptr<const EmbeddingTable> embeddings;
  std::shared_ptr<const EncoderAdapter> adapter;
};

namespace detail {

inline std::vector<int> label_indices(const std::vector<LabeledExample>& examples) {
  std::vector<int> y;
  y.reserve(examples.size());
  for (const auto& e : examples) y.push_back(class_index(e.label));
  return y;
}

inline void require_all_classes(const std::vector<LabeledExample>& train) {
  std::set<DepressionClass> present;
  for (const auto& e : train) present.insert(e.label);
  for (auto c : kAllClasses)
    if (!present.contains(c)) throw DataError("training data has no examples of class " + std::string(class_name(c)));
}

inline std::vector<double> balanced_weights(const std::vector<int>& y, bool enabled) {
  if (!enabled) return {};
  std::vector<double> counts(kNumClasses, 0.0);
  for (int c : y) counts[c] += 1.0;
  std::vector<double> w(kNumClasses, 0.0);
  for (int c = 0; c < kNumClasses; ++c)
    w[c] = counts[c] > 0 ? static_cast<double>(y.size()) / (kNumClasses * counts[c]) : 0.0;
  return w;
}

inline nn::FitOptions fit_options(const TrainConfig& cfg, const std::vector<int>& y, double lr) {
  nn::FitOptions opt;
  opt.epochs = cfg.epochs;
  opt.batch_size = cfg.batch_size;
  opt.optimizer = cfg.optimizer;
  opt.learning_rate = lr;
  opt.seed = cfg.seed;
  opt.class_weights = balanced_weights(y, cfg.extras.contains("class_weight_balanced") &&
                                              cfg.extra("class_weight_balanced") != 0.0);
  return opt;
}

inline std::shared_ptr<const SubwordVocab> fit_subword(const std::vector<std::vector<std::string>>& docs,
                                                       const TrainConfig& cfg) {
  std::vector<std::string> corpus;
  std::set<std::string> chars;
  for (const auto& d : docs) {
    std::string line;
    for (const auto& t : d) {
      if (!line.empty()) line.push_back(' ');
      line += t;
      for (auto& u : utf8_units(t)) chars.insert(u);
    }
    corpus.push_back(std::move(line));
  }
  const int base = 4 + 2 * static_cast<int>(chars.size());
  const int target = std::max(cfg.extra_int("subword_vocab_size"), base);
  return std::make_shared<const SubwordVocab>(train_subword_vocab(corpus, target, cfg.extra_int("max_len")));
}

inline std::vector<int> cnn_widths(const TrainConfig& cfg) {
  std::vector<int> w;
  for (int k = cfg.extra_int("cnn_width_min"); k <= cfg.extra_int("cnn_width_max"); ++k) w.push_back(k);
  if (w.empty()) throw DataError("cnn_width_min must not exceed cnn_width_max");
  return w;
}

inline nn::CnnNet::Shape cnn_shape(const TrainConfig& cfg, int vocab_size, int embed_dim) {
  nn::CnnNet::Shape s;
  s.vocab_size = vocab_size;
  s.embed_dim = embed_dim;
  s.widths = cnn_widths(cfg);
  s.filters = cfg.extra_int("cnn_filters");
  s.classes = kNumClasses;
  s.dropout = cfg.dropout;
  return s;
}

inline nn::LstmNet::Shape lstm_shape(const TrainConfig& cfg, int vocab_size, int embed_dim) {
  nn::LstmNet::Shape s;
  s.vocab_size = vocab_size;
  s.embed_dim = embed_dim;
  s.layers = cfg.extra_int("lstm_layers");
  s.units = cfg.extra_int("lstm_units");
  s.classes = kNumClasses;
  s.dropout = cfg.dropout;
  return s;
}

inline std::uint64_t init_seed(const TrainConfig& cfg) { return splitmix64(cfg.seed ^ 0x696e6974ULL); }

}  // namespace detail

// Trains any model kind on word-level examples. Tokens are recomputed from
// clean_text with the artifact's own pipeline so that training and
// prediction see identical inputs.
inline ModelArtifact train_model(const TrainConfig& cfg, const std::vector<LabeledExample>& train,
                                 const std::vector<LabeledExample>& validation, const TrainResources& res = {},
                                 const PipelineSettings& pipeline = {}) {
  cfg.validate();
  if (train.empty()) throw DataError("training set is empty");
  detail::require_all_classes(train);

  ModelArtifact art;
  art.kind = cfg.model_kind;
  art.config = cfg;
  art.pipeline = pipeline;
  auto docs_of = [&](const std::vector<LabeledExample>& xs) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(xs.size());
    for (const auto& e : xs) docs.push_back(art.tokenize(e.clean_text));
    return docs;
  };
  const auto docs = docs_of(train);
  const auto val_docs = docs_of(validation);
  const auto y = detail::label_indices(train);
  const auto yv = detail::label_indices(validation);

  switch (cfg.model_kind) {
    case ModelKind::nb:
    case ModelKind::svm:
    case ModelKind::rf: {
      const FeatureMode mode = parse_feature_mode(cfg.features);
      Vocabulary vocab = fit_vocabulary(docs, 1);
      if (cfg.model_kind == ModelKind::rf) vocab = vocab.top_k_by_df(cfg.extra_int("rf_feature_cap"));
      std::vector<SparseVector> x;
      x.reserve(docs.size());
      for (const auto& d : docs) x.push_back(transform(d, vocab, mode));
      if (cfg.model_kind == ModelKind::nb) {
        auto m = train_naive_bayes(x, y, kNumClasses, cfg.extra("nb_alpha"));
        art.model = std::make_shared<NaiveBayesClassifier>(std::move(vocab), mode, std::move(m));
      } else if (cfg.model_kind == ModelKind::svm) {
        SvmOptions opt{cfg.extra("svm_C"), cfg.epochs, cfg.seed,
                       detail::balanced_weights(y, cfg.extras.contains("class_weight_balanced") &&
                                                       cfg.extra("class_weight_balanced") != 0.0)};
        auto m = train_linear_svm(x, y, kNumClasses, opt);
        art.model = std::make_shared<SvmClassifier>(std::move(vocab), mode, std::move(m));
      } else {
        Matrix dense(static_cast<int>(x.size()), vocab.size());
        for (std::size_t i = 0; i < x.size(); ++i)
          for (const auto& [k, w] : x[i].entries) dense(static_cast<int>(i), k) = w;
        ForestOptions opt;
        opt.n_trees = cfg.extra_int("rf_trees");
        opt.max_depth = cfg.extra_int("rf_max_depth");
        opt.bootstrap = cfg.extra("rf_bootstrap") != 0.0;
        opt.feature_subsample = cfg.extra("rf_feature_subsample") != 0.0;
        opt.seed = cfg.seed;
        auto m = train_random_forest(dense, y, kNumClasses, opt);
        art.model = std::make_shared<ForestClassifier>(std::move(vocab), mode, std::move(m));
      }
      break;
    }
    case ModelKind::cnn:
    case ModelKind::cnn_glove:
    case ModelKind::lstm:
    case ModelKind::lstm_glove: {
      const bool is_cnn = cfg.model_kind == ModelKind::cnn || cfg.model_kind == ModelKind::cnn_glove;
      SequenceFeatures features;
      features.max_len = cfg.extra_int("max_len");
      features.full_window = is_cnn;
      int vocab_size = 0;
      int embed_dim = cfg.extra_int("embed_dim");
      if (uses_glove(cfg.model_kind)) {
        if (!res.embeddings)
          throw MissingResource(std::string(model_kind_name(cfg.model_kind)) + " needs a pretrained embedding table");
        features.embeddings = res.embeddings;
        embed_dim = res.embeddings->dim();
      } else {
        features.subword = detail::fit_subword(docs, cfg);
        vocab_size = features.subword->size();
      }
      std::vector<nn::SequenceInput> xin, vin;
      for (const auto& d : docs) xin.push_back(features.build(d));
      for (const auto& d : val_docs) vin.push_back(features.build(d));
      const auto opt = detail::fit_options(cfg, y, cfg.learning_rate);
      if (is_cnn) {
        nn::CnnNet net(detail::cnn_shape(cfg, vocab_size, embed_dim), detail::init_seed(cfg));
        art.history = nn::fit(net, xin, y, vin, yv, opt);
        art.model = std::make_shared<NetClassifier<nn::CnnNet>>(std::move(features), std::move(net));
      } else {
        nn::LstmNet net(detail::lstm_shape(cfg, vocab_size, embed_dim), detail::init_seed(cfg));
        art.history = nn::fit(net, xin, y, vin, yv, opt);
        art.model = std::make_shared<NetClassifier<nn::LstmNet>>(std::move(features), std::move(net));
      }
      break;
    }
    case ModelKind::encoder_ft: {
      if (!res.adapter)
        throw MissingResource(
            "encoder_ft needs an encoder adapter; pass the 'hash-projection' mock adapter for head-only training");
      auto vocab = detail::fit_subword(docs, cfg);
      std::vector<std::vector<double>> xin, vin;
      for (const auto& d : docs) xin.push_back(res.adapter->encode(vocab->encode(d)).pooled);
      for (const auto& d : val_docs) vin.push_back(res.adapter->encode(vocab->encode(d)).pooled);
      // The shipped adapters are frozen (supports_finetune() == false), so
      // only the head is trained, at head_learning_rate.
      nn::PooledHead head(res.adapter->hidden_dim(), kNumClasses, cfg.dropout, detail::init_seed(cfg));
      const auto opt = detail::fit_options(cfg, y, cfg.extra("head_learning_rate"));
      art.history = nn::fit(head, xin, y, vin, yv, opt);
      art.model = std::make_shared<EncoderClassifier>(std::move(vocab), res.adapter, std::move(head),
                                                      static_cast<std::uint64_t>(cfg.extra("encoder_seed")));
      break;
    }
  }
  return art;
}

inline ModelArtifact train_cnn(const TrainConfig& cfg, const std::vector<LabeledExample>& train,
                               const std::vector<LabeledExample>& validation, const TrainResources& res = {}) {
  if (cfg.model_kind != ModelKind::cnn && cfg.model_kind != ModelKind::cnn_glove)
    throw DataError("train_cnn needs model_kind cnn or cnn_glove");
  return train_model(cfg, train, validation, res);
}

inline ModelArtifact train_lstm(const TrainConfig& cfg, const std::vector<LabeledExample>& train,
                                const std::vector<LabeledExample>& validation, const TrainResources& res = {}) {
  if (cfg.model_kind != ModelKind::lstm && cfg.model_kind != ModelKind::lstm_glove)
    throw DataError("train_lstm needs model_kind lstm or lstm_glove");
  return train_model(cfg, train, validation, res);
}

inline ModelArtifact finetune_encoder(const TrainConfig& cfg, const std::vector<LabeledExample>& train,
                                      const std::vector<LabeledExample>& validation,
                                      std::shared_ptr<const EncoderAdapter> adapter) {
  if (cfg.model_kind != ModelKind::encoder_ft) throw DataError("finetune_encoder needs model_kind encoder_ft");
  return train_model(cfg, train, validation, {nullptr, std::move(adapter)});
}

inline Prediction predict(const ModelArtifact& artifact, std::string_view text) { return artifact.predict(text); }

// ---------------------------------------------------------------------------
// Loading

inline ModelArtifact ModelArtifact::load(const std::filesystem::path& dir) {
  const auto json_path = dir / "artifact.json";
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw MissingResource("no artifact.json in " + dir.string(), json_path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("corrupted artifact.json in " + dir.string() + ": " + e.what());
  }
  auto need_file = [&](const nlohmann::json& name) {
    if (!name.is_string()) throw DataError("artifact.json names a feature file with a non-string value");
    const auto p = dir / name.get<std::string>();
    if (!std::filesystem::exists(p)) throw MissingResource("artifact feature file missing: " + p.string(), p.string());
    return p;
  };

  try {
    ModelArtifact art;
    art.kind = parse_model_kind(j.at("kind").get<std::string>());
    art.config = TrainConfig::from_json(j.at("config"));
    art.label_order.clear();
    for (const auto& n : j.at("label_order")) art.label_order.push_back(parse_class(n.get<std::string>()));
    if (art.label_order.size() != static_cast<std::size_t>(kNumClasses))
      throw DataError("artifact label_order must list " + std::to_string(kNumClasses) + " classes");
    art.pipeline.normalization = normalization_from_json(j.at("normalization"));
    art.pipeline.stoplist = load_stoplist(need_file(j.at("stoplist")));
    if (j.contains("history") && !j.at("history").is_null()) {
      std::ifstream h(need_file(j.at("history")), std::ios::binary);
      art.history = history_from_json(nlohmann::json::parse(h));
    }
    if (!j.contains("feature_spec")) throw MissingResource("artifact.json has no feature_spec", json_path.string());
    const auto& fs = j.at("feature_spec");
    const std::string type = fs.at("type").get<std::string>();
    const TensorMap params = load_params(need_file(j.at("params")));
    const TrainConfig& cfg = art.config;

    switch (art.kind) {
      case ModelKind::nb: {
        NaiveBayesModel m;
        m.n_classes = kNumClasses;
        m.log_prior = require(params, "nb.log_prior").data;
        m.log_likelihood = require(params, "nb.log_likelihood").to_matrix();
        m.alpha = require(params, "nb.alpha").data.at(0);
        Vocabulary vocab = Vocabulary::load(need_file(fs.at("vocabulary")));
        m.dim = vocab.size();
        if (m.log_likelihood.rows != kNumClasses || m.log_likelihood.cols != m.dim || m.log_prior.size() != kNumClasses)
          throw DataError("naive Bayes parameters do not match the vocabulary");
        art.model = std::make_shared<NaiveBayesClassifier>(std::move(vocab), parse_feature_mode(type), std::move(m));
        break;
      }
      case ModelKind::svm: {
        LinearSvmModel m;
        m.n_classes = kNumClasses;
        m.weights = require(params, "svm.weights").to_matrix();
        Vocabulary vocab = Vocabulary::load(need_file(fs.at("vocabulary")));
        m.dim = vocab.size();
        if (m.weights.rows != kNumClasses || m.weights.cols != m.dim + 1)
          throw DataError("SVM weights do not match the vocabulary");
        art.model = std::make_shared<SvmClassifier>(std::move(vocab), parse_feature_mode(type), std::move(m));
        break;
      }
      case ModelKind::rf: {
        RandomForestModel m;
        m.n_classes = kNumClasses;
        Vocabulary vocab = Vocabulary::load(need_file(fs.at("vocabulary")));
        m.dim = vocab.size();
        const auto n_trees = static_cast<int>(require(params, "rf.n_trees").data.at(0));
        for (int i = 0; i < n_trees; ++i) {
          const std::string p = "rf.tree" + std::to_string(i) + ".";
          DecisionTree t;
          t.feature = require(params, p + "feature").to_ints<int>();
          t.threshold = require(params, p + "threshold").data;
          t.left = require(params, p + "left").to_ints<int>();
          t.right = require(params, p + "right").to_ints<int>();
          t.leaf_class = require(params, p + "leaf_class").to_ints<int>();
          const int n = t.node_count();
          if (n == 0 || t.threshold.size() != static_cast<std::size_t>(n) ||
              t.left.size() != static_cast<std::size_t>(n) || t.right.size() != static_cast<std::size_t>(n) ||
              t.leaf_class.size() != static_cast<std::size_t>(n))
            throw DataError("tree " + std::to_string(i) + " is malformed");
          for (int k = 0; k < n; ++k) {
            if (t.feature[k] >= m.dim || t.leaf_class[k] < 0 || t.leaf_class[k] >= kNumClasses)
              throw DataError("tree " + std::to_string(i) + " references an out-of-range value");
            if (t.feature[k] >= 0 && (t.left[k] <= k || t.left[k] >= n || t.right[k] <= k || t.right[k] >= n))
              throw DataError("tree " + std::to_string(i) + " has an invalid child index");
          }
          m.trees.push_back(std::move(t));
        }
        art.model = std::make_shared<ForestClassifier>(std::move(vocab), parse_feature_mode(type), std::move(m));
        break;
      }
      case ModelKind::cnn:
      case ModelKind::cnn_glove:
      case ModelKind::lstm:
      case ModelKind::lstm_glove: {
        const bool is_cnn = art.kind == ModelKind::cnn || art.kind == ModelKind::cnn_glove;
        SequenceFeatures features;
        features.max_len = fs.at("max_len").get<int>();
        features.full_window = is_cnn;
        int vocab_size = 0;
        int embed_dim = cfg.extra_int("embed_dim");
        if (type == "subword") {
          features.subword = std::make_shared<const SubwordVocab>(SubwordVocab::load(need_file(fs.at("subword_vocab"))));
          vocab_size = features.subword->size();
        } else if (type == "glove") {
          embed_dim = fs.at("embedding_dim").get<int>();
          features.embeddings = std::make_shared<const EmbeddingTable>(
              load_embeddings(need_file(fs.at("embeddings")), embed_dim,
                              parse_oov_policy(fs.at("oov_policy").get<std::string>())));
        } else {
          throw DataError("feature type '" + type + "' does not fit model kind " +
                          std::string(model_kind_name(art.kind)));
        }
        if (is_cnn) {
          nn::CnnNet net(detail::cnn_shape(cfg, vocab_size, embed_dim), detail::init_seed(cfg));
          assign_tensors(net.params(), params);
          art.model = std::make_shared<NetClassifier<nn::CnnNet>>(std::move(features), std::move(net));
        } else {
          nn::LstmNet net(detail::lstm_shape(cfg, vocab_size, embed_dim), detail::init_seed(cfg));
          assign_tensors(net.params(), params);
          art.model = std::make_shared<NetClassifier<nn::LstmNet>>(std::move(features), std::move(net));
        }
        break;
      }
      case ModelKind::encoder_ft: {
        auto vocab = std::make_shared<const SubwordVocab>(SubwordVocab::load(need_file(fs.at("subword_vocab"))));
        const auto& a = fs.at("adapter");
        const auto seed = a.at("seed").get<std::uint64_t>();
        auto adapter = make_encoder_adapter(a.at("name").get<std::string>(), a.at("hidden_dim").get<int>(), seed);
        nn::PooledHead head(adapter->hidden_dim(), kNumClasses, cfg.dropout, detail::init_seed(cfg));
        assign_tensors(head.params(), params);
        art.model = std::make_shared<EncoderClassifier>(std::move(vocab), std::move(adapter), std::move(head), seed);
        break;
      }
    }
    return art;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("corrupted artifact in " + dir.string() + ": " + e.what());
  }
}

}  // namespace deptype
