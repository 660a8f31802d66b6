#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "deptype/classes.hpp"
#include "deptype/error.hpp"
#include "deptype/nn/layers.hpp"

namespace deptype {

enum class ModelKind { nb, svm, rf, cnn, cnn_glove, lstm, lstm_glove, encoder_ft };

inline constexpr std::array<ModelKind, 8> kAllModelKinds = {ModelKind::nb,        ModelKind::svm,
                                                           ModelKind::rf,        ModelKind::cnn,
                                                           ModelKind::cnn_glove, ModelKind::lstm,
                                                           ModelKind::lstm_glove, ModelKind::encoder_ft};

// One representative per classifier family; what `--model all` trains.
inline constexpr std::array<ModelKind, 6> kModelFamilies = {ModelKind::nb,  ModelKind::svm,  ModelKind::rf,
                                                            ModelKind::cnn, ModelKind::lstm, ModelKind::encoder_ft};

inline std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::nb: return "nb";
    case ModelKind::svm: return "svm";
    case ModelKind::rf: return "rf";
    case ModelKind::cnn: return "cnn";
    case ModelKind::cnn_glove: return "cnn_glove";
    case ModelKind::lstm: return "lstm";
    case ModelKind::lstm_glove: return "lstm_glove";
    case ModelKind::encoder_ft: return "encoder_ft";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  for (auto k : kAllModelKinds)
    if (model_kind_name(k) == s) return k;
  throw DataError("unknown model kind '" + std::string(s) + "'");
}

inline bool is_neural(ModelKind k) {
  return k == ModelKind::cnn || k == ModelKind::cnn_glove || k == ModelKind::lstm || k == ModelKind::lstm_glove ||
         k == ModelKind::encoder_ft;
}
inline bool uses_glove(ModelKind k) { return k == ModelKind::cnn_glove || k == ModelKind::lstm_glove; }

struct TrainConfig {
  ModelKind model_kind = ModelKind::nb;
  int epochs = 10;
  int batch_size = 32;
  double dropout = 0.0;
  nn::OptimizerKind optimizer = nn::OptimizerKind::adam;
  double learning_rate = 1e-3;
  std::uint64_t seed = 42;
  int class_count = kNumClasses;
  // Kind-specific knobs, e.g. lstm_units, nb_alpha, rf_trees, svm_C.
  std::map<std::string, double> extras;
  // Input representation: bow or tfidf for classical models, subword,
  // glove or encoder for neural ones.
  std::string features = "tfidf";

  double extra(const std::string& key) const {
    auto it = extras.find(key);
    if (it == extras.end())
      throw DataError("config for " + std::string(model_kind_name(model_kind)) + " has no '" + key + "'");
    return it->second;
  }
  int extra_int(const std::string& key) const { return static_cast<int>(extra(key)); }

  // Hyperparameter defaults per kind. Neural ones: CNN 10 epochs / batch 32 /
  // Adam, CNN+GloVe batch 64, LSTM 2 x 64 units / dropout 0.2, LSTM+GloVe 300
  // units / dropout 0.4 / Adamax.
  static TrainConfig defaults(ModelKind kind) {
    TrainConfig c;
    c.model_kind = kind;
    switch (kind) {
      case ModelKind::nb:
        c.epochs = 1;
        c.batch_size = 1;
        c.features = "bow";
        c.extras = {{"nb_alpha", 1.0}};
        break;
      case ModelKind::svm:
        c.epochs = 20;
        c.batch_size = 1;
        c.features = "tfidf";
        c.extras = {{"svm_C", 1.0}, {"class_weight_balanced", 0}};
        break;
      case ModelKind::rf:
        c.epochs = 1;
        c.batch_size = 1;
        c.features = "tfidf";
        c.extras = {{"rf_trees", 100}, {"rf_max_depth", 0}, {"rf_feature_cap", 2000},
                    {"rf_bootstrap", 1},  {"rf_feature_subsample", 1}};
        break;
      case ModelKind::cnn:
        c.epochs = 10;
        c.batch_size = 32;
        c.dropout = 0.5;
        c.features = "subword";
        c.extras = {{"cnn_filters", 64}, {"cnn_width_min", 3}, {"cnn_width_max", 5}, {"embed_dim", 100},
                    {"max_len", 64},     {"subword_vocab_size", 4000}, {"class_weight_balanced", 0}};
        break;
      case ModelKind::cnn_glove:
        c.epochs = 10;
        c.batch_size = 64;
        c.dropout = 0.5;
        c.features = "glove";
        c.extras = {{"cnn_filters", 64}, {"cnn_width_min", 3}, {"cnn_width_max", 5}, {"embed_dim", 100},
                    {"max_len", 64},     {"class_weight_balanced", 0}};
        break;
      case ModelKind::lstm:
        c.epochs = 10;
        c.batch_size = 32;
        c.dropout = 0.2;
        c.features = "subword";
        c.extras = {{"lstm_layers", 2}, {"lstm_units", 64}, {"embed_dim", 100}, {"max_len", 64},
                    {"subword_vocab_size", 4000}, {"class_weight_balanced", 0}};
        break;
      case ModelKind::lstm_glove:
        c.epochs = 10;
        c.batch_size = 32;
        c.dropout = 0.4;
        c.optimizer = nn::OptimizerKind::adamax;
        c.features = "glove";
        c.extras = {{"lstm_layers", 1}, {"lstm_units", 300}, {"embed_dim", 100}, {"max_len", 64},
                    {"class_weight_balanced", 0}};
        break;
      case ModelKind::encoder_ft:
        c.epochs = 4;
        c.batch_size = 32;
        c.dropout = 0.1;
        c.learning_rate = 2e-5;
        c.features = "encoder";
        c.extras = {{"hidden_dim", 256}, {"head_learning_rate", 1e-3}, {"encoder_seed", 17}, {"max_len", 64},
                    {"subword_vocab_size", 4000}, {"class_weight_balanced", 0}};
        break;
    }
    return c;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json extras_json = nlohmann::ordered_json::object();
    for (const auto& [k, v] : extras) extras_json[k] = v;
    return {{"model_kind", model_kind_name(model_kind)},
            {"epochs", epochs},
            {"batch_size", batch_size},
            {"dropout", dropout},
            {"optimizer", nn::optimizer_name(optimizer)},
            {"learning_rate", learning_rate},
            {"seed", seed},
            {"class_count", class_count},
            {"features", features},
            {"extras", std::move(extras_json)}};
  }

  static TrainConfig from_json(const nlohmann::json& j) {
    TrainConfig c = defaults(parse_model_kind(j.at("model_kind").get<std::string>()));
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.dropout = j.at("dropout").get<double>();
    c.optimizer = nn::parse_optimizer(j.at("optimizer").get<std::string>());
    c.learning_rate = j.at("learning_rate").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.class_count = j.at("class_count").get<int>();
    c.features = j.at("features").get<std::string>();
    c.extras.clear();
    for (const auto& [k, v] : j.at("extras").items()) c.extras[k] = v.get<double>();
    return c;
  }

  // Applies one "key = value" override, where key is a field name or an
  // extras key.
  void set(const std::string& key, const std::string& value) {
    try {
      if (key == "epochs") epochs = std::stoi(value);
      else if (key == "batch_size") batch_size = std::stoi(value);
      else if (key == "dropout") dropout = std::stod(value);
      else if (key == "optimizer") optimizer = nn::parse_optimizer(value);
      else if (key == "learning_rate") learning_rate = std::stod(value);
      else if (key == "seed") seed = std::stoull(value);
      else if (key == "class_count") class_count = std::stoi(value);
      else if (key == "features") features = value;
      else if (key == "class_weight") extras["class_weight_balanced"] = value == "balanced" ? 1 : 0;
      else extras[key] = std::stod(value);
    } catch (const std::invalid_argument&) {
      throw DataError("bad value '" + value + "' for " + key);
    } catch (const std::out_of_range&) {
      throw DataError("value out of range for " + key + ": " + value);
    }
  }

  void validate() const {
    if (class_count != kNumClasses) throw DataError("class_count must be " + std::to_string(kNumClasses));
    if (epochs < 1) throw DataError("epochs must be at least 1");
    if (batch_size < 1) throw DataError("batch_size must be at least 1");
    if (dropout < 0.0 || dropout >= 1.0) throw DataError("dropout must be in [0, 1)");
    if (!(learning_rate > 0.0)) throw DataError("learning_rate must be positive");
  }
};

}  // namespace deptype
