#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "deptype/corpus.hpp"
#include "deptype/error.hpp"
#include "deptype/lexicon.hpp"
#include "deptype/models/config.hpp"
#include "deptype/textprep.hpp"

namespace deptype {

// Everything a CLI run depends on. Read from an INI file; the effective
// values (defaults filled in, overrides applied) are written back next to
// every command's outputs as config.ini.
//
//   [paths]       corpus, lexicon, stoplist, embeddings, noise_vocab,
//                 artifact_dir, report_dir (empty: built-in resource)
//   [run]         seed
//   [split]       train, validation, test
//   [columns]     text, id, lang, is_retweet
//   [exclusions]  drop_retweets, drop_spam_hashtag_only, drop_non_english,
//                 drop_incomplete, drop_duplicates, english_threshold, min_words
//   [labeling]    window_words, no_match_as_nodepression
//   [normalize]   lowercase, strip_urls, strip_handles, strip_hashtag_marks,
//                 strip_punct_and_digits, collapse_whitespace
//   [encoder]     adapter
//   [synth]       per_class, imbalanced
//   [model.KIND]  any TrainConfig field or extras key
struct PipelineConfig {
  struct Paths {
    std::string corpus;
    std::string lexicon;
    std::string stoplist;
    std::string embeddings;
    std::string noise_vocab;
    std::string artifact_dir = "artifacts";
    std::string report_dir = "reports";
  } paths;
  std::uint64_t seed = 42;
  SplitRatios split;
  ColumnMap columns;
  ExclusionConfig exclusions;
  WeakLabelConfig labeling;
  bool no_match_as_nodepression = true;
  NormalizationConfig normalization;
  std::string encoder_adapter = "hash-projection";
  int synth_per_class = 300;
  bool synth_imbalanced = false;
  std::map<ModelKind, TrainConfig> models;

  PipelineConfig() {
    for (auto k : kAllModelKinds) models[k] = TrainConfig::defaults(k);
  }

  // Sets the run seed and every model's training seed.
  void set_seed(std::uint64_t s) {
    seed = s;
    for (auto& [k, c] : models) c.seed = s;
  }

  const TrainConfig& model(ModelKind k) const { return models.at(k); }

  static PipelineConfig from_ini(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingResource("cannot open config file: " + path.string(), path.string());
    boost::property_tree::ptree pt;
    try {
      boost::property_tree::read_ini(in, pt);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw DataError("config file " + path.string() + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return from_ptree(pt);
  }

  static PipelineConfig from_ptree(const boost::property_tree::ptree& pt) {
    PipelineConfig c;
    for (const auto& [section, body] : pt) {
      const std::string where = "[" + section + "]";
      auto keys = [&](auto&& apply) {
        for (const auto& [key, node] : body) {
          const std::string value = node.data();
          if (!apply(key, value)) throw DataError("unknown key '" + key + "' in config section " + where);
        }
      };
      if (section == "paths") {
        keys([&](const std::string& k, const std::string& v) {
          auto& p = c.paths;
          if (k == "corpus") p.corpus = v;
          else if (k == "lexicon") p.lexicon = v;
          else if (k == "stoplist") p.stoplist = v;
          else if (k == "embeddings") p.embeddings = v;
          else if (k == "noise_vocab") p.noise_vocab = v;
          else if (k == "artifact_dir") p.artifact_dir = v;
          else if (k == "report_dir") p.report_dir = v;
          else return false;
          return true;
        });
      } else if (section == "run") {
        keys([&](const std::string& k, const std::string& v) {
          if (k != "seed") return false;
          c.seed = parse_number<std::uint64_t>(v, where + " seed");
          return true;
        });
      } else if (section == "split") {
        keys([&](const std::string& k, const std::string& v) {
          const double x = parse_number<double>(v, where + " " + k);
          if (k == "train") c.split.train = x;
          else if (k == "validation") c.split.validation = x;
          else if (k == "test") c.split.test = x;
          else return false;
          return true;
        });
      } else if (section == "columns") {
        keys([&](const std::string& k, const std::string& v) {
          if (k == "text") c.columns.text_col = v;
          else if (k == "id") c.columns.id_col = v;
          else if (k == "lang") c.columns.lang_col = v;
          else if (k == "is_retweet") c.columns.retweet_col = v;
          else return false;
          return true;
        });
      } else if (section == "exclusions") {
        keys([&](const std::string& k, const std::string& v) {
          auto& e = c.exclusions;
          if (k == "drop_retweets") e.drop_retweets = parse_bool(v, where + " " + k);
          else if (k == "drop_spam_hashtag_only") e.drop_spam_hashtag_only = parse_bool(v, where + " " + k);
          else if (k == "drop_non_english") e.drop_non_english = parse_bool(v, where + " " + k);
          else if (k == "drop_incomplete") e.drop_incomplete = parse_bool(v, where + " " + k);
          else if (k == "drop_duplicates") e.drop_duplicates = parse_bool(v, where + " " + k);
          else if (k == "english_threshold") e.english_threshold = parse_number<double>(v, where + " " + k);
          else if (k == "min_words") e.min_words = parse_number<int>(v, where + " " + k);
          else return false;
          return true;
        });
      } else if (section == "labeling") {
        keys([&](const std::string& k, const std::string& v) {
          if (k == "window_words") c.labeling.window_words = parse_number<int>(v, where + " " + k);
          else if (k == "no_match_as_nodepression") c.no_match_as_nodepression = parse_bool(v, where + " " + k);
          else return false;
          return true;
        });
      } else if (section == "normalize") {
        keys([&](const std::string& k, const std::string& v) {
          auto& n = c.normalization;
          const bool b = parse_bool(v, where + " " + k);
          if (k == "lowercase") n.lowercase = b;
          else if (k == "strip_urls") n.strip_urls = b;
          else if (k == "strip_handles") n.strip_handles = b;
          else if (k == "strip_hashtag_marks") n.strip_hashtag_marks = b;
          else if (k == "strip_punct_and_digits") n.strip_punct_and_digits = b;
          else if (k == "collapse_whitespace") n.collapse_whitespace = b;
          else return false;
          return true;
        });
      } else if (section == "encoder") {
        keys([&](const std::string& k, const std::string& v) {
          if (k != "adapter") return false;
          c.encoder_adapter = v;
          return true;
        });
      } else if (section == "synth") {
        keys([&](const std::string& k, const std::string& v) {
          if (k == "per_class") c.synth_per_class = parse_number<int>(v, where + " " + k);
          else if (k == "imbalanced") c.synth_imbalanced = parse_bool(v, where + " " + k);
          else return false;
          return true;
        });
      } else if (section.rfind("model.", 0) == 0) {
        auto& m = c.models.at(parse_model_kind(section.substr(6)));
        keys([&](const std::string& k, const std::string& v) {
          if (k == "model_kind") return false;
          m.set(k, v);
          return true;
        });
      } else {
        throw DataError("unknown config section " + where);
      }
    }
    // The run seed reaches models that did not pin their own.
    for (auto& [k, m] : c.models) {
      const auto it = pt.find("model." + std::string(model_kind_name(k)));
      if (it == pt.not_found() || !it->second.count("seed")) m.seed = c.seed;
    }
    if (c.synth_per_class < 1) throw DataError("[synth] per_class must be at least 1");
    for (const auto& [k, m] : c.models) m.validate();
    return c;
  }

  boost::property_tree::ptree to_ptree() const {
    using boost::property_tree::ptree;
    ptree pt;
    auto section = [&](const std::string& name) -> ptree& {
      return pt.put_child(ptree::path_type(name, '/'), ptree{});
    };
    {
      auto& s = section("paths");
      s.put("corpus", paths.corpus);
      s.put("lexicon", paths.lexicon);
      s.put("stoplist", paths.stoplist);
      s.put("embeddings", paths.embeddings);
      s.put("noise_vocab", paths.noise_vocab);
      s.put("artifact_dir", paths.artifact_dir);
      s.put("report_dir", paths.report_dir);
    }
    section("run").put("seed", std::to_string(seed));
    {
      auto& s = section("split");
      s.put("train", format_number(split.train));
      s.put("validation", format_number(split.validation));
      s.put("test", format_number(split.test));
    }
    {
      auto& s = section("columns");
      s.put("text", columns.text_col);
      s.put("id", columns.id_col);
      s.put("lang", columns.lang_col);
      s.put("is_retweet", columns.retweet_col);
    }
    {
      auto& s = section("exclusions");
      s.put("drop_retweets", bool_text(exclusions.drop_retweets));
      s.put("drop_spam_hashtag_only", bool_text(exclusions.drop_spam_hashtag_only));
      s.put("drop_non_english", bool_text(exclusions.drop_non_english));
      s.put("drop_incomplete", bool_text(exclusions.drop_incomplete));
      s.put("drop_duplicates", bool_text(exclusions.drop_duplicates));
      s.put("english_threshold", format_number(exclusions.english_threshold));
      s.put("min_words", std::to_string(exclusions.min_words));
    }
    {
      auto& s = section("labeling");
      s.put("window_words", std::to_string(labeling.window_words));
      s.put("no_match_as_nodepression", bool_text(no_match_as_nodepression));
    }
    {
      auto& s = section("normalize");
      s.put("lowercase", bool_text(normalization.lowercase));
      s.put("strip_urls", bool_text(normalization.strip_urls));
      s.put("strip_handles", bool_text(normalization.strip_handles));
      s.put("strip_hashtag_marks", bool_text(normalization.strip_hashtag_marks));
      s.put("strip_punct_and_digits", bool_text(normalization.strip_punct_and_digits));
      s.put("collapse_whitespace", bool_text(normalization.collapse_whitespace));
    }
    section("encoder").put("adapter", encoder_adapter);
    {
      auto& s = section("synth");
      s.put("per_class", std::to_string(synth_per_class));
      s.put("imbalanced", bool_text(synth_imbalanced));
    }
    for (const auto& [k, m] : models) {
      auto& s = section("model." + std::string(model_kind_name(k)));
      s.put("epochs", std::to_string(m.epochs));
      s.put("batch_size", std::to_string(m.batch_size));
      s.put("dropout", format_number(m.dropout));
      s.put("optimizer", std::string(nn::optimizer_name(m.optimizer)));
      s.put("learning_rate", format_number(m.learning_rate));
      s.put("seed", std::to_string(m.seed));
      s.put("class_count", std::to_string(m.class_count));
      s.put("features", m.features);
      for (const auto& [key, v] : m.extras) s.put(ptree::path_type(key, '/'), format_number(v));
    }
    return pt;
  }

  void write_ini(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingResource("cannot write config snapshot " + path.string(), path.string());
    boost::property_tree::write_ini(out, to_ptree());
  }

  LexiconSet lexicons() const { return paths.lexicon.empty() ? default_lexicons() : load_lexicons(paths.lexicon); }
  Stoplist stoplist() const { return paths.stoplist.empty() ? default_stoplist() : load_stoplist(paths.stoplist); }

  // Shortest decimal text that reads back to the same double.
  static std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  }

 private:
  static std::string bool_text(bool b) { return b ? "true" : "false"; }

  static bool parse_bool(const std::string& v, const std::string& what) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw DataError("expected true or false for " + what + ", got '" + v + "'");
  }

  template <typename T>
  static T parse_number(const std::string& v, const std::string& what) {
    T x{};
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size())
      throw DataError("expected a number for " + what + ", got '" + v + "'");
    return x;
  }
};

}  // namespace deptype
