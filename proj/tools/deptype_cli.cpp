// deptype: ingest, label, train, evaluate and explain depression-type
// classifiers for tweets.
//
// Exit codes: 0 success, 1 invalid input or data, 2 missing file/resource.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "deptype/deptype.hpp"
#include "deptype/pipeline.hpp"

namespace fs = std::filesystem;
using namespace deptype;

namespace {

struct GlobalOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

PipelineConfig load_config(const GlobalOptions& g) {
  PipelineConfig cfg = g.config.empty() ? PipelineConfig{} : PipelineConfig::from_ini(g.config);
  if (g.seed) cfg.set_seed(*g.seed);
  return cfg;
}

fs::path prepare_out(const GlobalOptions& g) {
  const fs::path out(g.out);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw MissingResource("cannot create output directory " + out.string() + ": " + ec.message(), out.string());
  return out;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f || !(f << body) || !f.flush()) throw MissingResource("cannot write " + p.string(), p.string());
}

void write_json(const fs::path& p, const nlohmann::ordered_json& j) { write_text(p, j.dump(2) + "\n"); }

void write_json_lines(const fs::path& p, const std::vector<nlohmann::ordered_json>& rows) {
  std::string body;
  for (const auto& r : rows) body += r.dump() + "\n";
  write_text(p, body);
}

// ---------------------------------------------------------------------------

struct SynthOptions {
  std::optional<int> per_class;
  bool imbalanced = false;
};

int cmd_synth(const GlobalOptions& g, const SynthOptions& o) {
  PipelineConfig cfg = load_config(g);
  if (o.per_class) cfg.synth_per_class = *o.per_class;
  if (o.imbalanced) cfg.synth_imbalanced = true;
  if (cfg.synth_per_class < 1) throw DataError("--per-class must be at least 1");
  const fs::path out = prepare_out(g);

  std::vector<std::string> noise = default_noise_vocab();
  if (!cfg.paths.noise_vocab.empty()) {
    std::ifstream in(cfg.paths.noise_vocab);
    if (!in) throw MissingResource("cannot open noise vocabulary: " + cfg.paths.noise_vocab, cfg.paths.noise_vocab);
    noise.clear();
    for (std::string line; std::getline(in, line);)
      if (!split_words(line).empty()) noise.push_back(split_words(line).front());
  }
  std::map<DepressionClass, int> counts;
  for (auto c : kAllClasses) counts[c] = cfg.synth_per_class;
  if (cfg.synth_imbalanced) counts[DepressionClass::NoDepression] = 4 * cfg.synth_per_class;

  const auto corpus = generate_synthetic_corpus_raw(counts, cfg.lexicons(), noise, cfg.seed);
  std::vector<LabeledExample> examples;
  std::vector<TweetRecord> records;
  for (const auto& s : corpus) {
    examples.push_back(s.example);
    TweetRecord r;
    r.id = s.example.tweet_id;
    r.text = s.raw_text;
    r.lang_hint = "en";
    r.raw_row = {{"id", r.id}, {"text", r.text}, {"lang", "en"}, {"is_retweet", "false"}};
    records.push_back(std::move(r));
  }
  write_jsonl(out / "synthetic.jsonl", examples);
  {
    std::ofstream csv(out / "synthetic.csv", std::ios::binary);
    if (!csv) throw MissingResource("cannot write " + (out / "synthetic.csv").string());
    write_csv(csv, records);
  }
  cfg.write_ini(out / "config.ini");
  std::cout << "wrote " << examples.size() << " synthetic examples to " << (out / "synthetic.jsonl").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct IngestOptions {
  std::string input;
  std::optional<std::string> text_col, id_col, lang_col, retweet_col;
};

int cmd_ingest(const GlobalOptions& g, const IngestOptions& o) {
  PipelineConfig cfg = load_config(g);
  std::string input = o.input;
  if (o.text_col) cfg.columns.text_col = *o.text_col;
  if (o.id_col) cfg.columns.id_col = *o.id_col;
  if (o.lang_col) cfg.columns.lang_col = *o.lang_col;
  if (o.retweet_col) cfg.columns.retweet_col = *o.retweet_col;
  if (input.empty()) input = cfg.paths.corpus;
  if (input.empty()) throw DataError("no input corpus: pass --input or set [paths] corpus");
  cfg.paths.corpus = input;
  const LexiconSet lex = cfg.lexicons();
  const Stoplist stop = cfg.stoplist();
  const auto records = ingest_csv(fs::path(input), cfg.columns);
  const fs::path out = prepare_out(g);

  const auto filtered = apply_exclusions(records, cfg.exclusions);
  std::vector<LabeledExample> labeled;
  std::vector<nlohmann::ordered_json> review, excluded;
  std::map<std::string, long> by_reason, by_class;
  for (auto r : kAllExclusionReasons) by_reason[std::string(reason_name(r))] = 0;
  for (auto c : kAllClasses) by_class[std::string(class_name(c))] = 0;
  long unlabeled = 0;

  for (const auto& e : filtered.excluded) {
    excluded.push_back({{"tweet_id", e.record.id}, {"reason", reason_name(e.reason)}});
    ++by_reason[std::string(reason_name(e.reason))];
  }
  for (const auto& rec : filtered.kept) {
    const std::string clean = normalize(rec.text, cfg.normalization);
    const auto outcome = weak_label(clean, lex, cfg.labeling);
    std::optional<DepressionClass> label;
    if (outcome.decision == WeakDecision::labeled) label = outcome.label;
    else if (outcome.decision == WeakDecision::no_match && cfg.no_match_as_nodepression)
      label = DepressionClass::NoDepression;

    if (label) {
      labeled.push_back(make_example(rec.id, rec.text, *label, Provenance::lexicon_weak, cfg.normalization, stop));
      ++by_class[std::string(class_name(*label))];
    } else if (outcome.decision == WeakDecision::needs_review) {
      review.push_back(review_entry(rec.id, clean, outcome));
    } else {
      ++unlabeled;
    }
  }

  write_jsonl(out / "labeled.jsonl", labeled);
  write_json_lines(out / "review.jsonl", review);
  write_json_lines(out / "excluded.jsonl", excluded);
  nlohmann::ordered_json summary = {{"input_rows", records.size()},
                                    {"labeled", labeled.size()},
                                    {"review", review.size()},
                                    {"excluded", filtered.excluded.size()},
                                    {"unlabeled_no_match", unlabeled},
                                    {"excluded_by_reason", by_reason},
                                    {"labeled_by_class", by_class}};
  write_json(out / "ingest_summary.json", summary);
  cfg.write_ini(out / "config.ini");
  std::cout << "rows " << records.size() << ": labeled " << labeled.size() << ", review " << review.size()
            << ", excluded " << filtered.excluded.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

std::vector<ModelKind> parse_model_list(const std::string& spec) {
  if (spec == "all") return {kModelFamilies.begin(), kModelFamilies.end()};
  std::vector<ModelKind> kinds;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto k = parse_model_kind(item);
    if (std::find(kinds.begin(), kinds.end(), k) == kinds.end()) kinds.push_back(k);
  }
  if (kinds.empty()) throw DataError("--model needs a model kind or 'all'");
  return kinds;
}

struct TrainOptions {
  std::string data;
  std::string model = "nb";
  std::string class_weight = "none";
};

int cmd_train(const GlobalOptions& g, const TrainOptions& o) {
  PipelineConfig cfg = load_config(g);
  if (o.class_weight != "none" && o.class_weight != "balanced")
    throw DataError("--class-weight must be 'none' or 'balanced'");
  const auto kinds = parse_model_list(o.model);
  if (o.class_weight == "balanced")
    for (auto& [k, m] : cfg.models) m.extras["class_weight_balanced"] = 1;

  const auto examples = read_jsonl(fs::path(o.data));
  const auto split = stratified_split(examples, cfg.split, cfg.seed);
  const fs::path out = prepare_out(g);
  fs::create_directories(out / "split");
  write_jsonl(out / "split" / "train.jsonl", split.train);
  write_jsonl(out / "split" / "validation.jsonl", split.validation);
  write_jsonl(out / "split" / "test.jsonl", split.test);

  PipelineSettings pipeline{cfg.normalization, cfg.stoplist()};
  for (auto kind : kinds) {
    const TrainConfig& tc = cfg.model(kind);
    TrainResources res;
    if (uses_glove(kind)) {
      if (cfg.paths.embeddings.empty())
        throw MissingResource(std::string(model_kind_name(kind)) +
                              " needs pretrained embeddings; set [paths] embeddings in the config");
      res.embeddings = std::make_shared<const EmbeddingTable>(
          load_embeddings(fs::path(cfg.paths.embeddings), tc.extra_int("embed_dim")));
    }
    if (kind == ModelKind::encoder_ft)
      res.adapter = make_encoder_adapter(cfg.encoder_adapter, tc.extra_int("hidden_dim"),
                                         static_cast<std::uint64_t>(tc.extra("encoder_seed")));
    std::cout << "training " << model_kind_name(kind) << " on " << split.train.size() << " examples\n";
    const auto artifact = train_model(tc, split.train, split.validation, res, pipeline);
    artifact.save(out / cfg.paths.artifact_dir / std::string(model_kind_name(kind)));
  }
  cfg.write_ini(out / "config.ini");
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_evaluate(const GlobalOptions& g, std::string run_dir) {
  PipelineConfig cfg = load_config(g);
  if (run_dir.empty()) run_dir = g.out;
  const fs::path run(run_dir);
  const fs::path artifacts = run / cfg.paths.artifact_dir;
  if (!fs::is_directory(artifacts)) throw MissingResource("no artifact directory at " + artifacts.string(), artifacts.string());
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(artifacts))
    if (e.is_directory() && fs::exists(e.path() / "artifact.json")) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw MissingResource("no trained artifacts under " + artifacts.string(), artifacts.string());

  const std::map<std::string, std::vector<LabeledExample>> parts = {
      {"validation", read_jsonl(run / "split" / "validation.jsonl")},
      {"test", read_jsonl(run / "split" / "test.jsonl")}};

  const fs::path reports = prepare_out(g) / cfg.paths.report_dir;
  fs::create_directories(reports / "plots");
  std::map<std::string, std::vector<EvalReport>> by_part;
  for (const auto& dir : dirs) {
    const auto artifact = ModelArtifact::load(dir);
    const std::string name = dir.filename().string();
    for (const auto& [part, examples] : parts) {
      auto report = evaluate(artifact, examples, part);
      write_json(reports / (name + "." + part + ".json"), report.to_json());
      by_part[part].push_back(std::move(report));
    }
    if (!artifact.history.empty()) plot_curves(artifact.history, reports / "plots" / (name + "_curves.png"), name);
  }
  for (const auto& [part, list] : by_part) {
    const auto table = compare_models(list);
    write_text(reports / ("comparison." + part + ".csv"), table.to_csv());
    write_text(reports / ("comparison." + part + ".txt"), table.to_text());
    if (part == "test") std::cout << table.to_text();
  }
  cfg.write_ini(reports / "config.ini");
  return 0;
}

// ---------------------------------------------------------------------------

struct ExplainOptions {
  std::string artifact;
  std::string text;
  std::string input;
  std::string method = "occlusion";
  int samples = 2000;
};

int cmd_explain(const GlobalOptions& g, const ExplainOptions& o) {
  PipelineConfig cfg = load_config(g);
  const auto method = parse_attribution_method(o.method);
  if (o.text.empty() == o.input.empty()) throw DataError("pass exactly one of --text or --input");
  std::vector<std::string> texts;
  if (!o.text.empty()) {
    texts.push_back(o.text);
  } else {
    std::ifstream in(o.input);
    if (!in) throw MissingResource("cannot open input file " + o.input, o.input);
    for (std::string line; std::getline(in, line);) texts.push_back(line);
    if (texts.empty()) throw DataError("input file " + o.input + " has no texts");
  }
  const auto artifact = ModelArtifact::load(o.artifact);
  const fs::path out = prepare_out(g);
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const auto attr = method == AttributionMethod::occlusion
                          ? explain_occlusion(artifact, texts[i])
                          : explain_shapley(artifact, texts[i], o.samples, cfg.seed);
    char stem[32];
    std::snprintf(stem, sizeof stem, "explain_%03zu", i + 1);
    auto j = to_json(attr, artifact.label_order);
    j["text"] = texts[i];
    write_json(out / (std::string(stem) + ".json"), j);
    render_highlights(attr, out / (std::string(stem) + ".html"));
    std::cout << highlights_text(attr);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depression-type classification of tweets: ingest, train, evaluate, explain."};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "seed for splits, training, sampling and synthesis (overrides config)");
  app.add_option("--out", g.out, "output directory")->capture_default_str();

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "generate a labeled synthetic corpus (JSONL + CSV)");
  s->add_option("--per-class", synth.per_class, "examples per class");
  s->add_flag("--imbalanced", synth.imbalanced, "make NoDepression four times larger than the other classes");

  IngestOptions ingest;
  auto* ing = app.add_subcommand("ingest", "clean, filter and weak-label a tweet CSV");
  ing->add_option("--input", ingest.input, "tweet CSV (default: [paths] corpus)");
  ing->add_option("--text-col", ingest.text_col, "column holding the tweet text (default: text)");
  ing->add_option("--id-col", ingest.id_col, "column holding the tweet id (default: id)");
  ing->add_option("--lang-col", ingest.lang_col, "column holding the language hint (default: lang)");
  ing->add_option("--retweet-col", ingest.retweet_col, "column holding the retweet flag (default: is_retweet)");

  TrainOptions train;
  auto* tr = app.add_subcommand("train", "split a labeled dataset and train models");
  tr->add_option("--data", train.data, "labeled JSONL")->required();
  tr->add_option("--model", train.model, "model kind, comma list, or 'all'")->capture_default_str();
  tr->add_option("--class-weight", train.class_weight, "none or balanced")->capture_default_str();

  std::string run_dir;
  auto* ev = app.add_subcommand("evaluate", "evaluate trained artifacts on the validation and test splits");
  ev->add_option("--run", run_dir, "directory holding split/ and the artifacts (default: --out)");

  ExplainOptions explain;
  auto* ex = app.add_subcommand("explain", "token attributions with highlight reports");
  ex->add_option("--artifact", explain.artifact, "trained artifact directory")->required();
  ex->add_option("--text", explain.text, "text to explain");
  ex->add_option("--input", explain.input, "file with one text per line");
  ex->add_option("--method", explain.method, "occlusion or shapley")->capture_default_str();
  ex->add_option("--samples", explain.samples, "shapley permutations")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*s) return cmd_synth(g, synth);
    if (*ing) return cmd_ingest(g, ingest);
    if (*tr) return cmd_train(g, train);
    if (*ev) return cmd_evaluate(g, run_dir);
    if (*ex) return cmd_explain(g, explain);
  } catch (const MissingResource& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
