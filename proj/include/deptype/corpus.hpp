#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptype/classes.hpp"
#include "deptype/csv.hpp"
#include "deptype/error.hpp"
#include "deptype/lexicon.hpp"
#include "deptype/rng.hpp"
#include "deptype/textprep.hpp"

namespace deptype {

struct TweetRecord {
  std::string id;
  std::string text;
  std::optional<std::string> lang_hint;
  bool is_retweet = false;
  // Source columns in header order.
  std::vector<std::pair<std::string, std::string>> raw_row;
  // Set at ingest for rows that can only be excluded (empty text).
  bool needs_exclusion = false;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

struct ColumnMap {
  std::string text_col = "text";
  std::string id_col = "id";
  std::string lang_col = "lang";
  std::string retweet_col = "is_retweet";
};

namespace detail {

inline bool parse_flag(std::string_view v) {
  std::string s(v);
  std::transform(s.begin(), s.end(), s.begin(), ascii_lower);
  return s == "1" || s == "true" || s == "yes" || s == "y" || s == "t";
}

}  // namespace detail

// Reads a UTF-8 CSV with a header row. Only the text column is mandatory;
// ids default to "row<N>" when the id column is absent. Without a retweet
// column, texts starting with "RT @" count as retweets.
inline std::vector<TweetRecord> ingest_csv(std::istream& in, const ColumnMap& cols = {}) {
  csv::Reader reader(in);
  csv::Row header;
  if (!reader.next(header)) throw DataError("CSV input is empty (header row required)");
  if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

  auto find_col = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  };
  const auto text_idx = find_col(cols.text_col);
  if (!text_idx) throw DataError("CSV header has no text column '" + cols.text_col + "'");
  const auto id_idx = find_col(cols.id_col);
  const auto lang_idx = find_col(cols.lang_col);
  const auto rt_idx = find_col(cols.retweet_col);

  std::vector<TweetRecord> records;
  std::unordered_set<std::string> seen_ids;
  csv::Row row;
  int row_number = 0;
  while (reader.next(row)) {
    ++row_number;
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size())
      throw DataError("malformed CSV row " + std::to_string(row_number) + " (line " +
                      std::to_string(reader.row_line()) + "): expected " + std::to_string(header.size()) +
                      " fields, found " + std::to_string(row.size()));
    TweetRecord rec;
    rec.text = row[*text_idx];
    rec.id = id_idx ? row[*id_idx] : "row" + std::to_string(row_number);
    if (rec.id.empty()) throw DataError("CSV row " + std::to_string(row_number) + " has an empty id");
    if (!seen_ids.insert(rec.id).second)
      throw DataError("duplicate id '" + rec.id + "' at CSV row " + std::to_string(row_number));
    if (lang_idx && !row[*lang_idx].empty()) rec.lang_hint = row[*lang_idx];
    rec.is_retweet = rt_idx ? detail::parse_flag(row[*rt_idx]) : rec.text.starts_with("RT @");
    for (std::size_t i = 0; i < header.size(); ++i) rec.raw_row.emplace_back(header[i], row[i]);
    rec.needs_exclusion = split_words(rec.text).empty();
    records.push_back(std::move(rec));
  }
  return records;
}

inline std::vector<TweetRecord> ingest_csv(const std::filesystem::path& path, const ColumnMap& cols = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingResource("cannot open CSV file: " + path.string(), path.string());
  return ingest_csv(in, cols);
}

// Writes records back with their original columns. All records must share
// the same header.
inline void write_csv(std::ostream& out, const std::vector<TweetRecord>& records) {
  if (records.empty()) return;
  csv::Row header;
  for (const auto& [k, _] : records.front().raw_row) header.push_back(k);
  csv::write_row(out, header);
  for (const auto& r : records) {
    csv::Row row;
    for (const auto& [k, v] : r.raw_row) row.push_back(v);
    if (row.size() != header.size()) throw DataError("record " + r.id + " has a different column set");
    csv::write_row(out, row);
  }
}

// ---------------------------------------------------------------------------
// Language detection

// Character-trigram profile of ordinary English prose. A text is scored by
// the share of its trigrams that fall in the profile's most frequent set.
class EnglishDetector {
 public:
  static constexpr std::size_t kProfileSize = 400;

  EnglishDetector() {
    std::map<std::string, int> counts;
    for (const auto& t : trigrams(kSample)) ++counts[t];
    std::vector<std::pair<std::string, int>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](auto& a, auto& b) { return a.second > b.second; });
    for (std::size_t i = 0; i < ranked.size() && i < kProfileSize; ++i) profile_.insert(ranked[i].first);
  }

  // Fraction of the text's trigrams found in the profile; 1.0 when the text
  // is too short to judge, 0.0 when it is mostly non-Latin.
  double score(std::string_view text) const {
    std::size_t letters = 0, visible = 0;
    for (unsigned char c : text) {
      if (detail::is_ascii_space(c)) continue;
      if ((c & 0xC0) == 0x80) continue;
      ++visible;
      if (detail::is_ascii_alpha(c)) ++letters;
    }
    if (visible == 0) return 1.0;
    if (static_cast<double>(letters) / static_cast<double>(visible) < 0.5) return 0.0;
    const auto grams = trigrams(text);
    if (grams.size() < kMinTrigrams) return 1.0;
    std::size_t hits = 0;
    for (const auto& g : grams) hits += profile_.contains(g);
    return static_cast<double>(hits) / static_cast<double>(grams.size());
  }

  bool is_english(std::string_view text, double threshold) const { return score(text) >= threshold; }

 private:
  static constexpr std::size_t kMinTrigrams = 12;

  static std::vector<std::string> trigrams(std::string_view text) {
    std::string letters = " ";
    for (unsigned char c : text) {
      if (detail::is_ascii_alpha(c)) letters.push_back(detail::ascii_lower(static_cast<char>(c)));
      else if (letters.back() != ' ') letters.push_back(' ');
    }
    if (letters.back() != ' ') letters.push_back(' ');
    std::vector<std::string> out;
    for (std::size_t i = 0; i + 3 <= letters.size(); ++i) out.push_back(letters.substr(i, 3));
    return out;
  }

  static constexpr std::string_view kSample =
      "the quick brown fox jumps over the lazy dog and then it was time for all of us to go home. "
      "i think that we should have been there with them when they said what they wanted to do. "
      "this is one of the things that people often talk about when they are not sure how to feel. "
      "there are many reasons why someone would want to share their thoughts with friends and family. "
      "today i feel tired and i have been thinking about my life and the way things are going for me. "
      "she told me that he would come back later in the evening after work but he never did. "
      "it is important to take care of yourself and to ask for help when you need it most. "
      "we went to the park on saturday morning and watched the children playing in the sunshine. "
      "my doctor said that i should get more sleep and eat better food every single day. "
      "sometimes i wonder if anyone really understands what it is like to live with this feeling. "
      "they have been working on the new project for months and it is finally ready for release. "
      "what do you think about the movie we saw last night, was it good or just boring to you. "
      "people who are struggling should know that they are not alone and that things can get better. "
      "i love my family and my friends and i am thankful for everything that they do for me. "
      "the weather has been really cold this week so we stayed inside and read books by the window.";

  std::set<std::string> profile_;
};

// ---------------------------------------------------------------------------
// Exclusion rules

enum class ExclusionReason { empty, retweet, spam_hashtag_only, non_english, incomplete, duplicate };

inline std::string_view reason_name(ExclusionReason r) {
  switch (r) {
    case ExclusionReason::empty: return "empty";
    case ExclusionReason::retweet: return "retweet";
    case ExclusionReason::spam_hashtag_only: return "spam_hashtag_only";
    case ExclusionReason::non_english: return "non_english";
    case ExclusionReason::incomplete: return "incomplete";
    case ExclusionReason::duplicate: return "duplicate";
  }
  return "?";
}

inline constexpr std::array<ExclusionReason, 6> kAllExclusionReasons = {
    ExclusionReason::empty,       ExclusionReason::retweet,    ExclusionReason::spam_hashtag_only,
    ExclusionReason::non_english, ExclusionReason::incomplete, ExclusionReason::duplicate};

struct ExclusionConfig {
  bool drop_retweets = true;
  bool drop_spam_hashtag_only = true;
  bool drop_non_english = true;
  bool drop_incomplete = true;
  bool drop_duplicates = true;
  double english_threshold = 0.55;
  // Texts with fewer words than this after normalization are incomplete.
  int min_words = 3;
};

struct ExcludedRecord {
  TweetRecord record;
  ExclusionReason reason;
};

struct ExclusionResult {
  std::vector<TweetRecord> kept;
  std::vector<ExcludedRecord> excluded;
};

inline bool is_hashtag_only(std::string_view text) {
  const auto words = split_words(text);
  if (words.empty()) return false;
  return std::all_of(words.begin(), words.end(), [](const std::string& w) { return w.size() > 1 && w[0] == '#'; });
}

// Key used for duplicate detection: case-folded, whitespace-collapsed text.
inline std::string duplicate_key(std::string_view text) {
  NormalizationConfig cfg{.lowercase = true,
                          .strip_urls = false,
                          .strip_handles = false,
                          .strip_hashtag_marks = false,
                          .strip_punct_and_digits = false,
                          .collapse_whitespace = true};
  return normalize(text, cfg);
}

// Each excluded record gets exactly one reason, checked in the order empty,
// retweet, spam_hashtag_only, non_english, incomplete, duplicate. Duplicates
// are only counted against records that survived every other rule; the
// first occurrence is kept.
inline ExclusionResult apply_exclusions(const std::vector<TweetRecord>& records, const ExclusionConfig& cfg = {}) {
  static const EnglishDetector detector;
  ExclusionResult out;
  std::unordered_set<std::string> seen;
  for (const auto& rec : records) {
    auto exclude = [&](ExclusionReason r) { out.excluded.push_back({rec, r}); };
    if (rec.needs_exclusion || split_words(rec.text).empty()) {
      exclude(ExclusionReason::empty);
      continue;
    }
    if (cfg.drop_retweets && rec.is_retweet) {
      exclude(ExclusionReason::retweet);
      continue;
    }
    if (cfg.drop_spam_hashtag_only && is_hashtag_only(rec.text)) {
      exclude(ExclusionReason::spam_hashtag_only);
      continue;
    }
    if (cfg.drop_non_english) {
      bool english;
      if (rec.lang_hint) {
        std::string hint = *rec.lang_hint;
        std::transform(hint.begin(), hint.end(), hint.begin(), detail::ascii_lower);
        english = hint == "en" || hint.starts_with("en-") || hint.starts_with("en_");
      } else {
        english = detector.is_english(rec.text, cfg.english_threshold);
      }
      if (!english) {
        exclude(ExclusionReason::non_english);
        continue;
      }
    }
    if (cfg.drop_incomplete && static_cast<int>(split_words(normalize(rec.text)).size()) < cfg.min_words) {
      exclude(ExclusionReason::incomplete);
      continue;
    }
    if (cfg.drop_duplicates && !seen.insert(duplicate_key(rec.text)).second) {
      exclude(ExclusionReason::duplicate);
      continue;
    }
    out.kept.push_back(rec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labeled examples

enum class Provenance { lexicon_weak, manual, synthetic };

inline std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::lexicon_weak: return "lexicon_weak";
    case Provenance::manual: return "manual";
    case Provenance::synthetic: return "synthetic";
  }
  return "?";
}

inline Provenance parse_provenance(std::string_view s) {
  for (auto p : {Provenance::lexicon_weak, Provenance::manual, Provenance::synthetic})
    if (provenance_name(p) == s) return p;
  throw DataError("unknown provenance '" + std::string(s) + "'");
}

struct LabeledExample {
  std::string tweet_id;
  std::string clean_text;
  std::vector<std::string> tokens;
  DepressionClass label = DepressionClass::NoDepression;
  Provenance provenance = Provenance::lexicon_weak;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

inline LabeledExample make_example(std::string id, std::string_view raw_text, DepressionClass label,
                                   Provenance provenance, const NormalizationConfig& norm = {},
                                   const Stoplist& stoplist = default_stoplist()) {
  LabeledExample ex;
  ex.tweet_id = std::move(id);
  ex.clean_text = normalize(raw_text, norm);
  ex.tokens = remove_stopwords(split_words(ex.clean_text), stoplist);
  ex.label = label;
  ex.provenance = provenance;
  return ex;
}

inline nlohmann::ordered_json to_json(const LabeledExample& ex) {
  return {{"tweet_id", ex.tweet_id},
          {"clean_text", ex.clean_text},
          {"tokens", ex.tokens},
          {"label", class_name(ex.label)},
          {"provenance", provenance_name(ex.provenance)}};
}

inline LabeledExample example_from_json(const nlohmann::json& j) {
  static const std::set<std::string> kFields = {"tweet_id", "clean_text", "tokens", "label", "provenance"};
  for (const auto& [k, _] : j.items())
    if (!kFields.contains(k)) throw DataError("unexpected field '" + k + "' in labeled example");
  for (const auto& k : kFields)
    if (!j.contains(k)) throw DataError("labeled example missing field '" + k + "'");
  LabeledExample ex;
  ex.tweet_id = j.at("tweet_id").get<std::string>();
  ex.clean_text = j.at("clean_text").get<std::string>();
  ex.tokens = j.at("tokens").get<std::vector<std::string>>();
  ex.label = parse_class(j.at("label").get<std::string>());
  ex.provenance = parse_provenance(j.at("provenance").get<std::string>());
  return ex;
}

inline void write_jsonl(std::ostream& out, const std::vector<LabeledExample>& examples) {
  for (const auto& ex : examples) out << to_json(ex).dump() << '\n';
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<LabeledExample>& examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingResource("cannot write " + path.string(), path.string());
  write_jsonl(out, examples);
}

inline std::vector<LabeledExample> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingResource("cannot open labeled dataset: " + path.string(), path.string());
  std::vector<LabeledExample> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(example_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stratified split

struct SplitRatios {
  double train = 0.70;
  double validation = 0.15;
  double test = 0.15;

  std::array<double, 3> as_array() const { return {train, validation, test}; }
};

struct DatasetSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> validation;
  std::vector<LabeledExample> test;
  std::uint64_t seed = 0;
  SplitRatios ratios;

  std::array<const std::vector<LabeledExample>*, 3> parts() const { return {&train, &validation, &test}; }
};

// Largest-remainder apportionment of one class's n examples over the three
// partitions. Leftover units go to the largest fractional remainders; ties
// go to the partition furthest behind its running global target, then to
// the earlier partition. `assigned` and `total_before` carry the global
// state across classes processed in name order.
inline std::array<std::size_t, 3> apportion(std::size_t n, const std::array<double, 3>& ratios,
                                            const std::array<std::size_t, 3>& assigned, std::size_t total_before) {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t used = 0;
  for (int p = 0; p < 3; ++p) {
    const double quota = ratios[p] * static_cast<double>(n);
    counts[p] = static_cast<std::size_t>(std::floor(quota + 1e-12));
    remainder[p] = quota - static_cast<double>(counts[p]);
    used += counts[p];
  }
  std::array<int, 3> order = {0, 1, 2};
  const double total_after = static_cast<double>(total_before + n);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(remainder[a] - remainder[b]) > 1e-9) return remainder[a] > remainder[b];
    const double deficit_a = ratios[a] * total_after - static_cast<double>(assigned[a] + counts[a]);
    const double deficit_b = ratios[b] * total_after - static_cast<double>(assigned[b] + counts[b]);
    if (std::abs(deficit_a - deficit_b) > 1e-9) return deficit_a > deficit_b;
    return a < b;
  });
  for (std::size_t k = 0; used < n; ++k, ++used) ++counts[order[k % 3]];
  return counts;
}

inline DatasetSplit stratified_split(const std::vector<LabeledExample>& examples, const SplitRatios& ratios,
                                     std::uint64_t seed) {
  const auto r = ratios.as_array();
  for (double x : r)
    if (!(x > 0.0)) throw DataError("split ratios must all be positive");
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) throw DataError("split ratios must sum to 1");

  std::map<std::string_view, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < examples.size(); ++i) by_class[class_name(examples[i].label)].push_back(i);
  for (const auto& [name, idx] : by_class)
    if (idx.size() < 3)
      throw DataError("class " + std::string(name) + " has " + std::to_string(idx.size()) +
                      " examples; a stratified split needs at least 3");

  Rng rng(seed);
  std::array<std::vector<std::size_t>, 3> parts;
  std::array<std::size_t, 3> assigned{};
  std::size_t total = 0;
  for (auto& [name, idx] : by_class) {
    const auto counts = apportion(idx.size(), r, assigned, total);
    rng.shuffle(std::span<std::size_t>(idx));
    std::size_t k = 0;
    for (int p = 0; p < 3; ++p)
      for (std::size_t c = 0; c < counts[p]; ++c) parts[p].push_back(idx[k++]);
    for (int p = 0; p < 3; ++p) assigned[p] += counts[p];
    total += idx.size();
  }

  DatasetSplit split;
  split.seed = seed;
  split.ratios = ratios;
  std::array<std::vector<LabeledExample>*, 3> out = {&split.train, &split.validation, &split.test};
  for (int p = 0; p < 3; ++p) {
    std::sort(parts[p].begin(), parts[p].end());
    for (auto i : parts[p]) out[p]->push_back(examples[i]);
  }
  return split;
}

// ---------------------------------------------------------------------------
// Synthetic corpus

inline const std::vector<std::string>& default_noise_vocab() {
  static const std::vector<std::string> words = [] {
    return split_words(
        "airport apple autumn banana bank beach bedroom bike bird birthday book "
        "bread breakfast bridge brother budget bus cake camera car cat chair "
        "cheese chemistry chocolate city class cloud coding coffee coins concert "
        "cookies cousin dance deadline dinner discount dog door drums email exam "
        "family festival fish flowers football forest friends fruit gallery game "
        "garden grapes grill guitar gym history holiday homework horse house "
        "internet island juice kitchen kitten lamp laptop launch lemonade "
        "library lunch market match math meeting money moon morning mountain "
        "movie museum music neighbor news novel ocean office orange oven "
        "painting parade park party pasta phone photo physics piano picnic pizza "
        "podcast poem price project puppy queue radio rain recipe release river "
        "road run salad sale sandwich school science score season shopping "
        "sister snow sofa software song soup spring stars story street summer "
        "sunrise sunset sunshine table tea teacher team theater tickets tomatoes "
        "traffic train travel update video walk water waves weather website "
        "wedding weekend window winter yoga");
  }();
  return words;
}

struct SyntheticExample {
  LabeledExample example;
  // The text before normalization, with casing and tweet decorations.
  std::string raw_text;
};

// Builds examples that each embed one lexicon phrase (first-person framed)
// among noise words, or only noise words for NoDepression. Noise words that
// occur in any lexicon phrase are dropped so no accidental match can occur.
// Symptom-only atypical phrases are paired with a second symptom cue.
inline std::vector<SyntheticExample> generate_synthetic_corpus_raw(const std::map<DepressionClass, int>& counts,
                                                                  const LexiconSet& lex,
                                                                  const std::vector<std::string>& noise_vocab,
                                                                  std::uint64_t seed) {
  std::set<std::string> lexicon_words;
  for (const auto& [cls, phrases] : lex.entries())
    for (const auto& p : phrases)
      for (auto& w : split_words(p)) lexicon_words.insert(w);
  std::vector<std::string> noise;
  for (const auto& w : noise_vocab) {
    const std::string n = normalize(w);
    if (!n.empty() && n.find(' ') == std::string::npos && !lexicon_words.contains(n)) noise.push_back(n);
  }
  std::sort(noise.begin(), noise.end());
  noise.erase(std::unique(noise.begin(), noise.end()), noise.end());
  if (noise.empty()) throw DataError("noise vocabulary is empty after removing lexicon words");

  for (const auto& [cls, n] : counts)
    if (n > 0 && cls != DepressionClass::NoDepression && lex.phrases(cls).empty())
      throw DataError("no template phrases for class " + std::string(class_name(cls)));

  static const std::array<std::string_view, 5> kFrames = {"i have", "i am", "i was diagnosed with",
                                                           "my doctor says i have", "i think i have"};
  static const std::array<std::string_view, 4> kPersonal = {"i love", "my", "i miss", "me and my"};
  static const std::array<std::string_view, 4> kTags = {"#life", "#mondaymood", "#thoughts", "#news"};

  Rng rng(seed);
  auto pick = [&](const auto& items) -> decltype(auto) { return items[static_cast<std::size_t>(rng.below(items.size()))]; };
  auto noise_run = [&](int lo, int hi) {
    std::string s;
    const int n = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    for (int i = 0; i < n; ++i) {
      if (!s.empty()) s.push_back(' ');
      s += pick(noise);
    }
    return s;
  };

  std::vector<SyntheticExample> out;
  int serial = 0;
  for (auto cls : kAllClasses) {
    auto it = counts.find(cls);
    if (it == counts.end()) continue;
    for (int i = 0; i < it->second; ++i) {
      std::string core;
      if (cls == DepressionClass::NoDepression) {
        core = (rng.below(2) ? std::string(pick(kPersonal)) + " " : std::string()) + noise_run(1, 3);
      } else {
        const auto& phrases = lex.phrases(cls);
        const std::string& phrase = pick(phrases);
        const auto words = split_words(phrase);
        const bool self = std::any_of(words.begin(), words.end(), [](const std::string& w) {
          return w == "i" || w == "my" || w == "me" || w == "im" || w == "ive";
        });
        core = self ? phrase : std::string(pick(kFrames)) + " " + phrase;
        if (lex.is_weak_cue(phrase)) {
          std::vector<std::string> others;
          for (const auto& cue : lex.weak_cues())
            if (cue != phrase) others.push_back(cue);
          if (!others.empty()) core += " and " + pick(others);
        }
      }
      std::string text = noise_run(1, 4) + " " + core + " " + noise_run(1, 4);
      // Tweet-style decoration that normalization removes again.
      std::string raw = text;
      if (rng.below(3) == 0 && raw[0] >= 'a' && raw[0] <= 'z') raw[0] = static_cast<char>(raw[0] - 'a' + 'A');
      if (rng.below(4) == 0) raw += "!";
      if (rng.below(5) == 0) raw = "@friend" + std::to_string(rng.below(100)) + " " + raw;
      if (rng.below(5) == 0) raw += " https://t.co/x" + std::to_string(rng.below(1000));
      if (rng.below(5) == 0) raw += " " + std::string(pick(kTags));

      char id[32];
      std::snprintf(id, sizeof id, "syn%06d", serial++);
      out.push_back({make_example(id, raw, cls, Provenance::synthetic), raw});
    }
  }
  return out;
}

inline std::vector<LabeledExample> generate_synthetic_corpus(const std::map<DepressionClass, int>& counts,
                                                             const LexiconSet& lex,
                                                             const std::vector<std::string>& noise_vocab,
                                                             std::uint64_t seed) {
  std::vector<LabeledExample> out;
  for (auto& s : generate_synthetic_corpus_raw(counts, lex, noise_vocab, seed)) out.push_back(std::move(s.example));
  return out;
}

}  // namespace deptype
