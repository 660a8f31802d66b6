#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptype/classes.hpp"
#include "deptype/error.hpp"
#include "deptype/textprep.hpp"

namespace deptype {

struct LexiconMatch {
  DepressionClass cls;
  std::string phrase;
  // Half-open byte offsets into the normalized text.
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const LexiconMatch&, const LexiconMatch&) = default;
};

// The five depression classes each map to a non-empty phrase list;
// NoDepression has none. Phrases are stored normalized, and a phrase may
// belong to one class only. "Weak cues" are symptom phrases that are not
// enough on their own to label a text.
class LexiconSet {
 public:
  LexiconSet() = default;

  LexiconSet(std::map<DepressionClass, std::vector<std::string>> entries, std::set<std::string> weak_cues = {},
             std::string version = "custom")
      : version_(std::move(version)) {
    std::map<std::string, DepressionClass> owner;
    for (auto& [cls, phrases] : entries) {
      if (cls == DepressionClass::NoDepression && !phrases.empty())
        throw DataError("NoDepression must not carry lexicon phrases");
      auto& bucket = entries_[cls];
      for (const auto& raw : phrases) {
        std::string phrase = normalize(raw);
        if (phrase.empty()) throw DataError("empty lexicon phrase under " + std::string(class_name(cls)));
        auto [it, inserted] = owner.emplace(phrase, cls);
        if (!inserted) {
          if (it->second == cls) continue;
          throw DataError("lexicon phrase '" + phrase + "' assigned to both " + std::string(class_name(it->second)) +
                          " and " + std::string(class_name(cls)));
        }
        bucket.push_back(phrase);
      }
      std::sort(bucket.begin(), bucket.end());
    }
    for (auto cls : kDepressionClasses)
      if (entries_[cls].empty())
        throw DataError("lexicon has no phrases for class " + std::string(class_name(cls)));
    entries_[DepressionClass::NoDepression];
    for (const auto& raw : weak_cues) {
      std::string cue = normalize(raw);
      if (!owner.contains(cue)) throw DataError("weak cue '" + cue + "' is not a lexicon phrase");
      weak_cues_.insert(cue);
    }
    for (const auto& [phrase, cls] : owner) {
      Pattern p{split_words(phrase), phrase, cls};
      by_first_word_[p.words.front()].push_back(std::move(p));
    }
  }

  const std::vector<std::string>& phrases(DepressionClass c) const {
    static const std::vector<std::string> none;
    auto it = entries_.find(c);
    return it == entries_.end() ? none : it->second;
  }
  const std::map<DepressionClass, std::vector<std::string>>& entries() const { return entries_; }
  const std::set<std::string>& weak_cues() const { return weak_cues_; }
  bool is_weak_cue(const std::string& phrase) const { return weak_cues_.contains(phrase); }
  const std::string& version() const { return version_; }

  // All non-overlapping matches, longest first, reported in text order.
  // Phrases match whole words only.
  std::vector<LexiconMatch> match(std::string_view text) const {
    struct Word {
      std::string_view text;
      std::size_t begin, end;
    };
    std::vector<Word> words;
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && text[i] == ' ') ++i;
      const std::size_t start = i;
      while (i < text.size() && text[i] != ' ') ++i;
      if (i > start) words.push_back({text.substr(start, i - start), start, i});
    }

    std::vector<LexiconMatch> candidates;
    for (std::size_t w = 0; w < words.size(); ++w) {
      auto it = by_first_word_.find(std::string(words[w].text));
      if (it == by_first_word_.end()) continue;
      for (const auto& p : it->second) {
        if (w + p.words.size() > words.size()) continue;
        bool ok = true;
        for (std::size_t k = 1; k < p.words.size() && ok; ++k) ok = words[w + k].text == p.words[k];
        if (ok) candidates.push_back({p.cls, p.phrase, words[w].begin, words[w + p.words.size() - 1].end});
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const LexiconMatch& a, const LexiconMatch& b) {
      const auto la = a.end - a.begin, lb = b.end - b.begin;
      if (la != lb) return la > lb;
      if (a.begin != b.begin) return a.begin < b.begin;
      return a.phrase < b.phrase;
    });
    std::vector<LexiconMatch> chosen;
    for (auto& c : candidates) {
      const bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](const LexiconMatch& m) {
        return c.begin < m.end && m.begin < c.end;
      });
      if (!overlaps) chosen.push_back(std::move(c));
    }
    std::sort(chosen.begin(), chosen.end(), [](const LexiconMatch& a, const LexiconMatch& b) { return a.begin < b.begin; });
    return chosen;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["_version"] = version_;
    for (auto c : kDepressionClasses) j[std::string(class_name(c))] = phrases(c);
    j["_weak_cues"] = std::vector<std::string>(weak_cues_.begin(), weak_cues_.end());
    return j;
  }

  static LexiconSet from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DataError("lexicon file must be a JSON object of class name to phrase list");
    std::map<DepressionClass, std::vector<std::string>> entries;
    std::set<std::string> weak;
    std::string version = "custom";
    for (const auto& [key, value] : j.items()) {
      if (key == "_version") {
        version = value.get<std::string>();
      } else if (key == "_weak_cues") {
        for (const auto& cue : value) weak.insert(cue.get<std::string>());
      } else {
        auto cls = try_parse_class(key);
        if (!cls) throw DataError("lexicon file names unknown class '" + key + "'");
        if (!value.is_array()) throw DataError("lexicon entry for " + key + " must be an array");
        for (const auto& phrase : value) entries[*cls].push_back(phrase.get<std::string>());
      }
    }
    return LexiconSet(std::move(entries), std::move(weak), std::move(version));
  }

 private:
  struct Pattern {
    std::vector<std::string> words;
    std::string phrase;
    DepressionClass cls;
  };

  std::map<DepressionClass, std::vector<std::string>> entries_;
  std::set<std::string> weak_cues_;
  std::map<std::string, std::vector<Pattern>> by_first_word_;
  std::string version_ = "custom";
};

// The collection lexicons, verbatim apart from case. The atypical symptom
// phrases are marked as weak cues.
inline const char* default_lexicon_json() {
  return R"({
  "_version": "default-1",
  "Bipolar": [
    "i have bipolar disorder",
    "suffering from bipolar disorder",
    "i have bipolar depression",
    "suffering from bipolar depression",
    "bipolar affective disorder",
    "bipolar mood disorder",
    "bipolar"
  ],
  "Major": [
    "i have a major depressive disorder",
    "i am suffering from major depressive disorder",
    "i have major depression",
    "suffering from major depression",
    "major depressive episode"
  ],
  "Psychotic": [
    "psychotic depression",
    "delusional depression",
    "psychotic depressive disorder",
    "melancholic depression",
    "i have psychosis",
    "i have psychotic depression"
  ],
  "Atypical": [
    "major depression with atypical features",
    "atypical major depression",
    "hypersomnia",
    "feeling sad or hopeless",
    "increased appetite",
    "weight gain",
    "feeling worthless"
  ],
  "Postpartum": [
    "postbirth depression",
    "post-childbirth depression",
    "maternal depression",
    "i have postpartum depression"
  ],
  "NoDepression": [],
  "_weak_cues": [
    "hypersomnia",
    "feeling sad or hopeless",
    "increased appetite",
    "weight gain",
    "feeling worthless"
  ]
}
)";
}

inline const LexiconSet& default_lexicons() {
  static const LexiconSet lex = LexiconSet::from_json(nlohmann::json::parse(default_lexicon_json()));
  return lex;
}

inline LexiconSet load_lexicons(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingResource("cannot open lexicon file: " + path.string(), path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("lexicon file " + path.string() + " is not valid JSON: " + e.what());
  }
  return LexiconSet::from_json(j);
}

inline std::vector<LexiconMatch> match_lexicons(std::string_view text, const LexiconSet& lex) {
  return lex.match(text);
}

// ---------------------------------------------------------------------------
// Weak labeling

enum class WeakDecision { labeled, needs_review, no_match };

inline std::string_view decision_name(WeakDecision d) {
  switch (d) {
    case WeakDecision::labeled: return "labeled";
    case WeakDecision::needs_review: return "needs_review";
    case WeakDecision::no_match: return "no_match";
  }
  return "?";
}

struct WeakLabelOutcome {
  WeakDecision decision = WeakDecision::no_match;
  std::optional<DepressionClass> label;
  std::vector<LexiconMatch> matches;
  bool first_person = false;
  // Empty unless decision == needs_review: third_person, class_conflict or
  // weak_atypical_cue.
  std::string review_reason;
};

struct WeakLabelConfig {
  // Maximum distance in words between a first-person marker and a match.
  // 0 means anywhere in the text (normalized text is one sentence since
  // punctuation is gone).
  int window_words = 0;
  std::set<std::string> first_person_markers = {"i", "i'm", "im", "i've", "ive", "my", "me"};
  // "my" directly before one of these is about someone else ("my friend has ...").
  std::set<std::string> third_party_nouns = {
      "aunt",   "baby",    "boyfriend", "brother",  "child",    "colleague", "cousin",   "coworker",
      "dad",    "daughter", "father",   "friend",   "friends",  "girlfriend", "grandma", "grandmother",
      "grandpa", "husband", "kid",      "kids",     "mom",      "mother",    "mum",      "neighbor",
      "partner", "roommate", "sister",  "son",      "uncle",    "wife"};
};

inline WeakLabelOutcome weak_label(std::string_view text, const LexiconSet& lex, const WeakLabelConfig& cfg = {}) {
  WeakLabelOutcome out;
  out.matches = lex.match(text);

  // Word index of every byte offset that starts a word.
  std::vector<std::pair<std::size_t, std::string_view>> words;
  for (std::size_t i = 0; i < text.size();) {
    while (i < text.size() && text[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < text.size() && text[i] != ' ') ++i;
    if (i > start) words.emplace_back(start, text.substr(start, i - start));
  }
  auto word_at = [&](std::size_t offset) {
    auto it = std::upper_bound(words.begin(), words.end(), offset,
                               [](std::size_t off, const auto& w) { return off < w.first; });
    return static_cast<int>(std::distance(words.begin(), it)) - 1;
  };
  std::vector<int> markers;
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (!cfg.first_person_markers.contains(std::string(words[w].second))) continue;
    if (words[w].second == "my" && w + 1 < words.size() &&
        cfg.third_party_nouns.contains(std::string(words[w + 1].second)))
      continue;
    markers.push_back(static_cast<int>(w));
  }

  if (out.matches.empty()) {
    out.first_person = !markers.empty();
    out.decision = WeakDecision::no_match;
    return out;
  }

  bool first_person = false;
  for (const auto& m : out.matches) {
    const int first = word_at(m.begin), last = word_at(m.end - 1);
    for (int w : markers) {
      const int dist = w < first ? first - w : (w > last ? w - last : 0);
      if (cfg.window_words <= 0 || dist <= cfg.window_words) first_person = true;
    }
  }
  out.first_person = first_person;

  std::set<DepressionClass> classes;
  for (const auto& m : out.matches) classes.insert(m.cls);
  if (classes.size() > 1) {
    out.decision = WeakDecision::needs_review;
    out.review_reason = "class_conflict";
    return out;
  }
  if (!first_person) {
    out.decision = WeakDecision::needs_review;
    out.review_reason = "third_person";
    return out;
  }
  const DepressionClass cls = *classes.begin();
  if (cls == DepressionClass::Atypical) {
    std::set<std::string> weak_seen;
    bool strong = false;
    for (const auto& m : out.matches) {
      if (lex.is_weak_cue(m.phrase)) weak_seen.insert(m.phrase);
      else strong = true;
    }
    if (!strong && weak_seen.size() < 2) {
      out.decision = WeakDecision::needs_review;
      out.review_reason = "weak_atypical_cue";
      return out;
    }
  }
  out.decision = WeakDecision::labeled;
  out.label = cls;
  return out;
}

inline nlohmann::ordered_json match_to_json(const LexiconMatch& m) {
  return {{"class", class_name(m.cls)}, {"phrase", m.phrase}, {"begin", m.begin}, {"end", m.end}};
}

// One line of the manual review queue.
inline nlohmann::ordered_json review_entry(std::string_view tweet_id, std::string_view text,
                                           const WeakLabelOutcome& outcome) {
  nlohmann::ordered_json matches = nlohmann::ordered_json::array();
  for (const auto& m : outcome.matches) matches.push_back(match_to_json(m));
  return {{"tweet_id", tweet_id}, {"text", text}, {"matches", std::move(matches)}, {"reason", outcome.review_reason}};
}

}  // namespace deptype
