#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "deptype/error.hpp"

namespace deptype {

struct NormalizationConfig {
  bool lowercase = true;
  bool strip_urls = true;
  bool strip_handles = true;
  bool strip_hashtag_marks = true;
  bool strip_punct_and_digits = true;
  bool collapse_whitespace = true;
};

namespace detail {

inline bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
inline bool is_ascii_alpha(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }
inline bool is_handle_char(unsigned char c) { return is_ascii_alpha(c) || is_ascii_digit(c) || c == '_'; }
inline char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

inline bool starts_with_icase(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (s.size() - pos < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (ascii_lower(s[pos + i]) != prefix[i]) return false;
  return true;
}

// U+2019 RIGHT SINGLE QUOTATION MARK, the usual apostrophe in tweets.
inline constexpr std::string_view kCurlyApostrophe = "\xE2\x80\x99";

inline std::string strip_urls(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (starts_with_icase(in, i, "http://") || starts_with_icase(in, i, "https://") ||
        starts_with_icase(in, i, "www.")) {
      while (i < in.size() && !is_ascii_space(static_cast<unsigned char>(in[i]))) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(in[i++]);
  }
  return out;
}

inline std::string strip_handles(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    if (in[i] == '@' && i + 1 < in.size() && is_handle_char(static_cast<unsigned char>(in[i + 1]))) {
      ++i;
      while (i < in.size() && is_handle_char(static_cast<unsigned char>(in[i]))) ++i;
      out.push_back(' ');
      continue;
    }
    out.push_back(in[i++]);
  }
  return out;
}

// Apostrophes are deleted so contractions stay one word ("i'm" -> "im");
// every other ASCII punctuation mark and digit becomes a space.
inline std::string strip_punct_and_digits(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  std::size_t i = 0;
  while (i < in.size()) {
    const auto c = static_cast<unsigned char>(in[i]);
    if (c == '\'') {
      ++i;
    } else if (in.substr(i, kCurlyApostrophe.size()) == kCurlyApostrophe) {
      i += kCurlyApostrophe.size();
    } else if (c < 0x80 && (is_ascii_digit(c) || std::ispunct(c))) {
      out.push_back(' ');
      ++i;
    } else {
      out.push_back(in[i++]);
    }
  }
  return out;
}

inline std::string collapse_whitespace(std::string_view in) {
  std::string out;
  out.reserve(in.size());
  bool pending_space = false;
  for (char ch : in) {
    if (is_ascii_space(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch);
  }
  return out;
}

}  // namespace detail

// Rules run in a fixed order: URLs, handles, hashtag marks, punctuation and
// digits, lowercase, whitespace collapse. With default flags the output is a
// fixed point: normalize(normalize(x)) == normalize(x).
inline std::string normalize(std::string_view text, const NormalizationConfig& cfg = {}) {
  std::string s(text);
  if (cfg.strip_urls) s = detail::strip_urls(s);
  if (cfg.strip_handles) s = detail::strip_handles(s);
  if (cfg.strip_hashtag_marks) std::erase(s, '#');
  if (cfg.strip_punct_and_digits) s = detail::strip_punct_and_digits(s);
  if (cfg.lowercase) std::transform(s.begin(), s.end(), s.begin(), detail::ascii_lower);
  if (cfg.collapse_whitespace) s = detail::collapse_whitespace(s);
  return s;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && !detail::is_ascii_space(static_cast<unsigned char>(text[i]))) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

// ---------------------------------------------------------------------------
// Stopwords

using Stoplist = std::unordered_set<std::string>;

// 120 common function words. Negations ("not", "no") and first-person
// pronouns are deliberately absent: negations flip meaning and the
// pronouns drive the self-report labeling rule.
inline const Stoplist& default_stoplist() {
  static const Stoplist list = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "could", "did",
      "do", "does", "doing", "down", "during", "each", "few", "for", "from",
      "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "if", "in", "into", "is", "it",
      "its", "itself", "just", "more", "most", "nor", "of", "off", "on", "once",
      "only", "or", "other", "others", "our", "ours", "ourselves", "out", "over",
      "own", "same", "she", "should", "so", "some", "such", "than", "that",
      "the", "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until", "up",
      "very", "was", "we", "were", "what", "when", "where", "which", "while",
      "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
      "yourself", "yourselves"};
  return list;
}

inline std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                                 const Stoplist& stoplist = default_stoplist()) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stoplist.contains(t)) kept.push_back(t);
  return kept;
}

inline Stoplist load_stoplist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingResource("cannot open stoplist: " + path.string(), path.string());
  Stoplist list;
  std::string line;
  while (std::getline(in, line)) {
    auto words = split_words(line);
    if (!words.empty()) list.insert(words.front());
  }
  return list;
}

inline void save_stoplist(const Stoplist& list, const std::filesystem::path& path) {
  std::vector<std::string> sorted(list.begin(), list.end());
  std::sort(sorted.begin(), sorted.end());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingResource("cannot write stoplist: " + path.string(), path.string());
  for (const auto& w : sorted) out << w << '\n';
}

// Full word-level pipeline used by every model: normalize, split, drop stopwords.
inline std::vector<std::string> preprocess_tokens(std::string_view text, const NormalizationConfig& cfg = {},
                                                  const Stoplist& stoplist = default_stoplist()) {
  return remove_stopwords(split_words(normalize(text, cfg)), stoplist);
}

// ---------------------------------------------------------------------------
// Subword vocabulary

namespace detail {

// Splits UTF-8 into code points; stray bytes become one-byte units.
inline std::vector<std::string> utf8_units(std::string_view s) {
  std::vector<std::string> units;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c >= 0xF0 && c < 0xF8) len = 4;
    else if (c >= 0xE0) len = (c < 0xF0) ? 3 : 1;
    else if (c >= 0xC0) len = 2;
    if (i + len > s.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k)
      if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    units.emplace_back(s.substr(i, len));
    i += len;
  }
  return units;
}

}  // namespace detail

struct SpecialIds {
  int pad_id = 0;
  int unk_id = 1;
  int cls_id = 2;
  int sep_id = 3;
};

struct EncodedSequence {
  std::vector<int> ids;
  std::vector<int> attention_mask;
  // For each position: index of the source token the piece came from, or -1
  // for specials and padding.
  std::vector<int> piece_token;

  std::size_t length() const { return ids.size(); }
  int content_length() const {
    int n = 0;
    for (int m : attention_mask) n += m;
    return n;
  }
};

class SubwordVocab {
 public:
  static constexpr int kDefaultMaxLen = 64;
  static constexpr std::string_view kPad = "[PAD]", kUnk = "[UNK]", kCls = "[CLS]", kSep = "[SEP]";

  SubwordVocab() = default;

  SubwordVocab(std::vector<std::string> pieces, std::string continuation_prefix, SpecialIds specials,
               int max_len)
      : pieces_(std::move(pieces)), prefix_(std::move(continuation_prefix)), specials_(specials),
        max_len_(max_len) {
    if (max_len_ < 2) throw DataError("subword max_len must be at least 2");
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      auto [it, inserted] = index_.emplace(pieces_[i], static_cast<int>(i));
      if (!inserted) throw DataError("duplicate subword piece: " + pieces_[i]);
    }
    const int n = size();
    for (int id : {specials_.pad_id, specials_.unk_id, specials_.cls_id, specials_.sep_id})
      if (id < 0 || id >= n) throw DataError("special id out of range");
    std::set<int> distinct = {specials_.pad_id, specials_.unk_id, specials_.cls_id, specials_.sep_id};
    if (distinct.size() != 4) throw DataError("special ids must be distinct");
    for (const auto& p : pieces_) longest_piece_ = std::max(longest_piece_, p.size());
  }

  int size() const { return static_cast<int>(pieces_.size()); }
  int max_len() const { return max_len_; }
  const SpecialIds& specials() const { return specials_; }
  const std::string& continuation_prefix() const { return prefix_; }
  const std::vector<std::string>& pieces() const { return pieces_; }
  const std::string& piece(int id) const { return pieces_.at(static_cast<std::size_t>(id)); }

  std::optional<int> find(std::string_view piece) const {
    auto it = index_.find(std::string(piece));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  SubwordVocab with_max_len(int max_len) const {
    return SubwordVocab(pieces_, prefix_, specials_, max_len);
  }

  // Greedy longest-prefix decomposition of one word. A code point with no
  // piece becomes unk_id and decomposition continues after it.
  std::vector<int> decompose(std::string_view word) const {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < word.size()) {
      const std::string_view lead = pos == 0 ? std::string_view{} : std::string_view(prefix_);
      const std::size_t max_take = std::min(word.size() - pos, longest_piece_);
      int found = -1;
      std::size_t taken = 0;
      std::string candidate;
      for (std::size_t take = max_take; take > 0; --take) {
        candidate.assign(lead);
        candidate.append(word.substr(pos, take));
        if (auto it = index_.find(candidate); it != index_.end() && !is_special(it->second)) {
          found = it->second;
          taken = take;
          break;
        }
      }
      if (found < 0) {
        out.push_back(specials_.unk_id);
        pos += detail::utf8_units(word.substr(pos, std::min<std::size_t>(4, word.size() - pos))).front().size();
      } else {
        out.push_back(found);
        pos += taken;
      }
    }
    return out;
  }

  // [CLS] pieces... [SEP] [PAD]...; always exactly max_len long. Content
  // longer than max_len - 2 pieces is cut at a token boundary.
  EncodedSequence encode(const std::vector<std::string>& tokens) const {
    EncodedSequence seq;
    const auto cap = static_cast<std::size_t>(max_len_ - 2);
    seq.ids.push_back(specials_.cls_id);
    seq.piece_token.push_back(-1);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      auto pieces = decompose(tokens[t]);
      if (seq.ids.size() - 1 + pieces.size() > cap) break;
      for (int id : pieces) {
        seq.ids.push_back(id);
        seq.piece_token.push_back(static_cast<int>(t));
      }
    }
    seq.ids.push_back(specials_.sep_id);
    seq.piece_token.push_back(-1);
    seq.attention_mask.assign(seq.ids.size(), 1);
    while (seq.ids.size() < static_cast<std::size_t>(max_len_)) {
      seq.ids.push_back(specials_.pad_id);
      seq.attention_mask.push_back(0);
      seq.piece_token.push_back(-1);
    }
    return seq;
  }

  // Inverse of decompose for the pieces of one token.
  std::string reconstruct(std::span<const int> ids) const {
    std::string word;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::string& p = piece(ids[i]);
      if (i > 0 && p.starts_with(prefix_)) word += p.substr(prefix_.size());
      else word += p;
    }
    return word;
  }

  bool is_special(int id) const {
    return id == specials_.pad_id || id == specials_.unk_id || id == specials_.cls_id || id == specials_.sep_id;
  }

  // Text format: a header line with the special ids, continuation prefix and
  // max_len, then one piece per line in id order.
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingResource("cannot write subword vocab: " + path.string(), path.string());
    out << "#subword pad=" << specials_.pad_id << " unk=" << specials_.unk_id << " cls=" << specials_.cls_id
        << " sep=" << specials_.sep_id << " prefix=" << prefix_ << " max_len=" << max_len_ << '\n';
    for (const auto& p : pieces_) out << p << '\n';
  }

  static SubwordVocab load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingResource("cannot open subword vocab: " + path.string(), path.string());
    std::string header;
    if (!std::getline(in, header) || !header.starts_with("#subword"))
      throw DataError("subword vocab missing header: " + path.string());
    SpecialIds sp;
    std::string prefix = "##";
    int max_len = kDefaultMaxLen;
    std::istringstream hs(header.substr(8));
    std::string kv;
    while (hs >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw DataError("bad subword header field: " + kv);
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "pad") sp.pad_id = std::stoi(value);
      else if (key == "unk") sp.unk_id = std::stoi(value);
      else if (key == "cls") sp.cls_id = std::stoi(value);
      else if (key == "sep") sp.sep_id = std::stoi(value);
      else if (key == "prefix") prefix = value;
      else if (key == "max_len") max_len = std::stoi(value);
      else throw DataError("unknown subword header field: " + key);
    }
    std::vector<std::string> pieces;
    std::string line;
    while (std::getline(in, line)) pieces.push_back(line);
    return SubwordVocab(std::move(pieces), std::move(prefix), sp, max_len);
  }

  friend bool operator==(const SubwordVocab& a, const SubwordVocab& b) {
    return a.pieces_ == b.pieces_ && a.prefix_ == b.prefix_ && a.max_len_ == b.max_len_ &&
           a.specials_.pad_id == b.specials_.pad_id && a.specials_.unk_id == b.specials_.unk_id &&
           a.specials_.cls_id == b.specials_.cls_id && a.specials_.sep_id == b.specials_.sep_id;
  }

 private:
  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int> index_;
  std::string prefix_ = "##";
  SpecialIds specials_;
  int max_len_ = kDefaultMaxLen;
  std::size_t longest_piece_ = 0;
};

struct SubwordTrainResult {
  SubwordVocab vocab;
  std::vector<std::pair<std::string, std::string>> merges;
};

// Byte-pair style training. Each word starts as code points, the first bare
// and the rest carrying the continuation prefix; both forms of every code
// point seen are in the base alphabet so any word over it decomposes. The
// most frequent adjacent pair is merged until target_size pieces exist or no
// pair remains. Frequency ties go to the smaller merged surface string, then
// the smaller left piece.
inline SubwordTrainResult train_subword_vocab_with_merges(const std::vector<std::string>& corpus, int target_size,
                                                          int max_len = SubwordVocab::kDefaultMaxLen,
                                                          const std::string& prefix = "##") {
  if (corpus.empty()) throw DataError("subword training corpus is empty");

  std::map<std::string, std::int64_t> word_freq;
  for (const auto& text : corpus)
    for (auto& w : split_words(text)) ++word_freq[w];

  std::set<std::string> chars;
  for (const auto& [w, _] : word_freq)
    for (auto& u : detail::utf8_units(w)) chars.insert(u);

  std::vector<std::string> pieces = {std::string(SubwordVocab::kPad), std::string(SubwordVocab::kUnk),
                                     std::string(SubwordVocab::kCls), std::string(SubwordVocab::kSep)};
  const SpecialIds specials{0, 1, 2, 3};
  std::set<std::string> alphabet;
  for (const auto& c : chars) {
    alphabet.insert(c);
    alphabet.insert(prefix + c);
  }
  pieces.insert(pieces.end(), alphabet.begin(), alphabet.end());
  if (target_size < static_cast<int>(pieces.size()))
    throw DataError("target_size " + std::to_string(target_size) + " below alphabet size + specials (" +
                    std::to_string(pieces.size()) + ")");

  std::set<std::string> known(pieces.begin(), pieces.end());
  struct Word {
    std::vector<std::string> symbols;
    std::int64_t freq;
  };
  std::vector<Word> words;
  for (const auto& [w, f] : word_freq) {
    Word word{{}, f};
    auto units = detail::utf8_units(w);
    for (std::size_t i = 0; i < units.size(); ++i) word.symbols.push_back(i == 0 ? units[i] : prefix + units[i]);
    words.push_back(std::move(word));
  }

  auto surface = [&](const std::string& s) {
    return s.starts_with(prefix) ? s.substr(prefix.size()) : s;
  };

  std::vector<std::pair<std::string, std::string>> merges;
  while (static_cast<int>(pieces.size()) < target_size) {
    std::map<std::pair<std::string, std::string>, std::int64_t> pair_freq;
    for (const auto& w : words)
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) pair_freq[{w.symbols[i], w.symbols[i + 1]}] += w.freq;
    if (pair_freq.empty()) break;

    const std::pair<std::string, std::string>* best = nullptr;
    std::int64_t best_freq = -1;
    std::string best_surface;
    for (const auto& [pair, f] : pair_freq) {
      std::string s = surface(pair.first) + surface(pair.second);
      if (f > best_freq || (f == best_freq && (s < best_surface || (s == best_surface && pair < *best)))) {
        best = &pair;
        best_freq = f;
        best_surface = std::move(s);
      }
    }
    const auto [left, right] = *best;
    const std::string merged = left + surface(right);
    merges.emplace_back(left, right);
    if (known.insert(merged).second) pieces.push_back(merged);

    for (auto& w : words) {
      std::vector<std::string> next;
      next.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size(); ++i) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == left && w.symbols[i + 1] == right) {
          next.push_back(merged);
          ++i;
        } else {
          next.push_back(w.symbols[i]);
        }
      }
      w.symbols = std::move(next);
    }
  }
  return {SubwordVocab(std::move(pieces), prefix, specials, max_len), std::move(merges)};
}

inline SubwordVocab train_subword_vocab(const std::vector<std::string>& corpus, int target_size,
                                        int max_len = SubwordVocab::kDefaultMaxLen) {
  return train_subword_vocab_with_merges(corpus, target_size, max_len).vocab;
}

}  // namespace deptype
