#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "deptype/error.hpp"
#include "deptype/nn/tensor.hpp"
#include "deptype/rng.hpp"
#include "deptype/textprep.hpp"

namespace deptype {

// Sparse vector with entries sorted by index.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;
  int dim = 0;

  double norm() const {
    double s = 0.0;
    for (const auto& [_, w] : entries) s += w * w;
    return std::sqrt(s);
  }
  double get(int index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const auto& e, int i) { return e.first < i; });
    return (it != entries.end() && it->first == index) ? it->second : 0.0;
  }
  std::vector<double> dense() const {
    std::vector<double> d(static_cast<std::size_t>(dim), 0.0);
    for (const auto& [i, w] : entries) d[static_cast<std::size_t>(i)] = w;
    return d;
  }

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<int> df, int n_docs)
      : terms_(std::move(terms)), df_(std::move(df)), n_docs_(n_docs) {
    if (terms_.size() != df_.size()) throw DataError("vocabulary terms and df counts differ in length");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (df_[i] < 0 || df_[i] > n_docs_) throw DataError("document frequency out of range for " + terms_[i]);
      if (!index_.emplace(terms_[i], static_cast<int>(i)).second) throw DataError("duplicate term " + terms_[i]);
    }
  }

  int size() const { return static_cast<int>(terms_.size()); }
  int n_docs() const { return n_docs_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(int id) const { return terms_.at(static_cast<std::size_t>(id)); }
  int df(int id) const { return df_.at(static_cast<std::size_t>(id)); }
  std::optional<int> id(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<int> df(const std::string& term) const {
    auto i = id(term);
    if (!i) return std::nullopt;
    return df_[static_cast<std::size_t>(*i)];
  }

  // Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
  double idf(int id) const {
    return std::log((1.0 + n_docs_) / (1.0 + df_.at(static_cast<std::size_t>(id)))) + 1.0;
  }

  // Keeps the k terms with the highest df (ties: lexicographic), re-indexed
  // in lexicographic order.
  Vocabulary top_k_by_df(int k) const {
    if (k <= 0 || k >= size()) return *this;
    std::vector<int> order(terms_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return df_[a] > df_[b]; });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());
    std::vector<std::string> terms;
    std::vector<int> df;
    for (int i : order) {
      terms.push_back(terms_[i]);
      df.push_back(df_[i]);
    }
    return Vocabulary(std::move(terms), std::move(df), n_docs_);
  }

  // "#vocab n_docs=N" then "term<TAB>df" per line in id order.
  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingResource("cannot write vocabulary: " + path.string(), path.string());
    out << "#vocab n_docs=" << n_docs_ << '\n';
    for (std::size_t i = 0; i < terms_.size(); ++i) out << terms_[i] << '\t' << df_[i] << '\n';
  }

  static Vocabulary load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingResource("cannot open vocabulary: " + path.string(), path.string());
    std::string line;
    if (!std::getline(in, line) || !line.starts_with("#vocab n_docs="))
      throw DataError("vocabulary file missing header: " + path.string());
    const int n_docs = std::stoi(line.substr(14));
    std::vector<std::string> terms;
    std::vector<int> df;
    int line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      const auto tab = line.find('\t');
      if (tab == std::string::npos) throw DataError(path.string() + ":" + std::to_string(line_no) + ": missing tab");
      terms.push_back(line.substr(0, tab));
      df.push_back(std::stoi(line.substr(tab + 1)));
    }
    return Vocabulary(std::move(terms), std::move(df), n_docs);
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.df_ == b.df_ && a.n_docs_ == b.n_docs_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<int> df_;
  std::unordered_map<std::string, int> index_;
  int n_docs_ = 0;
};

inline Vocabulary fit_vocabulary(const std::vector<std::vector<std::string>>& docs, int min_df = 1) {
  if (docs.empty()) throw DataError("cannot fit a vocabulary on zero documents");
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    std::set<std::string> unique(doc.begin(), doc.end());
    for (const auto& t : unique) ++df[t];
  }
  std::vector<std::string> terms;
  std::vector<int> counts;
  for (const auto& [t, c] : df) {
    if (c < min_df) continue;
    terms.push_back(t);
    counts.push_back(c);
  }
  if (terms.empty()) throw DataError("every term filtered out by min_df=" + std::to_string(min_df));
  return Vocabulary(std::move(terms), std::move(counts), static_cast<int>(docs.size()));
}

// Raw term counts over the vocabulary; unknown terms are skipped.
inline SparseVector bow_transform(const std::vector<std::string>& doc, const Vocabulary& vocab) {
  std::map<int, double> counts;
  for (const auto& t : doc)
    if (auto id = vocab.id(t)) counts[*id] += 1.0;
  SparseVector v;
  v.dim = vocab.size();
  v.entries.assign(counts.begin(), counts.end());
  return v;
}

// weight(t) = tf(t, doc) * (ln((1 + N) / (1 + df(t))) + 1), then the vector is
// scaled to unit L2 norm. tf is the raw count; unknown terms are skipped and
// a document with no known term maps to the zero vector.
inline SparseVector tfidf_transform(const std::vector<std::string>& doc, const Vocabulary& vocab) {
  SparseVector v = bow_transform(doc, vocab);
  for (auto& [i, w] : v.entries) w *= vocab.idf(i);
  const double n = v.norm();
  if (n > 0.0)
    for (auto& [_, w] : v.entries) w /= n;
  return v;
}

enum class FeatureMode { bow, tfidf };

inline std::string_view feature_mode_name(FeatureMode m) { return m == FeatureMode::bow ? "bow" : "tfidf"; }
inline FeatureMode parse_feature_mode(std::string_view s) {
  if (s == "bow") return FeatureMode::bow;
  if (s == "tfidf") return FeatureMode::tfidf;
  throw DataError("unknown feature mode '" + std::string(s) + "' (expected bow or tfidf)");
}

inline SparseVector transform(const std::vector<std::string>& doc, const Vocabulary& vocab, FeatureMode mode) {
  return mode == FeatureMode::bow ? bow_transform(doc, vocab) : tfidf_transform(doc, vocab);
}

// ---------------------------------------------------------------------------
// Pretrained word embeddings

enum class OovPolicy { zeros, mean_vector };

inline std::string_view oov_policy_name(OovPolicy p) { return p == OovPolicy::zeros ? "zeros" : "mean_vector"; }
inline OovPolicy parse_oov_policy(std::string_view s) {
  if (s == "zeros") return OovPolicy::zeros;
  if (s == "mean_vector") return OovPolicy::mean_vector;
  throw DataError("unknown oov policy '" + std::string(s) + "'");
}

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::vector<std::string> terms, Matrix vectors, OovPolicy policy = OovPolicy::zeros)
      : terms_(std::move(terms)), vectors_(std::move(vectors)), policy_(policy) {
    if (static_cast<int>(terms_.size()) != vectors_.rows) throw DataError("embedding terms/rows mismatch");
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], static_cast<int>(i));
    mean_.assign(static_cast<std::size_t>(vectors_.cols), 0.0);
    for (int r = 0; r < vectors_.rows; ++r)
      for (int c = 0; c < vectors_.cols; ++c) mean_[c] += vectors_(r, c);
    if (vectors_.rows > 0)
      for (auto& m : mean_) m /= vectors_.rows;
  }

  int dim() const { return vectors_.cols; }
  int size() const { return static_cast<int>(terms_.size()); }
  OovPolicy oov_policy() const { return policy_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const Matrix& vectors() const { return vectors_; }
  bool contains(const std::string& term) const { return index_.contains(term); }

  std::span<const double> lookup(const std::string& term) const {
    auto it = index_.find(term);
    if (it != index_.end()) return vectors_.row(it->second);
    if (policy_ == OovPolicy::mean_vector) return mean_;
    zeros_.assign(static_cast<std::size_t>(dim()), 0.0);
    return zeros_;
  }

  EmbeddingTable with_policy(OovPolicy p) const { return EmbeddingTable(terms_, vectors_, p); }

  void save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MissingResource("cannot write embeddings: " + path.string(), path.string());
    out.precision(17);
    for (int r = 0; r < vectors_.rows; ++r) {
      out << terms_[r];
      for (int c = 0; c < vectors_.cols; ++c) out << ' ' << vectors_(r, c);
      out << '\n';
    }
  }

 private:
  std::vector<std::string> terms_;
  Matrix vectors_;
  OovPolicy policy_ = OovPolicy::zeros;
  std::unordered_map<std::string, int> index_;
  std::vector<double> mean_;
  mutable std::vector<double> zeros_;
};

// Text format "term v1 ... vd", one term per line. A leading word2vec
// "count dim" header line is skipped. Every line whose value count differs
// from expected_dim is reported with its line number.
inline EmbeddingTable load_embeddings(std::istream& in, int expected_dim, OovPolicy policy = OovPolicy::zeros,
                                      const std::string& source = "<stream>") {
  if (expected_dim <= 0) throw DataError("expected embedding dimension must be positive");
  std::vector<std::string> terms;
  std::vector<double> values;
  std::vector<std::string> problems;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_words(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2 && std::all_of(fields[0].begin(), fields[0].end(), ::isdigit) &&
        std::all_of(fields[1].begin(), fields[1].end(), ::isdigit))
      continue;
    const int got = static_cast<int>(fields.size()) - 1;
    if (got != expected_dim) {
      problems.push_back("line " + std::to_string(line_no) + ": expected " + std::to_string(expected_dim) +
                         " values, found " + std::to_string(got));
      continue;
    }
    std::vector<double> row;
    bool ok = true;
    for (int k = 1; k <= got && ok; ++k) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(fields[k], &used));
        ok = used == fields[k].size() && std::isfinite(row.back());
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok) {
      problems.push_back("line " + std::to_string(line_no) + ": unparseable value");
      continue;
    }
    if (!seen.insert(fields[0]).second) continue;
    terms.push_back(fields[0]);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (!problems.empty()) {
    std::string msg = "embedding file " + source + " has inconsistent rows:";
    for (std::size_t i = 0; i < problems.size() && i < 10; ++i) msg += "\n  " + problems[i];
    if (problems.size() > 10) msg += "\n  (" + std::to_string(problems.size() - 10) + " more)";
    throw DataError(msg);
  }
  if (terms.empty()) throw DataError("embedding file " + source + " has no parseable rows");
  Matrix m(static_cast<int>(terms.size()), expected_dim);
  m.data = std::move(values);
  return EmbeddingTable(std::move(terms), std::move(m), policy);
}

inline EmbeddingTable load_embeddings(const std::filesystem::path& path, int expected_dim,
                                      OovPolicy policy = OovPolicy::zeros) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingResource("cannot open embedding file: " + path.string(), path.string());
  return load_embeddings(in, expected_dim, policy, path.string());
}

// max_len x d matrix; row i is the vector of token i, rows past the tokens
// are zero and tokens past max_len are dropped.
inline Matrix embed_sequence(const std::vector<std::string>& tokens, const EmbeddingTable& table, int max_len) {
  Matrix m(max_len, table.dim());
  const int n = std::min<int>(static_cast<int>(tokens.size()), max_len);
  for (int i = 0; i < n; ++i) {
    auto v = table.lookup(tokens[static_cast<std::size_t>(i)]);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

// Deterministic pseudo-embeddings for a term list: each vector is seeded by
// a hash of the term, so the same term always gets the same vector.
// Components are N(0, 0.5^2), about the spread of published GloVe tables.
inline EmbeddingTable hashed_embeddings(const std::vector<std::string>& terms, int dim, std::uint64_t seed) {
  Matrix m(static_cast<int>(terms.size()), dim);
  const double scale = 0.5;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    Rng rng(splitmix64(seed ^ fnv1a(terms[i])));
    for (int c = 0; c < dim; ++c) m(static_cast<int>(i), c) = rng.normal() * scale;
  }
  return EmbeddingTable(terms, std::move(m));
}

// ---------------------------------------------------------------------------
// Contextual encoder adapter

struct EncoderOutput {
  // One row per attended position (mask sum rows) by hidden_dim.
  Matrix positions;
  std::vector<double> pooled;
};

class EncoderAdapter {
 public:
  virtual ~EncoderAdapter() = default;
  virtual std::string name() const = 0;
  virtual int hidden_dim() const = 0;
  virtual EncoderOutput encode(const EncodedSequence& seq) const = 0;
  // Whether the encoder's own weights can be updated during fine-tuning.
  virtual bool supports_finetune() const = 0;
  virtual bool concurrent_encode_safe() const = 0;
};

// Test and fallback encoder. Each piece id maps to a fixed hash-seeded
// random vector; a position's output mixes in its neighbours through tanh,
// and the pooled vector is the mean over attended positions. Stateless, so
// concurrent calls are fine.
class HashProjectionEncoder final : public EncoderAdapter {
 public:
  static constexpr std::string_view kName = "hash-projection";

  explicit HashProjectionEncoder(int hidden_dim = 64, std::uint64_t seed = 17) : dim_(hidden_dim), seed_(seed) {
    if (hidden_dim <= 0) throw DataError("encoder hidden_dim must be positive");
  }

  std::string name() const override { return std::string(kName); }
  int hidden_dim() const override { return dim_; }
  bool supports_finetune() const override { return false; }
  bool concurrent_encode_safe() const override { return true; }
  std::uint64_t seed() const { return seed_; }

  EncoderOutput encode(const EncodedSequence& seq) const override {
    std::vector<int> ids;
    for (std::size_t i = 0; i < seq.ids.size(); ++i)
      if (seq.attention_mask[i]) ids.push_back(seq.ids[i]);
    const int n = static_cast<int>(ids.size());
    std::vector<std::vector<double>> base;
    base.reserve(ids.size());
    for (int id : ids) base.push_back(piece_vector(id));
    EncoderOutput out{Matrix(n, dim_), std::vector<double>(static_cast<std::size_t>(dim_), 0.0)};
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < dim_; ++c) {
        double ctx = 0.0;
        if (i > 0) ctx += base[i - 1][c];
        if (i + 1 < n) ctx += base[i + 1][c];
        const double v = std::tanh(base[i][c] + 0.25 * ctx);
        out.positions(i, c) = v;
        out.pooled[c] += v;
      }
    }
    if (n > 0)
      for (auto& p : out.pooled) p /= n;
    return out;
  }

 private:
  std::vector<double> piece_vector(int id) const {
    Rng rng(splitmix64(seed_ * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(id)));
    std::vector<double> v(static_cast<std::size_t>(dim_));
    for (auto& x : v) x = rng.normal();
    return v;
  }

  int dim_;
  std::uint64_t seed_;
};

// Resolves an adapter by name. Only the hash-projection encoder ships; a
// pretrained transformer has to be provided by the caller.
inline std::shared_ptr<const EncoderAdapter> make_encoder_adapter(const std::string& name, int hidden_dim,
                                                                  std::uint64_t seed) {
  if (name == HashProjectionEncoder::kName) return std::make_shared<HashProjectionEncoder>(hidden_dim, seed);
  throw MissingResource("encoder adapter '" + name +
                        "' is not available in this build; use 'hash-projection' (head-only training with the "
                        "mock encoder) or supply an EncoderAdapter implementation");
}

}  // namespace deptype
