#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "deptype/error.hpp"
#include "deptype/models/artifact.hpp"
#include "deptype/rng.hpp"

namespace deptype {

enum class AttributionMethod { occlusion, shapley };

inline std::string_view attribution_method_name(AttributionMethod m) {
  return m == AttributionMethod::occlusion ? "occlusion" : "shapley";
}

inline AttributionMethod parse_attribution_method(std::string_view s) {
  if (s == "occlusion") return AttributionMethod::occlusion;
  if (s == "shapley") return AttributionMethod::shapley;
  throw DataError("unknown attribution method '" + std::string(s) + "' (expected occlusion or shapley)");
}

struct Attribution {
  std::vector<std::string> tokens;
  // Positive: the token supports the predicted class.
  std::vector<double> scores;
  Prediction predicted;
  double predicted_probability = 0.0;
  AttributionMethod method = AttributionMethod::occlusion;
  int samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// v(S): probability of `cls` given only the tokens whose bit is set in
// `mask`, in their original order.
class CoalitionValue {
 public:
  CoalitionValue(const ModelArtifact& artifact, const std::vector<std::string>& tokens, DepressionClass cls)
      : artifact_(artifact), tokens_(tokens), cls_(cls) {}

  double operator()(const std::vector<bool>& present) {
    const bool cacheable = tokens_.size() <= 20;
    std::uint32_t key = 0;
    if (cacheable) {
      for (std::size_t i = 0; i < present.size(); ++i)
        if (present[i]) key |= 1u << i;
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < tokens_.size(); ++i)
      if (present[i]) kept.push_back(tokens_[i]);
    const double v = artifact_.probability(kept, cls_);
    if (cacheable) cache_.emplace(key, v);
    return v;
  }

 private:
  const ModelArtifact& artifact_;
  const std::vector<std::string>& tokens_;
  DepressionClass cls_;
  std::unordered_map<std::uint32_t, double> cache_;
};

inline std::vector<std::string> explained_tokens(const ModelArtifact& artifact, std::string_view text) {
  auto tokens = artifact.tokenize(text);
  if (tokens.empty()) throw DataError("text is empty after preprocessing; nothing to explain");
  return tokens;
}

}  // namespace detail

// score(i) = P(pred | tokens) - P(pred | tokens without i).
inline Attribution explain_occlusion(const ModelArtifact& artifact, std::string_view text) {
  Attribution a;
  a.method = AttributionMethod::occlusion;
  a.tokens = detail::explained_tokens(artifact, text);
  a.predicted = artifact.predict_tokens(a.tokens);
  const DepressionClass cls = a.predicted.label;
  a.predicted_probability = artifact.probability(a.tokens, cls);
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < a.tokens.size(); ++k)
      if (k != i) rest.push_back(a.tokens[k]);
    a.scores.push_back(a.predicted_probability - artifact.probability(rest, cls));
  }
  return a;
}

// Permutation-sampling Shapley values with token deletion as absence.
// Permutations come in antithetic pairs (a random order, then its reverse).
// The estimates are shifted by a common offset so that they sum exactly to
// P(pred | full) - P(pred | empty).
inline Attribution explain_shapley(const ModelArtifact& artifact, std::string_view text, int samples,
                                   std::uint64_t seed) {
  if (samples < 1) throw DataError("shapley needs samples >= 1");
  Attribution a;
  a.method = AttributionMethod::shapley;
  a.samples = samples;
  a.seed = seed;
  a.tokens = detail::explained_tokens(artifact, text);
  a.predicted = artifact.predict_tokens(a.tokens);
  const DepressionClass cls = a.predicted.label;
  const std::size_t n = a.tokens.size();
  detail::CoalitionValue value(artifact, a.tokens, cls);

  std::vector<bool> present(n, true);
  const double v_full = value(present);
  std::fill(present.begin(), present.end(), false);
  const double v_empty = value(present);
  a.predicted_probability = v_full;

  std::vector<double> sums(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(splitmix64(seed));
  for (int s = 0; s < samples; ++s) {
    if (s % 2 == 0) rng.shuffle(std::span<std::size_t>(order));
    else std::reverse(order.begin(), order.end());
    std::fill(present.begin(), present.end(), false);
    double prev = v_empty;
    for (std::size_t i : order) {
      present[i] = true;
      const double cur = value(present);
      sums[i] += cur - prev;
      prev = cur;
    }
  }
  double total = 0.0;
  for (auto& x : sums) {
    x /= samples;
    total += x;
  }
  const double shift = ((v_full - v_empty) - total) / static_cast<double>(n);
  for (auto& x : sums) x += shift;
  a.scores = std::move(sums);
  return a;
}

inline nlohmann::ordered_json to_json(const Attribution& a, const std::vector<DepressionClass>& label_order) {
  nlohmann::ordered_json probs = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < label_order.size(); ++i)
    probs[std::string(class_name(label_order[i]))] = a.predicted.probabilities[i];
  nlohmann::ordered_json j = {{"method", attribution_method_name(a.method)},
                              {"tokens", a.tokens},
                              {"scores", a.scores},
                              {"predicted",
                               {{"label", class_name(a.predicted.label)},
                                {"probability", a.predicted_probability},
                                {"probabilities", std::move(probs)}}}};
  if (a.method == AttributionMethod::shapley) {
    j["samples"] = a.samples;
    j["seed"] = a.seed;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Highlight reports

// Tokens scoring above threshold_fraction * (largest positive score) are
// highlighted green; those below the negated threshold red. With no positive
// score, the largest absolute score sets the scale.
struct HighlightOptions {
  double threshold_fraction = 0.2;
};

enum class Highlight { none, positive, negative };

inline std::vector<Highlight> classify_highlights(const Attribution& a, const HighlightOptions& opt = {}) {
  double max_pos = 0.0, max_abs = 0.0;
  for (double s : a.scores) {
    max_pos = std::max(max_pos, s);
    max_abs = std::max(max_abs, std::abs(s));
  }
  const double threshold = opt.threshold_fraction * (max_pos > 0.0 ? max_pos : max_abs);
  std::vector<Highlight> out;
  out.reserve(a.scores.size());
  for (double s : a.scores) {
    if (s > threshold && s > 0.0) out.push_back(Highlight::positive);
    else if (s < -threshold && s < 0.0) out.push_back(Highlight::negative);
    else out.push_back(Highlight::none);
  }
  return out;
}

namespace detail {

inline std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string fixed(double v, int digits) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(digits) << v;
  return o.str();
}

}  // namespace detail

inline std::string highlights_text(const Attribution& a, const HighlightOptions& opt = {}) {
  const auto marks = classify_highlights(a, opt);
  std::string line;
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    if (i) line.push_back(' ');
    if (marks[i] == Highlight::positive) line += "[+" + a.tokens[i] + "]";
    else if (marks[i] == Highlight::negative) line += "[-" + a.tokens[i] + "]";
    else line += a.tokens[i];
  }
  return "predicted: " + std::string(class_name(a.predicted.label)) +
         " (p=" + detail::fixed(a.predicted_probability, 4) + ")\nmethod: " +
         std::string(attribution_method_name(a.method)) + "\n" + line + "\n";
}

inline std::string highlights_html(const Attribution& a, const HighlightOptions& opt = {}) {
  const auto marks = classify_highlights(a, opt);
  std::ostringstream h;
  h << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>Token attribution</title>\n"
    << "<style>\nbody { font-family: sans-serif; margin: 2em; }\n"
    << ".tok { padding: 2px 4px; margin: 0 1px; border-radius: 3px; }\n"
    << ".pos { background: #8fdc8f; }\n.neg { background: #f29a9a; }\n"
    << "table { border-collapse: collapse; margin-top: 1.5em; }\n"
    << "td, th { border: 1px solid #ccc; padding: 2px 8px; text-align: left; }\n</style>\n</head>\n<body>\n";
  h << "<p>Predicted class: <b>" << class_name(a.predicted.label) << "</b> (probability "
    << detail::fixed(a.predicted_probability, 4) << ")</p>\n";
  h << "<p>Method: " << attribution_method_name(a.method);
  if (a.method == AttributionMethod::shapley) h << ", " << a.samples << " samples, seed " << a.seed;
  h << ". Highlight threshold: " << detail::fixed(100.0 * opt.threshold_fraction, 0)
    << "% of the largest positive score.</p>\n<p class=\"text\">";
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    const char* cls = marks[i] == Highlight::positive ? "tok pos" : marks[i] == Highlight::negative ? "tok neg" : "tok";
    h << "<span class=\"" << cls << "\" title=\"" << detail::fixed(a.scores[i], 6) << "\">"
      << detail::html_escape(a.tokens[i]) << "</span>";
    if (i + 1 < a.tokens.size()) h << ' ';
  }
  h << "</p>\n<table>\n<tr><th>token</th><th>score</th></tr>\n";
  for (std::size_t i = 0; i < a.tokens.size(); ++i)
    h << "<tr><td>" << detail::html_escape(a.tokens[i]) << "</td><td>" << detail::fixed(a.scores[i], 6)
      << "</td></tr>\n";
  h << "</table>\n</body>\n</html>\n";
  return h.str();
}

// Writes `out` (HTML) and the same path with a .txt extension (bracket markup).
inline void render_highlights(const Attribution& a, const std::filesystem::path& out,
                              const HighlightOptions& opt = {}) {
  auto write = [](const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f || !(f << body) || !f.flush()) throw MissingResource("cannot write report " + p.string(), p.string());
  };
  write(out, highlights_html(a, opt));
  auto txt = out;
  txt.replace_extension(".txt");
  write(txt, highlights_text(a, opt));
}

}  // namespace deptype
