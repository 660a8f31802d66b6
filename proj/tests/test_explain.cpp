#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cases.hpp"
#include "deptype/explain.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace deptype;

namespace {

const std::vector<std::pair<DepressionClass, std::string>> kToy = {
    {DepressionClass::Bipolar, "i have bipolar disorder"},
    {DepressionClass::Bipolar, "bipolar mood swings again"},
    {DepressionClass::Major, "major depression every day"},
    {DepressionClass::Major, "i have major depressive disorder"},
    {DepressionClass::Psychotic, "psychotic depression voices"},
    {DepressionClass::Atypical, "hypersomnia and weight gain"},
    {DepressionClass::Postpartum, "maternal depression after birth"},
    {DepressionClass::NoDepression, "i have a sunny day"},
    {DepressionClass::NoDepression, "coffee with friends"},
};

const ModelArtifact& toy_nb() {
  static const ModelArtifact art = [] {
    std::vector<LabeledExample> xs;
    int i = 0;
    for (const auto& [cls, text] : kToy)
      xs.push_back(make_example("t" + std::to_string(i++), text, cls, Provenance::manual));
    return train_model(TrainConfig::defaults(ModelKind::nb), xs, {});
  }();
  return art;
}

// P(cls | tokens) for the toy model from the brute-force Bayes oracle.
double oracle_probability(const std::vector<std::string>& tokens, DepressionClass cls) {
  std::map<std::string, int> index;
  std::vector<std::vector<std::string>> docs;
  std::vector<int> labels;
  for (const auto& [c, text] : kToy) {
    docs.push_back(preprocess_tokens(text));
    labels.push_back(class_index(c));
    for (const auto& t : docs.back()) index.emplace(t, 0);
  }
  int k = 0;
  for (auto& [_, id] : index) id = k++;
  auto counts_of = [&](const std::vector<std::string>& toks) {
    std::vector<int> v(index.size(), 0);
    for (const auto& t : toks)
      if (auto it = index.find(t); it != index.end()) ++v[static_cast<std::size_t>(it->second)];
    return v;
  };
  std::vector<std::vector<int>> doc_counts;
  for (const auto& d : docs) doc_counts.push_back(counts_of(d));
  const auto post = oracle::nb_posterior(doc_counts, labels, kNumClasses, static_cast<int>(index.size()), 1.0,
                                         counts_of(tokens));
  return post[static_cast<std::size_t>(class_index(cls))];
}

Attribution manual(std::vector<std::string> tokens, std::vector<double> scores) {
  Attribution a;
  a.tokens = std::move(tokens);
  a.scores = std::move(scores);
  a.predicted.label = DepressionClass::Bipolar;
  a.predicted_probability = 0.9;
  return a;
}

}  // namespace

TEST(Occlusion, MatchesHandComputedNaiveBayes) {
  auto a = explain_occlusion(toy_nb(), "I have bipolar disorder");
  EXPECT_EQ(a.tokens, (std::vector<std::string>{"i", "bipolar", "disorder"}));
  EXPECT_EQ(a.predicted.label, DepressionClass::Bipolar);
  for (std::size_t i = 0; i < a.tokens.size(); ++i) {
    std::vector<std::string> rest;
    for (std::size_t k = 0; k < a.tokens.size(); ++k)
      if (k != i) rest.push_back(a.tokens[k]);
    const double want =
        oracle_probability(a.tokens, DepressionClass::Bipolar) - oracle_probability(rest, DepressionClass::Bipolar);
    EXPECT_NEAR(a.scores[i], want, 1e-9) << a.tokens[i];
  }
  const auto best = std::max_element(a.scores.begin(), a.scores.end()) - a.scores.begin();
  EXPECT_EQ(a.tokens[static_cast<std::size_t>(best)], "bipolar");
}

TEST(Occlusion, SingleTokenUsesEmptyBaseline) {
  const auto& art = toy_nb();
  auto a = explain_occlusion(art, "bipolar");
  ASSERT_EQ(a.scores.size(), 1u);
  EXPECT_DOUBLE_EQ(a.scores[0], art.probability({"bipolar"}, a.predicted.label) - art.probability({}, a.predicted.label));
}

TEST(Occlusion, IrrelevantTokenScoresZero) {
  auto a = explain_occlusion(toy_nb(), "bipolar zebra");
  ASSERT_EQ(a.tokens.size(), 2u);
  EXPECT_EQ(a.scores[1], 0.0);
}

TEST(Occlusion, EmptyTextRejected) { EXPECT_THROW(explain_occlusion(toy_nb(), "the of and"), DataError); }

TEST(Shapley, SingleTokenIsExactGap) {
  const auto& art = toy_nb();
  auto a = explain_shapley(art, "bipolar", 10, 1);
  ASSERT_EQ(a.scores.size(), 1u);
  EXPECT_NEAR(a.scores[0], art.probability({"bipolar"}, a.predicted.label) - art.probability({}, a.predicted.label),
              1e-12);
}

TEST(Shapley, CloseToExactEnumeration) {
  auto r = cases::compare_shapley(toy_nb(), "i have bipolar disorder with mood swings", 2000, 7);
  ASSERT_EQ(r.tokens.size(), 5u);
  EXPECT_LT(r.max_abs_diff, 0.02);
  EXPECT_LT(r.efficiency_gap, 1e-6);
}

TEST(Shapley, SameSeedSameScores) {
  auto a = explain_shapley(toy_nb(), "i have bipolar disorder with mood swings", 200, 3);
  auto b = explain_shapley(toy_nb(), "i have bipolar disorder with mood swings", 200, 3);
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_THROW(explain_shapley(toy_nb(), "bipolar", 0, 3), DataError);
}

TEST(Shapley, JsonCarriesSamplingSettings) {
  auto a = explain_shapley(toy_nb(), "bipolar disorder", 50, 9);
  auto j = to_json(a, toy_nb().label_order);
  EXPECT_EQ(j.at("method"), "shapley");
  EXPECT_EQ(j.at("samples"), 50);
  EXPECT_EQ(j.at("seed"), 9);
  EXPECT_EQ(j.at("predicted").at("probabilities").size(), 6u);
}

TEST(Highlights, PeakTokensAreGreen) {
  auto a = manual({"i", "bipolar", "disorder", "today"}, {0.01, 0.4, 0.3, -0.02});
  auto marks = classify_highlights(a);
  EXPECT_EQ(marks, (std::vector<Highlight>{Highlight::none, Highlight::positive, Highlight::positive, Highlight::none}));
}

TEST(Highlights, AllZeroMeansNoHighlights) {
  auto a = manual({"a", "b"}, {0.0, 0.0});
  for (auto m : classify_highlights(a)) EXPECT_EQ(m, Highlight::none);
}

TEST(Highlights, NegativeTokensAreRed) {
  auto a = manual({"x", "y"}, {0.5, -0.3});
  EXPECT_EQ(classify_highlights(a)[1], Highlight::negative);
}

TEST(Highlights, TextMarkers) {
  auto a = manual({"i", "bipolar", "calm"}, {0.0, 0.5, -0.4});
  const auto text = highlights_text(a);
  EXPECT_NE(text.find("i [+bipolar] [-calm]"), std::string::npos);
  EXPECT_NE(text.find("predicted: Bipolar"), std::string::npos);
}

TEST(Highlights, RenderWritesHtmlAndText) {
  testing_support::TempDir dir;
  auto a = manual({"<b>", "bipolar"}, {0.0, 0.5});
  render_highlights(a, dir / "report.html");
  const auto html = testing_support::slurp(dir / "report.html");
  EXPECT_NE(html.find("&lt;b&gt;"), std::string::npos);
  EXPECT_NE(html.find("class=\"tok pos\""), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir / "report.txt"));
}
