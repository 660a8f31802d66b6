#include <gtest/gtest.h>

#include <random>

#include "deptype/eval.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace deptype;

namespace {

EvalReport with_accuracy(const std::string& name, double acc) {
  EvalReport r;
  r.model_kind = name;
  r.dataset_id = "test";
  r.accuracy = acc;
  return r;
}

nn::TrainingHistory history(int epochs) {
  nn::TrainingHistory h;
  for (int e = 1; e <= epochs; ++e)
    h.push_back({e, 1.5 / e, 0.5 + 0.04 * e, 1.6 / e + 0.05, 0.45 + 0.04 * e});
  return h;
}

std::pair<std::uint32_t, std::uint32_t> png_size(const std::string& bytes) {
  auto be32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(bytes.at(at + i));
    return v;
  };
  return {be32(16), be32(20)};
}

}  // namespace

TEST(Metrics, BinaryHandExample) {
  // class 0 positive: TP=2, FN=1, FP=1, TN=6
  ConfusionMatrix cm;
  cm.counts[0][0] = 2;
  cm.counts[0][1] = 1;
  cm.counts[1][0] = 1;
  cm.counts[1][1] = 6;
  auto r = report_from_confusion(cm);
  EXPECT_DOUBLE_EQ(r.per_class[0].precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[0].recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.per_class[0].f1, 2.0 / 3.0);
  EXPECT_EQ(r.per_class[0].support, 3);
}

TEST(Metrics, PerfectPredictor) {
  ConfusionMatrix cm;
  for (int c = 0; c < kNumClasses; ++c) cm.counts[c][c] = 5;
  auto r = report_from_confusion(cm);
  EXPECT_EQ(r.accuracy, 1.0);
  for (const auto& m : r.per_class) EXPECT_EQ(m.f1, 1.0);
}

TEST(Metrics, ConstantPredictorOnBalancedData) {
  ConfusionMatrix cm;
  for (int c = 0; c < kNumClasses; ++c) cm.counts[c][2] = 10;
  auto r = report_from_confusion(cm);
  EXPECT_DOUBLE_EQ(r.accuracy, 1.0 / 6.0);
  EXPECT_TRUE(r.per_class[0].precision_undefined);
  EXPECT_FALSE(r.per_class[2].precision_undefined);
}

TEST(Metrics, MatchBruteForceOnRandomMatrices) {
  std::mt19937 gen(2024);
  for (int trial = 0; trial < 200; ++trial) {
    ConfusionMatrix cm;
    std::vector<std::pair<int, int>> pairs;
    for (int t = 0; t < kNumClasses; ++t)
      for (int p = 0; p < kNumClasses; ++p) {
        cm.counts[t][p] = static_cast<long>(gen() % (trial % 3 == 0 ? 3 : 20));
        for (long k = 0; k < cm.counts[t][p]; ++k) pairs.emplace_back(t, p);
      }
    if (pairs.empty()) continue;
    auto r = report_from_confusion(cm);
    auto o = oracle::rates(pairs, kNumClasses);
    for (int c = 0; c < kNumClasses; ++c) {
      EXPECT_EQ(r.per_class[c].precision, o.per_class[c].precision);
      EXPECT_EQ(r.per_class[c].recall, o.per_class[c].recall);
      EXPECT_EQ(r.per_class[c].f1, o.per_class[c].f1);
    }
    EXPECT_EQ(r.accuracy, o.accuracy);
    EXPECT_NEAR(r.macro.f1, o.macro_f1, 1e-15);
    EXPECT_NEAR(r.weighted.precision, o.weighted_p, 1e-15);
    EXPECT_NEAR(r.micro.precision, o.micro_p, 1e-15);
    EXPECT_NEAR(r.micro.recall, o.micro_r, 1e-15);
  }
}

TEST(Metrics, EmptyMatrixRejected) { EXPECT_THROW(report_from_confusion(ConfusionMatrix{}), DataError); }

TEST(Metrics, ReportJsonKeys) {
  ConfusionMatrix cm;
  cm.counts[0][0] = 1;
  auto j = report_from_confusion(cm, "nb", "test").to_json();
  std::vector<std::string> keys;
  for (const auto& [k, _] : j.at("per_class").items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"Bipolar", "Major", "Psychotic", "Atypical", "Postpartum",
                                            "NoDepression"}));
  EXPECT_EQ(j.at("model_kind"), "nb");
}

TEST(Comparison, SortedByAccuracy) {
  auto t = compare_models({with_accuracy("a", 0.93), with_accuracy("b", 0.96), with_accuracy("c", 0.94)});
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.rows[0].accuracy, 0.96);
  EXPECT_EQ(t.rows[1].accuracy, 0.94);
  EXPECT_EQ(t.rows[2].accuracy, 0.93);
}

TEST(Comparison, SingleRowAndHeader) {
  auto t = compare_models({with_accuracy("nb", 0.9)});
  EXPECT_EQ(t.rows.size(), 1u);
  EXPECT_NE(t.header_text().find("weighted"), std::string::npos);
  EXPECT_NE(t.to_text().find("weighted"), std::string::npos);
  EXPECT_EQ(t.to_csv().substr(0, t.to_csv().find('\n')),
            "model,dataset,accuracy,weighted_precision,weighted_recall,weighted_f1");
}

TEST(Plot, TicksOnePerEpoch) {
  EXPECT_EQ(detail::epoch_ticks(10), (std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}));
}

TEST(Plot, DeterministicPng) {
  testing_support::TempDir dir;
  plot_curves(history(10), dir / "a.png", "cnn");
  plot_curves(history(10), dir / "b.png", "cnn");
  const auto a = testing_support::slurp(dir / "a.png");
  EXPECT_EQ(a, testing_support::slurp(dir / "b.png"));
  ASSERT_GT(a.size(), 24u);
  EXPECT_EQ(a.substr(1, 3), "PNG");
  EXPECT_EQ(png_size(a), (std::pair<std::uint32_t, std::uint32_t>{kPlotWidth, kPlotHeight}));
}

TEST(Plot, SingleEpochAndMissingValidation) {
  testing_support::TempDir dir;
  auto h = history(1);
  h[0].val_loss = std::numeric_limits<double>::quiet_NaN();
  h[0].val_accuracy = std::numeric_limits<double>::quiet_NaN();
  EXPECT_NO_THROW(plot_curves(h, dir / "one.png"));
  EXPECT_TRUE(std::filesystem::exists(dir / "one.png"));
  EXPECT_THROW(plot_curves({}, dir / "none.png"), DataError);
}

TEST(Evaluate, RunsArtifactOverExamples) {
  auto xs = testing_support::synthetic(10, 4);
  auto art = train_model(TrainConfig::defaults(ModelKind::nb), xs, {});
  auto r = evaluate(art, xs, "train");
  EXPECT_EQ(r.confusion.total(), static_cast<long>(xs.size()));
  EXPECT_EQ(r.model_kind, "nb");
  EXPECT_EQ(r.dataset_id, "train");
  EXPECT_GT(r.accuracy, 0.9);
}
