#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "deptype/corpus.hpp"
#include "support.hpp"

using namespace deptype;

namespace {

std::vector<LabeledExample> labeled(const std::map<DepressionClass, int>& counts) {
  std::vector<LabeledExample> out;
  int serial = 0;
  for (const auto& [cls, n] : counts)
    for (int i = 0; i < n; ++i)
      out.push_back(make_example("e" + std::to_string(serial++), "text number " + std::to_string(i), cls,
                                 Provenance::manual));
  return out;
}

std::map<DepressionClass, int> class_counts(const std::vector<LabeledExample>& xs) {
  std::map<DepressionClass, int> m;
  for (const auto& x : xs) ++m[x.label];
  return m;
}

TweetRecord record(std::string id, std::string text, bool retweet = false) {
  TweetRecord r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.lang_hint = "en";
  r.is_retweet = retweet;
  return r;
}

}  // namespace

TEST(IngestCsv, RowsInFileOrder) {
  std::istringstream in("id,text\n1,first tweet here\n2,second one\n3,\"third, quoted\"\n");
  auto recs = ingest_csv(in);
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].id, "1");
  EXPECT_EQ(recs[1].text, "second one");
  EXPECT_EQ(recs[2].text, "third, quoted");
  EXPECT_FALSE(recs[0].is_retweet);
}

TEST(IngestCsv, EmptyTextIsFlagged) {
  std::istringstream in("id,text\n1,\n");
  auto recs = ingest_csv(in);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].text, "");
  EXPECT_TRUE(recs[0].needs_exclusion);
}

TEST(IngestCsv, MissingTextColumnIsNamed) {
  std::istringstream in("id,body\n1,hello\n");
  ColumnMap cols;
  try {
    ingest_csv(in, cols);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'text'"), std::string::npos);
  }
}

TEST(IngestCsv, CustomColumnsAndRetweetFlag) {
  std::istringstream in("tid,body,rt\na,hello world,true\nb,RT @x: hi,0\n");
  ColumnMap cols{.text_col = "body", .id_col = "tid", .lang_col = "lang", .retweet_col = "rt"};
  auto recs = ingest_csv(in, cols);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_TRUE(recs[0].is_retweet);
  EXPECT_FALSE(recs[1].is_retweet);
}

TEST(IngestCsv, MalformedRowReportsLine) {
  std::istringstream in("id,text\n1,ok\n2,too,many\n");
  EXPECT_THROW(ingest_csv(in), DataError);
}

TEST(IngestCsv, WriteRoundTrip) {
  std::istringstream in("id,text,lang\n1,\"hello, \"\"you\"\"\",en\n2,second,en\n");
  auto recs = ingest_csv(in);
  std::ostringstream out;
  write_csv(out, recs);
  std::istringstream again(out.str());
  EXPECT_EQ(ingest_csv(again), recs);
}

TEST(Exclusions, RetweetExcluded) {
  auto r = apply_exclusions({record("1", "i have been feeling low all week", true)});
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0].reason, ExclusionReason::retweet);
}

TEST(Exclusions, HashtagOnlyIsSpam) {
  auto r = apply_exclusions({record("1", "#depressed #sad")});
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0].reason, ExclusionReason::spam_hashtag_only);
}

TEST(Exclusions, SecondDuplicateExcluded) {
  auto r = apply_exclusions({record("1", "I have been so tired lately"), record("2", "i have been  so TIRED lately")});
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].id, "1");
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0].record.id, "2");
  EXPECT_EQ(r.excluded[0].reason, ExclusionReason::duplicate);
}

TEST(Exclusions, ShortAndEmptyTexts) {
  auto r = apply_exclusions({record("1", ""), record("2", "so sad")});
  ASSERT_EQ(r.excluded.size(), 2u);
  EXPECT_EQ(r.excluded[0].reason, ExclusionReason::empty);
  EXPECT_EQ(r.excluded[1].reason, ExclusionReason::incomplete);
}

TEST(Exclusions, LanguageHintAndDetector) {
  auto hinted = record("1", "estoy muy cansado de todo esto");
  hinted.lang_hint = "es";
  auto unhinted = record("2", "ich bin so unglaublich müde heute abend");
  unhinted.lang_hint.reset();
  auto english = record("3", "i have been feeling tired and sad all day");
  english.lang_hint.reset();
  auto r = apply_exclusions({hinted, unhinted, english});
  ASSERT_EQ(r.excluded.size(), 2u);
  EXPECT_EQ(r.excluded[0].reason, ExclusionReason::non_english);
  EXPECT_EQ(r.excluded[1].reason, ExclusionReason::non_english);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].id, "3");
}

TEST(Exclusions, EveryRecordAccountedForOnce) {
  std::vector<TweetRecord> recs;
  for (int i = 0; i < 10; ++i) recs.push_back(record(std::to_string(i), "tweet number " + std::string(i, 'x') + " about my day", i < 2));
  auto r = apply_exclusions(recs);
  EXPECT_EQ(r.kept.size() + r.excluded.size(), recs.size());
}

TEST(Split, SingleClassSizes) {
  auto xs = labeled({{DepressionClass::Major, 100}});
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    auto s = stratified_split(xs, {}, seed);
    EXPECT_EQ(s.train.size(), 70u);
    EXPECT_EQ(s.validation.size(), 15u);
    EXPECT_EQ(s.test.size(), 15u);
  }
}

TEST(Split, TenPerClassApportionment) {
  auto xs = labeled(testing_support::per_class(10));
  auto s = stratified_split(xs, {}, 5);
  EXPECT_EQ(s.train.size(), 42u);
  EXPECT_EQ(s.validation.size(), 9u);
  EXPECT_EQ(s.test.size(), 9u);
  auto tr = class_counts(s.train), va = class_counts(s.validation), te = class_counts(s.test);
  for (auto c : kAllClasses) {
    EXPECT_EQ(tr[c], 7);
    // 1.5 each by quota; the odd unit lands on one side
    EXPECT_TRUE((va[c] == 1 && te[c] == 2) || (va[c] == 2 && te[c] == 1)) << class_name(c);
  }
}

TEST(Split, Deterministic) {
  auto xs = labeled(testing_support::per_class(13));
  auto a = stratified_split(xs, {}, 11), b = stratified_split(xs, {}, 11);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.validation, b.validation);
  EXPECT_EQ(a.test, b.test);
}

TEST(Split, PartitionsAreDisjointAndComplete) {
  auto xs = labeled(testing_support::per_class(17));
  auto s = stratified_split(xs, {}, 3);
  std::set<std::string> ids;
  for (auto* part : s.parts())
    for (const auto& x : *part) EXPECT_TRUE(ids.insert(x.tweet_id).second);
  EXPECT_EQ(ids.size(), xs.size());
}

TEST(Split, DeviationAtMostOnePerClass) {
  std::mt19937 gen(1234);
  for (int trial = 0; trial < 50; ++trial) {
    std::map<DepressionClass, int> counts;
    for (auto c : kAllClasses) counts[c] = 3 + static_cast<int>(gen() % 60);
    auto s = stratified_split(labeled(counts), {}, gen());
    const std::array<double, 3> ratios = {0.7, 0.15, 0.15};
    const auto parts = s.parts();
    for (int p = 0; p < 3; ++p) {
      auto got = class_counts(*parts[p]);
      for (const auto& [c, n] : counts) EXPECT_LE(std::abs(got[c] - ratios[p] * n), 1.0);
    }
  }
}

TEST(Split, RejectsBadInput) {
  EXPECT_THROW(stratified_split(labeled({{DepressionClass::Major, 2}}), {}, 0), DataError);
  EXPECT_THROW(stratified_split(labeled({{DepressionClass::Major, 10}}), {0.5, 0.5, 0.5}, 0), DataError);
}

TEST(Synthetic, BipolarExamplesCarryAPhrase) {
  auto xs = generate_synthetic_corpus({{DepressionClass::Bipolar, 2}}, default_lexicons(), default_noise_vocab(), 0);
  ASSERT_EQ(xs.size(), 2u);
  for (const auto& x : xs) {
    EXPECT_EQ(x.label, DepressionClass::Bipolar);
    EXPECT_EQ(x.provenance, Provenance::synthetic);
    auto m = match_lexicons(x.clean_text, default_lexicons());
    ASSERT_FALSE(m.empty()) << x.clean_text;
    EXPECT_EQ(m[0].cls, DepressionClass::Bipolar);
  }
}

TEST(Synthetic, NoDepressionHasNoPhrase) {
  auto xs =
      generate_synthetic_corpus({{DepressionClass::NoDepression, 50}}, default_lexicons(), default_noise_vocab(), 3);
  for (const auto& x : xs) EXPECT_TRUE(match_lexicons(x.clean_text, default_lexicons()).empty()) << x.clean_text;
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(testing_support::synthetic(20, 9), testing_support::synthetic(20, 9));
  EXPECT_NE(testing_support::synthetic(20, 9), testing_support::synthetic(20, 10));
}

TEST(Synthetic, WeakLabelRecoversGeneratorLabels) {
  for (const auto& x : testing_support::synthetic(100, 21)) {
    auto r = weak_label(x.clean_text, default_lexicons());
    if (x.label == DepressionClass::NoDepression) {
      EXPECT_EQ(r.decision, WeakDecision::no_match) << x.clean_text;
    } else {
      EXPECT_EQ(r.decision, WeakDecision::labeled) << x.clean_text;
      EXPECT_EQ(r.label, x.label) << x.clean_text;
    }
  }
}

TEST(Jsonl, RoundTrip) {
  testing_support::TempDir dir;
  auto xs = testing_support::synthetic(3);
  write_jsonl(dir / "x.jsonl", xs);
  EXPECT_EQ(read_jsonl(dir / "x.jsonl"), xs);
}
