#include <gtest/gtest.h>

#include <random>

#include "deptype/textprep.hpp"
#include "support.hpp"

using namespace deptype;

TEST(Normalize, StripsUrlsHandlesHashMarksAndPunctuation) {
  EXPECT_EQ(normalize("Check https://t.co/x @someone #sad!!"), "check sad");
}

TEST(Normalize, DropsDigitsAndLowercases) { EXPECT_EQ(normalize("I AM 100% fine."), "i am fine"); }

TEST(Normalize, NormalizedTextIsUnchanged) {
  for (const char* s : {"check sad", "i am fine", "", "im so tired of everything"}) EXPECT_EQ(normalize(s), s);
}

TEST(Normalize, ApostrophesJoinContractions) {
  EXPECT_EQ(normalize("I'm fine"), "im fine");
  EXPECT_EQ(normalize("I\xE2\x80\x99ve been"), "ive been");
}

TEST(Normalize, FlagsCanBeDisabled) {
  NormalizationConfig cfg;
  cfg.lowercase = false;
  cfg.strip_urls = false;
  EXPECT_EQ(normalize("Hello http://x.io", cfg), "Hello http x io");
}

TEST(Normalize, IdempotentOnRandomStrings) {
  std::mt19937 gen(7);
  const std::string alphabet = "aZ9 #@_.:/'!\t\nhttps\xC3\xA9\xE2\x80\x99";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const int len = static_cast<int>(gen() % 40);
    for (int k = 0; k < len; ++k) s.push_back(alphabet[gen() % alphabet.size()]);
    const auto once = normalize(s);
    EXPECT_EQ(normalize(once), once) << "input: " << s;
  }
}

TEST(Stopwords, RemovesFunctionWords) {
  EXPECT_EQ(remove_stopwords({"the", "sky", "is", "blue"}), (std::vector<std::string>{"sky", "blue"}));
}

TEST(Stopwords, KeepsFirstPersonAndNegation) {
  EXPECT_EQ(remove_stopwords({"i", "am", "not", "happy"}), (std::vector<std::string>{"i", "not", "happy"}));
}

TEST(Stopwords, EmptyInput) { EXPECT_TRUE(remove_stopwords({}).empty()); }

TEST(Stopwords, DefaultListSize) { EXPECT_EQ(default_stoplist().size(), 120u); }

TEST(Stopwords, FileRoundTrip) {
  testing_support::TempDir dir;
  save_stoplist(default_stoplist(), dir / "stop.txt");
  EXPECT_EQ(load_stoplist(dir / "stop.txt"), default_stoplist());
  EXPECT_THROW(load_stoplist(dir / "absent.txt"), MissingResource);
}

TEST(Subword, MostFrequentPairMergedFirst) {
  const std::vector<std::string> corpus = {"aaab", "aab"};
  // 4 specials + a, b, ##a, ##b
  const int alphabet = 8;
  EXPECT_THROW(train_subword_vocab_with_merges(corpus, alphabet - 1), DataError);
  auto r = train_subword_vocab_with_merges(corpus, alphabet + 2);
  ASSERT_FALSE(r.merges.empty());
  EXPECT_EQ(r.merges.front(), (std::pair<std::string, std::string>{"a", "##a"}));
  EXPECT_TRUE(r.vocab.find("aa").has_value());
}

TEST(Subword, EveryCharacterIsAPiece) {
  const std::vector<std::string> corpus = {"hello", "world", "caf\xC3\xA9"};
  auto v = train_subword_vocab(corpus, 30);
  for (const auto& w : corpus) {
    auto units = detail::utf8_units(w);
    for (std::size_t i = 0; i < units.size(); ++i) {
      EXPECT_TRUE(v.find(units[i]).has_value()) << units[i];
      EXPECT_TRUE(v.find("##" + units[i]).has_value()) << units[i];
    }
  }
}

TEST(Subword, TrainingIsDeterministic) {
  const std::vector<std::string> corpus = {"depression", "depressed", "pressing", "bipolar"};
  EXPECT_EQ(train_subword_vocab(corpus, 40), train_subword_vocab(corpus, 40));
}

TEST(Subword, EmptyTokensGiveFramingOnly) {
  SubwordVocab v({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "a", "##a"}, "##", SpecialIds{}, 6);
  auto seq = v.encode({});
  EXPECT_EQ(seq.ids, (std::vector<int>{2, 3, 0, 0, 0, 0}));
  EXPECT_EQ(seq.attention_mask, (std::vector<int>{1, 1, 0, 0, 0, 0}));
}

TEST(Subword, WholeWordIsOneId) {
  SubwordVocab v({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "bipolar", "b", "##i"}, "##", SpecialIds{}, 8);
  EXPECT_EQ(v.decompose("bipolar"), (std::vector<int>{4}));
}

TEST(Subword, GreedyDecompositionAndReconstruction) {
  SubwordVocab v({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "bipolar", "##ish", "bi", "##i"}, "##", SpecialIds{}, 8);
  const auto ids = v.decompose("bipolarish");
  EXPECT_EQ(ids, (std::vector<int>{4, 5}));
  EXPECT_EQ(v.reconstruct(ids), "bipolarish");
}

TEST(Subword, UnknownCodePointBecomesUnk) {
  SubwordVocab v({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "a", "##a"}, "##", SpecialIds{}, 8);
  EXPECT_EQ(v.decompose("a\xC3\xA9" "a"), (std::vector<int>{4, 1, 5}));
}

TEST(Subword, LongInputIsTruncatedAtTokenBoundary) {
  SubwordVocab v({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "ab", "c", "##c"}, "##", SpecialIds{}, 5);
  auto seq = v.encode({"ab", "cc", "ab"});
  // room for 3 content pieces: "ab" then "c ##c" would make 3, "ab" again would not fit
  EXPECT_EQ(seq.ids, (std::vector<int>{2, 4, 5, 6, 3}));
  EXPECT_EQ(seq.piece_token, (std::vector<int>{-1, 0, 1, 1, -1}));
  EXPECT_EQ(seq.length(), 5u);
}

TEST(Subword, RoundTripOnTrainingWords) {
  const std::vector<std::string> corpus = {"i", "have", "bipolar", "disorder", "postpartum", "depression", "tired"};
  auto v = train_subword_vocab(corpus, 60);
  for (const auto& w : corpus) EXPECT_EQ(v.reconstruct(v.decompose(w)), w);
}

TEST(Subword, SaveLoad) {
  testing_support::TempDir dir;
  auto v = train_subword_vocab({"alpha", "beta", "gamma"}, 30, 16);
  v.save(dir / "vocab.txt");
  EXPECT_EQ(SubwordVocab::load(dir / "vocab.txt"), v);
}

TEST(Subword, InvalidVocabRejected) {
  EXPECT_THROW(SubwordVocab({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "a", "a"}, "##", SpecialIds{}, 8), DataError);
  EXPECT_THROW(SubwordVocab({"[PAD]", "[UNK]", "[CLS]"}, "##", SpecialIds{}, 8), DataError);
  EXPECT_THROW(train_subword_vocab({}, 10), DataError);
}
