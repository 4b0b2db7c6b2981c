#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "conjparse/conj_features.hpp"
#include "conjparse/error.hpp"
#include "conjparse/utf8.hpp"
#include "test_util.hpp"

using namespace conjparse;

namespace {

FeatureResources bundled() {
  FeatureResources r;
  r.lemmas = LemmaLexicon::load_file(testutil::data("sample_lemmas.tsv"));
  r.sentiment = SentimentLexicon::load_files(testutil::data("sentiment_positive.txt"),
                                             testutil::data("sentiment_negative.txt"));
  r.embeddings = EmbeddingTable::load_file(testutil::data("sample_embeddings.txt"));
  return r;
}

std::string random_word(Rng& rng) {
  static const std::vector<std::string> pieces = {"a", "b", "c", "é", "ö", "Ä", "Z", "-", "x", "ß"};
  std::string w;
  const auto n = 1 + rng.below(6);
  for (std::uint64_t i = 0; i < n; ++i) w += pieces[rng.below(pieces.size())];
  return w;
}

}  // namespace

TEST(Utf8, DecodeEncodeAndCase) {
  EXPECT_EQ(utf8::length("Ärger"), 5u);
  EXPECT_EQ(utf8::encode(utf8::decode("naïve ☃")), "naïve ☃");
  EXPECT_TRUE(utf8::is_upper(U'Ä'));
  EXPECT_FALSE(utf8::is_upper(U'ä'));
  EXPECT_FALSE(utf8::is_upper(U'1'));
  EXPECT_EQ(utf8::to_lower("ÄRGER Corp."), "ärger corp.");
  EXPECT_EQ(utf8::decode("\xff" "a"), (std::u32string{0xFFFD, U'a'}));
  EXPECT_EQ(utf8::decode("\xc3"), (std::u32string{0xFFFD}));
}

// Example pairs for each feature family.
TEST(CapFeature, Examples) {
  EXPECT_TRUE(cap_feature("Corp.", "Inc."));
  EXPECT_TRUE(cap_feature("Poland", "Hungary"));
  EXPECT_FALSE(cap_feature("Poland", "hungary"));
  EXPECT_FALSE(cap_feature("men", "women"));
  EXPECT_TRUE(cap_feature("Échec", "Ödland"));
  EXPECT_THROW(cap_feature("", "x"), std::invalid_argument);
}

TEST(SuffixFeature, Examples) {
  EXPECT_EQ(suffix_feature("men", "women"), 3u);
  EXPECT_EQ(suffix_feature("three-month", "six-month"), 6u);
  EXPECT_EQ(suffix_feature("Corp.", "Inc."), 1u);
  EXPECT_EQ(suffix_feature("codification", "clarification"), 9u);
  EXPECT_EQ(suffix_feature("cat", "dog"), 0u);
  EXPECT_EQ(suffix_feature("same", "same"), 4u);
  EXPECT_EQ(suffix_feature("größe", "blöße"), 3u);  // code points, not bytes
  EXPECT_THROW(suffix_feature("x", ""), std::invalid_argument);
}

TEST(LemmaFeature, Examples) {
  const auto r = bundled();
  EXPECT_TRUE(lemma_feature("say", "VB", "said", "VBD", r.lemmas));
  EXPECT_TRUE(lemma_feature("handled", "VBD", "handles", "VBZ", r.lemmas));
  EXPECT_FALSE(lemma_feature("say", "VB", "handles", "VBZ", r.lemmas));
  // identity fallback for words the lexicon does not know
  EXPECT_TRUE(lemma_feature("Zorp", "NN", "zorp", "NN", r.lemmas));
  // lemma entries are class specific: "said" as a noun is not in the lexicon
  EXPECT_FALSE(lemma_feature("say", "NN", "said", "NN", r.lemmas));
}

TEST(SentimentFeature, Examples) {
  const auto r = bundled();
  EXPECT_EQ(sentiment_feature("up", r.sentiment), 1);
  EXPECT_EQ(sentiment_feature("down", r.sentiment), -1);
  EXPECT_EQ(sentiment_feature("Confirmed", r.sentiment), 1);
  EXPECT_EQ(sentiment_feature("declined", r.sentiment), -1);
  EXPECT_EQ(sentiment_feature("table", r.sentiment), 0);
  EXPECT_EQ(sentiment_feature("up", SentimentLexicon{}), 0);
}

TEST(SentimentLexicon, OverlapRejected) {
  std::istringstream pos("good\n# comment\nfine\n"), neg("bad\nFINE\n");
  EXPECT_THROW(SentimentLexicon::load(pos, neg), ResourceError);
  EXPECT_THROW(SentimentLexicon::load_files("/nonexistent/p", "/nonexistent/n"), ResourceError);
}

TEST(LemmaLexicon, BadRows) {
  std::istringstream two("said\tv\n");
  EXPECT_THROW(LemmaLexicon::load(two), ParseError);
  std::istringstream cls("said\tq\tsay\n");
  EXPECT_THROW(LemmaLexicon::load(cls), ParseError);
  std::istringstream ok("# header\nSaid\tverb\tSay\n");
  const auto lex = LemmaLexicon::load(ok);
  EXPECT_EQ(lex.lookup("said", "VBD"), "say");
  EXPECT_EQ(lex.lookup("Walks", "VBZ"), "walks");
}

TEST(PosClass, Mapping) {
  EXPECT_EQ(pos_class("NNS"), PosClass::noun);
  EXPECT_EQ(pos_class("PROPN"), PosClass::noun);
  EXPECT_EQ(pos_class("VBD"), PosClass::verb);
  EXPECT_EQ(pos_class("JJR"), PosClass::adj);
  EXPECT_EQ(pos_class("ADJ"), PosClass::adj);
  EXPECT_EQ(pos_class("RB"), PosClass::adv);
  EXPECT_EQ(pos_class("ADV"), PosClass::adv);
  EXPECT_EQ(pos_class("IN"), PosClass::other);
  EXPECT_EQ(pos_class(""), PosClass::other);
}

TEST(Cosine, Examples) {
  const std::vector<double> a{1, 1}, b{1, 0}, z{0, 0}, neg{-2, -2};
  EXPECT_DOUBLE_EQ(cosine_similarity(a, b), 0.7071067811865475);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(a, neg), -1.0);
  EXPECT_EQ(cosine_similarity(a, z), 0.0);
  EXPECT_THROW(cosine_similarity(a, std::vector<double>{1}), DimensionError);
}

TEST(EmbeddingTable, LoadAndLookup) {
  std::istringstream in("3 2\nParis 1 0\nparis 0 1\nberlin 0.5 0.5\n");
  const auto t = EmbeddingTable::load(in);
  EXPECT_EQ(t.dim(), 2u);
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ((*t.lookup("Paris"))[0], 1.0);
  EXPECT_EQ((*t.lookup("PARIS"))[1], 1.0);  // lowercase fallback
  EXPECT_EQ((*t.lookup("Berlin"))[0], 0.5);
  EXPECT_FALSE(t.lookup("rome"));
  EXPECT_DOUBLE_EQ(sym_feature("berlin", "Paris", t), 0.7071067811865475);
  EXPECT_EQ(sym_feature("berlin", "rome", t), 0.0);
}

TEST(EmbeddingTable, Errors) {
  std::istringstream ragged("a 1 2\nb 1\n");
  EXPECT_THROW(EmbeddingTable::load(ragged), ParseError);
  std::istringstream header("2 3\na 1 2\n");
  EXPECT_THROW(EmbeddingTable::load(header), ParseError);
  std::istringstream bad("a 1 x\n");
  EXPECT_THROW(EmbeddingTable::load(bad), ParseError);
  EmbeddingTable t(2);
  EXPECT_THROW(t.add("a", std::vector<double>{1, 2, 3}), DimensionError);
  t.add("a", std::vector<double>{1, 2});
  t.add("a", std::vector<double>{3, 4});
  EXPECT_EQ((*t.lookup("a"))[0], 1.0);  // first entry wins
}

TEST(EmbeddingTable, BundledFile) {
  const auto r = bundled();
  EXPECT_EQ(r.embeddings.dim(), 16u);
  EXPECT_EQ(r.embeddings.size(), 161u);
}

TEST(Extract, FullVector) {
  const auto r = bundled();
  testutil::Row h{"Corp.", "NNP", 0, "root"}, m{"Inc.", "NNP", 1, "conj"};
  const auto s = testutil::make_sentence({h, m});
  const auto f = extract(s.token(1), s.token(2), r);
  EXPECT_TRUE(f.cap);
  EXPECT_EQ(f.suf, 1u);
  EXPECT_FALSE(f.lem);
  EXPECT_EQ(f.sent_h, 0);
  EXPECT_EQ(f.sent_m, 0);

  const auto ud = testutil::make_sentence({{"up", "RB", 0, "root"}, {"down", "RB", 1, "conj"}});
  const auto g = extract(ud.token(1), ud.token(2), r);
  EXPECT_EQ(g.sent_h, 1);
  EXPECT_EQ(g.sent_m, -1);
  EXPECT_EQ(g.suf, 0u);
}

TEST(ScorerEncoding, SuffixCappedAndScaled) {
  ConjFeatureVector f;
  f.cap = true;
  f.suf = 3;
  f.sym = 0.5;
  f.sent_h = 1;
  f.sent_m = -1;
  const auto e = scorer_encoding(f);
  EXPECT_EQ(e[0], 1.0);
  EXPECT_DOUBLE_EQ(e[1], 3.0 / 7.0);
  EXPECT_EQ(e[2], 0.0);
  EXPECT_EQ(e[3], 0.5);
  EXPECT_EQ(e[4], 1.0);
  EXPECT_EQ(e[5], -1.0);
  f.suf = 40;
  EXPECT_EQ(scorer_encoding(f)[1], 1.0);
}

TEST(FeatureProperties, SymmetryBoundsAndScaling) {
  Rng rng(3);
  const auto r = bundled();
  const auto& emb = r.embeddings;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_word(rng);
    const auto b = random_word(rng);
    ASSERT_EQ(cap_feature(a, b), cap_feature(b, a));
    ASSERT_EQ(suffix_feature(a, b), suffix_feature(b, a));
    ASSERT_LE(suffix_feature(a, b), std::min(utf8::length(a), utf8::length(b)));
    ASSERT_EQ(suffix_feature(a, a), utf8::length(a));
    ASSERT_EQ(suffix_feature(a + b, b), utf8::length(b));
    ASSERT_EQ(suffix_feature("q" + a, "r" + a), utf8::length(a));

    const auto w1 = emb.word(rng.below(emb.size()));
    const auto w2 = emb.word(rng.below(emb.size()));
    const double s = sym_feature(w1, w2, r.embeddings);
    ASSERT_DOUBLE_EQ(s, sym_feature(w2, w1, r.embeddings));
    ASSERT_GE(s, -1.0);
    ASSERT_LE(s, 1.0);
    std::vector<double> v1(r.embeddings.lookup(w1)->begin(), r.embeddings.lookup(w1)->end());
    const auto v2 = *r.embeddings.lookup(w2);
    std::vector<double> scaled = v1;
    for (auto& x : scaled) x *= 3.5;
    ASSERT_NEAR(cosine_similarity(scaled, v2), cosine_similarity(v1, v2), 1e-12);

    ASSERT_EQ(sentiment_feature(a + "#oov", r.sentiment), 0);
  }
}
