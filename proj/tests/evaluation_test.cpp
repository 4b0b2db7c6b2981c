#include <gtest/gtest.h>

#include <sstream>

#include "conjparse/error.hpp"
#include "conjparse/evaluation.hpp"
#include "test_util.hpp"

using namespace conjparse;

namespace {

const std::vector<std::string> kLabels = {"conj", "nsubj", "dobj", "punct"};

struct Pair {
  std::vector<Sentence> gold, pred;
};

// gold trees plus a prediction with arbitrary heads in range
Pair random_pair(Rng& rng, std::size_t sentences) {
  Pair p;
  for (std::size_t k = 0; k < sentences; ++k) {
    const int n = 1 + static_cast<int>(rng.below(10));
    auto g = testutil::sentence_from_heads(testutil::random_tree(rng, n), {"x"});
    for (auto& t : g.tokens) {
      if (t.gold_head != 0) t.gold_label = kLabels[rng.below(kLabels.size())];
      if (rng.below(8) == 0) t.pos = ",";
    }
    auto pr = g;
    for (auto& t : pr.tokens) {
      t.pred_head = rng.below(3) == 0 ? static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1))
                                      : t.gold_head;
      t.pred_label = rng.below(3) == 0 ? kLabels[rng.below(kLabels.size())] : t.gold_label;
    }
    p.gold.push_back(std::move(g));
    p.pred.push_back(std::move(pr));
  }
  return p;
}

struct Counts {
  std::size_t n = 0, head = 0, both = 0;
  std::size_t rel_tp = 0, att_tp = 0, pred = 0, gold = 0;
};

// Straight recount used as the oracle.
Counts recount(const Pair& p, const std::string& label) {
  Counts c;
  for (std::size_t s = 0; s < p.gold.size(); ++s) {
    for (std::size_t i = 0; i < p.gold[s].size(); ++i) {
      const auto& g = p.gold[s].tokens[i];
      const auto& q = p.pred[s].tokens[i];
      if (g.gold_label == "punct" || g.pos == ",") continue;
      ++c.n;
      const bool h = *q.pred_head == g.gold_head;
      const bool l = *q.pred_label == g.gold_label;
      c.head += h;
      c.both += h && l;
      const bool gl = g.gold_label == label, pl = *q.pred_label == label;
      c.gold += gl;
      c.pred += pl;
      c.rel_tp += gl && pl;
      c.att_tp += gl && pl && h;
    }
  }
  return c;
}

double pct(std::size_t a, std::size_t b) { return b == 0 ? 0.0 : 100.0 * static_cast<double>(a) / static_cast<double>(b); }

}  // namespace

TEST(Punctuation, LabelOrTag) {
  Token t;
  t.pos = "NN";
  t.gold_label = "punct";
  EXPECT_TRUE(is_punctuation(t));
  t.gold_label = "dep";
  EXPECT_FALSE(is_punctuation(t));
  for (const char* tag : {"``", "''", ":", ",", "."}) {
    t.pos = tag;
    EXPECT_TRUE(is_punctuation(t)) << tag;
  }
  t.pos = "-LRB-";
  EXPECT_FALSE(is_punctuation(t));
}

TEST(Prf, Arithmetic) {
  const auto p = make_prf(3, 4, 6);
  EXPECT_DOUBLE_EQ(p.precision, 75.0);
  EXPECT_DOUBLE_EQ(p.recall, 50.0);
  EXPECT_DOUBLE_EQ(p.f1, 60.0);
  const auto z = make_prf(0, 5, 5);
  EXPECT_EQ(z.f1, 0.0);
  const auto e = make_prf(0, 0, 0);
  EXPECT_EQ(e.precision, 0.0);
  EXPECT_EQ(e.f1, 0.0);
}

TEST(Metrics, HandExample) {
  // gold: He(2,nsubj) eats(0,root) apples(2,dobj) and(5,cc) pears(3,conj) .(2,punct)
  auto gold = testutil::make_sentence({{"He", "PRP", 2, "nsubj"},
                                       {"eats", "VBZ", 0, "root"},
                                       {"apples", "NNS", 2, "dobj"},
                                       {"and", "CC", 5, "cc"},
                                       {"pears", "NNS", 3, "conj"},
                                       {".", ".", 2, "punct"}});
  auto pred = gold;
  pred.tokens[4].gold_head = 2;  // conj attached to the verb
  pred.tokens[2].gold_label = "conj";  // right head, wrong label
  pred.tokens[5].gold_head = 1;  // punctuation is ignored
  const std::vector<Sentence> g{gold}, p{pred};
  const auto a = attachment_scores(g, p);
  EXPECT_EQ(a.counted, 5u);
  EXPECT_EQ(a.head_correct, 4u);
  EXPECT_EQ(a.both_correct, 3u);
  EXPECT_DOUBLE_EQ(a.uas, 80.0);
  EXPECT_DOUBLE_EQ(a.las, 60.0);

  const auto rel = rel_metrics(g, p, "conj");
  EXPECT_EQ(rel.true_positives, 1u);
  EXPECT_EQ(rel.predicted, 2u);
  EXPECT_EQ(rel.gold, 1u);
  const auto att = rel_att_metrics(g, p, "conj");
  EXPECT_EQ(att.true_positives, 0u);
  EXPECT_EQ(att.f1, 0.0);

  const auto report = evaluate(g, p);
  EXPECT_TRUE(report.per_label.contains("root"));
  EXPECT_FALSE(report.per_label.contains("punct"));
  EXPECT_EQ(report.per_label.at("dobj").rel.predicted, 0u);
  EXPECT_EQ(report.per_label.at("dobj").rel.recall, 0.0);
}

TEST(Metrics, ZeroSupportLabelRow) {
  auto gold = testutil::make_sentence({{"a", "N", 0, "root"}, {"b", "N", 1, "dep"}});
  auto pred = gold;
  pred.tokens[1].pred_head = 1;
  pred.tokens[1].pred_label = "conj";
  const std::vector<Sentence> g{gold}, p{pred};
  const auto r = evaluate(g, p);
  const auto& c = r.per_label.at("conj");
  EXPECT_EQ(c.rel.gold, 0u);
  EXPECT_EQ(c.rel.predicted, 1u);
  EXPECT_EQ(c.rel.precision, 0.0);
  EXPECT_EQ(c.rel.recall, 0.0);
  EXPECT_EQ(c.rel.f1, 0.0);
}

TEST(Metrics, PerfectPredictionScoresHundred) {
  const auto g = read_conll_file(testutil::data("sample_treebank.conllx"), ConllFormat::conllx);
  const auto r = evaluate(g, g);
  EXPECT_EQ(r.uas, 100.0);
  EXPECT_EQ(r.las, 100.0);
  for (const auto& [label, m] : r.per_label) {
    EXPECT_EQ(m.rel.f1, 100.0) << label;
    EXPECT_EQ(m.rel_att.f1, 100.0) << label;
  }
}

TEST(Metrics, AgreeWithBruteForce) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_pair(rng, 1 + rng.below(4));
    for (const auto& label : {std::string("conj"), std::string("nsubj")}) {
      const auto c = recount(p, label);
      const auto a = attachment_scores(p.gold, p.pred);
      ASSERT_EQ(a.counted, c.n);
      ASSERT_EQ(a.head_correct, c.head);
      ASSERT_EQ(a.both_correct, c.both);
      ASSERT_DOUBLE_EQ(a.uas, pct(c.head, c.n));
      ASSERT_DOUBLE_EQ(a.las, pct(c.both, c.n));
      const auto rel = rel_metrics(p.gold, p.pred, label);
      const auto att = rel_att_metrics(p.gold, p.pred, label);
      ASSERT_EQ(rel.true_positives, c.rel_tp);
      ASSERT_EQ(rel.predicted, c.pred);
      ASSERT_EQ(rel.gold, c.gold);
      ASSERT_EQ(att.true_positives, c.att_tp);
      ASSERT_LE(att.true_positives, rel.true_positives);
      ASSERT_LE(att.f1, rel.f1);
      ASSERT_DOUBLE_EQ(rel.precision, pct(c.rel_tp, c.pred));
      ASSERT_DOUBLE_EQ(att.recall, pct(c.att_tp, c.gold));
      for (double v : {rel.precision, rel.recall, rel.f1, att.precision, att.recall, att.f1}) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 100.0);
      }
    }
  }
}

TEST(Metrics, SentenceOrderDoesNotMatter) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = random_pair(rng, 6);
    const auto before = evaluate(p.gold, p.pred);
    std::vector<std::size_t> order{0, 1, 2, 3, 4, 5};
    rng.shuffle(std::span<std::size_t>(order));
    Pair q;
    for (auto i : order) {
      q.gold.push_back(p.gold[i]);
      q.pred.push_back(p.pred[i]);
    }
    const auto after = evaluate(q.gold, q.pred);
    ASSERT_DOUBLE_EQ(before.uas, after.uas);
    ASSERT_DOUBLE_EQ(before.las, after.las);
    ASSERT_EQ(before.per_label.size(), after.per_label.size());
    for (const auto& [label, m] : before.per_label) {
      ASSERT_EQ(m.rel.true_positives, after.per_label.at(label).rel.true_positives);
      ASSERT_EQ(m.rel_att.true_positives, after.per_label.at(label).rel_att.true_positives);
    }
  }
}

TEST(Alignment, Mismatches) {
  const auto a = testutil::make_sentence({{"a", "N", 0, "root"}, {"b", "N", 1, "dep"}});
  const auto b = testutil::make_sentence({{"a", "N", 0, "root"}});
  const auto c = testutil::make_sentence({{"a", "N", 0, "root"}, {"c", "N", 1, "dep"}});
  const std::vector<Sentence> ga{a}, gb{b}, gc{c}, two{a, a};
  EXPECT_NO_THROW(check_alignment(ga, ga));
  EXPECT_THROW(check_alignment(ga, gb), AlignmentError);
  EXPECT_THROW(check_alignment(ga, gc), AlignmentError);
  EXPECT_THROW(check_alignment(ga, two), AlignmentError);
  EXPECT_THROW(evaluate(ga, gc), AlignmentError);
  EXPECT_THROW(attachment_scores(ga, two), AlignmentError);
}

TEST(Report, TsvLayout) {
  const auto g = read_conll_file(testutil::data("sample23.conllu"), ConllFormat::conllu);
  std::ostringstream out;
  write_report_tsv(out, evaluate(g, g));
  const auto s = out.str();
  EXPECT_EQ(s.rfind("metric\tvalue\nUAS\t100.00\nLAS\t100.00\n", 0), 0u);
  EXPECT_NE(s.find("label\trel_p\trel_r\trel_f1\trelatt_p\trelatt_r\trelatt_f1\tsupport\tpredicted\n"),
            std::string::npos);
  std::ostringstream table;
  write_report_table(table, evaluate(g, g), "nsubj");
  EXPECT_NE(table.str().find("Rel+Att"), std::string::npos);
}

TEST(FiredFeatures, Rendering) {
  ConjFeatureVector f;
  EXPECT_EQ(fired_features(f).to_string(), "-");
  f.suf = 2;
  EXPECT_EQ(fired_features(f).count(), 0u);
  f.suf = 3;
  f.lem = true;
  f.cap = true;
  EXPECT_EQ(fired_features(f).to_string(), "LEM+CAP+SUF");
  f.sent_h = 1;
  EXPECT_FALSE(fired_features(f).sentiment);
  f.sent_m = -1;
  EXPECT_TRUE(fired_features(f).sentiment);
}

TEST(Prevalence, ExactSetRows) {
  auto mk = [](bool lem, bool cap, std::size_t suf, int sh, int sm) {
    ConjCase c;
    c.features.lem = lem;
    c.features.cap = cap;
    c.features.suf = suf;
    c.features.sent_h = sh;
    c.features.sent_m = sm;
    return c;
  };
  const std::vector<ConjCase> cases{
      mk(true, true, 4, 0, 0),   // LEM+CAP+SUF
      mk(true, false, 5, 0, 0),  // LEM+SUF
      mk(false, false, 3, 1, 1), // SENTIMENT+SUF
      mk(false, true, 0, 0, 0),  // single
      mk(true, true, 0, 1, -1),  // other
      mk(false, false, 1, 1, 0), // nothing
      mk(true, true, 3, 1, 1),   // all four: other
      mk(false, false, 0, 0, 0),
  };
  const auto p = prevalence(cases);
  EXPECT_EQ(p.cases, 8u);
  EXPECT_DOUBLE_EQ(p.lem, 50.0);
  EXPECT_DOUBLE_EQ(p.cap, 50.0);
  EXPECT_DOUBLE_EQ(p.suf, 50.0);
  EXPECT_DOUBLE_EQ(p.sentiment, 37.5);
  EXPECT_DOUBLE_EQ(p.lem_cap_suf, 12.5);
  EXPECT_DOUBLE_EQ(p.lem_suf, 12.5);
  EXPECT_DOUBLE_EQ(p.sentiment_suf, 12.5);
  EXPECT_DOUBLE_EQ(p.single, 12.5);
  EXPECT_DOUBLE_EQ(p.other_combination, 25.0);
  EXPECT_DOUBLE_EQ(p.any, 75.0);
  EXPECT_DOUBLE_EQ(p.lem_cap_suf + p.lem_suf + p.sentiment_suf + p.single + p.other_combination,
                   p.any);
  EXPECT_EQ(prevalence({}).any, 0.0);
}

namespace {

// root verb, conjunct head, "and", conjunct modifier
Sentence coordination(const std::string& h, const std::string& hp, const std::string& m,
                      const std::string& mp) {
  return testutil::make_sentence(
      {{"saw", "VBD", 0, "root"}, {h, hp, 1, "dobj"}, {"and", "CC", 4, "cc"}, {m, mp, 2, "conj"}});
}

Sentence attach_to_root_verb(Sentence s) {
  s.tokens[3].gold_head = 1;
  return s;
}

}  // namespace

TEST(ConjDiff, LemmaShareOfOnlyA) {
  FeatureResources res;
  res.lemmas = LemmaLexicon::load_file(testutil::data("sample_lemmas.tsv"));
  const std::vector<Sentence> gold{
      coordination("say", "VB", "said", "VBD"),
      coordination("handled", "VBD", "handles", "VBZ"),
      coordination("cat", "NN", "dog", "NN"),
      coordination("tea", "NN", "bread", "NN"),
      coordination("pen", "NN", "ink", "NN"),
      coordination("box", "NN", "lid", "NN"),
      coordination("sun", "NN", "moon", "NN"),
  };
  std::vector<Sentence> a, b;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool a_right = i < 5 || i == 6;
    const bool b_right = i >= 5;
    a.push_back(a_right ? gold[i] : attach_to_root_verb(gold[i]));
    b.push_back(b_right ? gold[i] : attach_to_root_verb(gold[i]));
  }
  const auto d = conj_diff(gold, a, b, res);
  ASSERT_EQ(d.only_a.size(), 5u);
  ASSERT_EQ(d.only_b.size(), 1u);
  EXPECT_DOUBLE_EQ(d.prevalence_a.lem, 40.0);
  EXPECT_EQ(d.prevalence_b.lem, 0.0);
  for (const auto& x : d.only_a) {
    EXPECT_EQ(x.gold_head, 2);
    EXPECT_EQ(x.head_a, 2);
    EXPECT_EQ(x.head_b, 1);
    for (const auto& y : d.only_b) EXPECT_NE(x.sentence, y.sentence);
  }
  EXPECT_EQ(d.only_b[0].sentence, 5u);

  std::ostringstream out;
  write_conj_diff(out, d, gold, "conj", "base");
  const auto s = out.str();
  EXPECT_NE(s.find("+conj,-base\t1\tsaid\tsay\tsay\tsaw\tLEM\n"), std::string::npos);
  EXPECT_NE(s.find("-conj,+base\t6\tlid\tbox\tsaw\tbox\t-\n"), std::string::npos);
  EXPECT_NE(s.find("LEM\t40.0\t0.0\n"), std::string::npos);
}

TEST(ConjDiff, IdenticalSystemsHaveNoCases) {
  const auto g = read_conll_file(testutil::data("sample_treebank.conllx"), ConllFormat::conllx);
  const auto d = conj_diff(g, g, g, {});
  EXPECT_TRUE(d.only_a.empty());
  EXPECT_TRUE(d.only_b.empty());
  EXPECT_EQ(d.prevalence_a.cases, 0u);
}
