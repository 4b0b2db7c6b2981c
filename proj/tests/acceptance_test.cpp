// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstring>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "conjparse/corpus_analysis.hpp"
#include "conjparse/evaluation.hpp"
#include "conjparse/gradient_check.hpp"
#include "conjparse/model_io.hpp"
#include "conjparse/trainer.hpp"
#include "test_util.hpp"

using namespace conjparse;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 2) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(prec) << v;
  return s.str();
}

std::vector<Sentence> load(const std::string& name) {
  return read_conll_file(testutil::data(name),
                         name.ends_with(".conllu") ? ConllFormat::conllu : ConllFormat::conllx);
}

FeatureResources bundled_resources() {
  FeatureResources r;
  r.lemmas = LemmaLexicon::load_file(testutil::data("sample_lemmas.tsv"));
  r.sentiment = SentimentLexicon::load_files(testutil::data("sentiment_positive.txt"),
                                             testutil::data("sentiment_negative.txt"));
  r.embeddings = EmbeddingTable::load_file(testutil::data("sample_embeddings.txt"));
  return r;
}

Hyperparams small_dims() {
  Hyperparams hp;
  hp.word_dim = 6;
  hp.pos_dim = 4;
  hp.lstm_layers = 2;
  hp.lstm_hidden = 5;
  hp.mlp_hidden = 8;
  hp.conj_hidden = 6;
  return hp;
}

// 1 -------------------------------------------------------------------------
Outcome oracle_round_trip() {
  const auto t0 = Clock::now();
  const auto corpus = load("sample_treebank.conllx");
  const auto labels = LabelInventory::from_corpus(corpus);
  std::size_t projective = 0, exact = 0;
  for (const auto& s : corpus) {
    if (!is_projective(s)) continue;
    ++projective;
    auto c = initial_config(s);
    for (const auto& t : oracle_sequence(s, labels)) c.apply(t, true);
    bool same = is_terminal(c);
    for (const auto& tok : s.tokens) {
      same = same && c.head_of(tok.id) == tok.gold_head &&
             labels.label(c.label_of(tok.id)) == tok.gold_label;
    }
    exact += same;
  }
  const double secs = seconds_since(t0);
  return {corpus.size() >= 200 && projective > 0 && exact == projective && secs < 5.0,
          std::to_string(exact) + "/" + std::to_string(projective) + " projective of " +
              std::to_string(corpus.size()) + " sentences reconstructed, " + fmt(secs, 3) + "s"};
}

// 2 -------------------------------------------------------------------------
Outcome gradient_check_joint_loss() {
  const auto t0 = Clock::now();
  const auto batch = testutil::parse_conllx(
      "1\tApples\t_\tNNS\tNNS\t_\t4\tnsubj\t_\t_\n"
      "2\tand\t_\tCC\tCC\t_\t1\tcc\t_\t_\n"
      "3\tpears\t_\tNNS\tNNS\t_\t1\tconj\t_\t_\n"
      "4\tgrow\t_\tVBP\tVBP\t_\t0\troot\t_\t_\n\n"
      "1\tPoland\t_\tNNP\tNNP\t_\t4\tnsubj\t_\t_\n"
      "2\tand\t_\tCC\tCC\t_\t1\tcc\t_\t_\n"
      "3\tHungary\t_\tNNP\tNNP\t_\t1\tconj\t_\t_\n"
      "4\trose\t_\tVBD\tVBD\t_\t0\troot\t_\t_\n\n");
  const auto res = bundled_resources();
  auto hp = small_dims();
  hp.word_dim = 4;
  hp.lstm_hidden = 3;
  auto m = Model::create(batch, hp, res.embeddings, 1);
  const auto report = gradient_check(m, res, batch);
  bool groups = true;
  for (const char* g : {"embeddings", "lstm", "mlp", "conj_mlp"}) {
    groups = groups && report.groups.contains(g) && report.groups.at(g).checked > 0;
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << "max relative error " << std::scientific << std::setprecision(2) << report.max_rel_error
    << " over " << report.groups.size() << " groups, " << fmt(secs, 1) << "s";
  return {report.passed && report.max_rel_error < 1e-4 && groups && secs < 60.0, d.str()};
}

// 3 -------------------------------------------------------------------------
Outcome baseline_equivalence() {
  const auto corpus = load("sample_treebank.conllx");
  const auto res = bundled_resources();
  Model conj = Model::create(corpus, small_dims(), res.embeddings, 4);
  conj.params().conj_mlp.set_zero();
  Model base = conj;
  base.hyper().use_conj_features = false;
  std::size_t states = 0, bit_equal = 0, same_parse = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& s = corpus[i];
    const auto e = encode(s, conj);
    auto c = initial_config(s);
    while (!is_terminal(c)) {
      const auto a = augmented_scores(c, e, s, conj, res);
      const auto b = augmented_scores(c, e, s, base, res);
      ++states;
      bit_equal += a.size() == b.size() &&
                   std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
      const auto k = best_legal(a, legality(c, true), conj.labels().size());
      c.apply(Transition::from_index(k, conj.labels().size()), true);
    }
    same_parse += greedy_parse(s, conj, res) == greedy_parse(s, base, res);
  }
  return {states > 0 && bit_equal == states && same_parse == 100,
          std::to_string(bit_equal) + "/" + std::to_string(states) + " score vectors bit-equal, " +
              std::to_string(same_parse) + "/100 parses identical"};
}

// 4 -------------------------------------------------------------------------
struct OverfitRun {
  std::size_t epochs = 0;
  double uas = 0.0;
  Model model;
};

OverfitRun overfit(const std::vector<Sentence>& corpus, std::uint64_t seed) {
  const FeatureResources res;
  OverfitRun r{0, 0.0, Model::create(corpus, Hyperparams{}, {}, seed)};
  Trainer t(r.model, res, seed);
  while (r.epochs < 50) {
    t.train_epoch(corpus);
    ++r.epochs;
    r.uas = attachment_scores(corpus, greedy_parse(corpus, r.model, res)).uas;
    if (r.uas >= 99.0) break;
  }
  return r;
}

Outcome overfit32() {
  const auto t0 = Clock::now();
  const auto corpus = load("overfit32.conllx");
  bool projective = corpus.size() == 32;
  for (const auto& s : corpus) projective = projective && is_projective(s);
  const auto a = overfit(corpus, 1);
  const double secs = seconds_since(t0);
  const auto b = overfit(corpus, 1);
  const bool deterministic = a.epochs == b.epochs && a.model.params() == b.model.params();
  return {projective && a.uas >= 99.0 && deterministic && secs < 300.0,
          "train UAS " + fmt(a.uas) + " after " + std::to_string(a.epochs) + " epochs, " +
              fmt(secs, 1) + "s, rerun " + (deterministic ? "identical" : "DIFFERENT")};
}

// 5 -------------------------------------------------------------------------
Outcome feature_examples() {
  const auto r = bundled_resources();
  std::vector<std::pair<std::string, bool>> checks = {
      {"CAP(Corp., Inc.)", cap_feature("Corp.", "Inc.")},
      {"SUF(men, women)=3", suffix_feature("men", "women") == 3},
      {"SUF(three-month, six-month)=6", suffix_feature("three-month", "six-month") == 6},
      {"LEM(say, said)", lemma_feature("say", "VB", "said", "VBD", r.lemmas)},
      {"SENT(up, down)=(1,-1)",
       sentiment_feature("up", r.sentiment) == 1 && sentiment_feature("down", r.sentiment) == -1},
  };
  std::string failed;
  for (const auto& [name, ok] : checks)
    if (!ok) failed += " " + name;
  return {failed.empty(), failed.empty() ? "5/5 example pairs exact" : "failed:" + failed};
}

// 6 -------------------------------------------------------------------------
Outcome metric_oracle() {
  static const std::vector<std::string> labels = {"conj", "nsubj", "dobj", "punct"};
  Rng rng(6);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(10));
    auto g = testutil::sentence_from_heads(testutil::random_tree(rng, n), {"x"});
    for (auto& t : g.tokens) {
      if (t.gold_head != 0) t.gold_label = labels[rng.below(labels.size())];
      if (rng.below(8) == 0) t.pos = ".";
    }
    auto p = g;
    for (auto& t : p.tokens) {
      t.pred_head = rng.below(3) ? t.gold_head : static_cast<int>(rng.below(static_cast<std::uint64_t>(n) + 1));
      t.pred_label = rng.below(3) ? t.gold_label : labels[rng.below(labels.size())];
    }
    std::size_t cnt = 0, head = 0, both = 0, tp = 0, att = 0, pred = 0, gold = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto& gt = g.tokens[i];
      const auto& pt = p.tokens[i];
      if (gt.gold_label == "punct" || gt.pos == ".") continue;
      ++cnt;
      const bool h = *pt.pred_head == gt.gold_head, l = *pt.pred_label == gt.gold_label;
      head += h;
      both += h && l;
      const bool gc = gt.gold_label == "conj", pc = *pt.pred_label == "conj";
      gold += gc;
      pred += pc;
      tp += gc && pc;
      att += gc && pc && h;
    }
    const std::vector<Sentence> gs{g}, ps{p};
    const auto a = attachment_scores(gs, ps);
    const auto rel = rel_metrics(gs, ps, "conj");
    const auto ra = rel_att_metrics(gs, ps, "conj");
    mismatches += a.counted != cnt || a.head_correct != head || a.both_correct != both ||
                  rel.true_positives != tp || rel.predicted != pred || rel.gold != gold ||
                  ra.true_positives != att || ra.predicted != pred || ra.gold != gold;
  }
  return {mismatches == 0, std::to_string(1000 - mismatches) + "/1000 random pairs match the recount"};
}

// 7 -------------------------------------------------------------------------
Sentence coordination(const std::string& h, const std::string& hp, const std::string& m,
                      const std::string& mp) {
  return testutil::make_sentence(
      {{"saw", "VBD", 0, "root"}, {h, hp, 1, "dobj"}, {"and", "CC", 4, "cc"}, {m, mp, 2, "conj"}});
}

Outcome conj_diff_fixture() {
  FeatureResources res;
  res.lemmas = LemmaLexicon::load_file(testutil::data("sample_lemmas.tsv"));
  // only_a: 2 LEM, 1 CAP+SUF, 2 none; only_b: 1 SUF; both right: 1
  const std::vector<Sentence> gold{
      coordination("say", "VB", "said", "VBD"),        coordination("handled", "VBD", "handles", "VBZ"),
      coordination("Poland", "NNP", "Finland", "NNP"), coordination("cat", "NN", "dog", "NN"),
      coordination("tea", "NN", "bread", "NN"),        coordination("men", "NNS", "women", "NNS"),
      coordination("sun", "NN", "moon", "NN"),
  };
  std::vector<Sentence> a = gold, b = gold;
  for (std::size_t i = 0; i < 5; ++i) b[i].tokens[3].gold_head = 1;
  a[5].tokens[3].gold_head = 1;
  const auto d = conj_diff(gold, a, b, res);
  std::vector<std::size_t> ia, ib;
  for (const auto& c : d.only_a) ia.push_back(c.sentence);
  for (const auto& c : d.only_b) ib.push_back(c.sentence);
  const auto& pa = d.prevalence_a;
  const auto& pb = d.prevalence_b;
  const bool ok = ia == std::vector<std::size_t>{0, 1, 2, 3, 4} && ib == std::vector<std::size_t>{5} &&
                  pa.lem == 40.0 && pa.cap == 20.0 && pa.suf == 20.0 && pa.any == 60.0 &&
                  pb.lem == 0.0 && pb.cap == 0.0 && pb.suf == 100.0;
  return {ok, "only_a " + std::to_string(ia.size()) + " (LEM " + fmt(pa.lem, 1) + "%, CAP " +
                  fmt(pa.cap, 1) + "%, SUF>=3 " + fmt(pa.suf, 1) + "%), only_b " +
                  std::to_string(ib.size()) + " (SUF>=3 " + fmt(pb.suf, 1) + "%)"};
}

// 8 -------------------------------------------------------------------------
Outcome corpus_statistics() {
  std::vector<Sentence> corpus{coordination("men", "NNS", "women", "NNS"),
                               coordination("three-month", "JJ", "six-month", "JJ")};
  const std::vector<std::pair<std::string, std::string>> plain = {
      {"cat", "dog"}, {"tea", "bread"}, {"pen", "ink"}, {"box", "lid"}, {"sun", "moon"}};
  for (int i = 0; i < 23; ++i) corpus.push_back(coordination(plain[i % 5].first, "NN", plain[i % 5].second, "NN"));
  const auto stats = label_stats(corpus, {});
  const LabelStats* conj = nullptr;
  for (const auto& s : stats)
    if (s.label == "conj") conj = &s;
  const double pct = conj ? percent(conj->suf_ge_3, conj->total_edges) : -1.0;
  const auto top = top_pairs(corpus, "conj", 3);
  // hand counts: cat/dog, tea/bread, pen/ink appear 5 times each; box/lid, sun/moon 4
  const std::vector<std::pair<WordPair, std::size_t>> want = {
      {{"cat", "dog"}, 5}, {{"pen", "ink"}, 5}, {{"tea", "bread"}, 5}};
  const bool ok = conj && conj->total_edges == 25 && conj->suf_ge_3 == 2 && pct == 8.0 && top == want;
  return {ok, "conj edges " + std::to_string(conj ? conj->total_edges : 0) + ", suf_ge_3 " + fmt(pct, 1) +
                  "%, top pairs " + (top == want ? "match" : "DIFFER")};
}

// 9 -------------------------------------------------------------------------
Outcome determinism_and_persistence() {
  const auto corpus = load("overfit32.conllx");
  const auto res = bundled_resources();
  auto train = [&](std::uint64_t seed) {
    auto m = Model::create(corpus, small_dims(), res.embeddings, seed);
    Trainer t(m, res, seed);
    for (int e = 0; e < 3; ++e) t.train_epoch(corpus);
    std::ostringstream out;
    save_model(out, m);
    return std::make_pair(m, out.str());
  };
  const auto [m1, bytes1] = train(21);
  const auto [m2, bytes2] = train(21);
  std::istringstream in(bytes1);
  const auto back = load_model(in);
  const bool same_bytes = bytes1 == bytes2;
  const bool same_params = back.params() == m1.params();
  const bool same_parses = greedy_parse(corpus, m1, res) == greedy_parse(corpus, back, res);
  return {same_bytes && same_params && same_parses,
          std::string("saved bytes ") + (same_bytes ? "identical" : "DIFFER") + ", reload params " +
              (same_params ? "identical" : "DIFFER") + ", parses " + (same_parses ? "identical" : "DIFFER")};
}

// 10 ------------------------------------------------------------------------
double coord_conj_f1(const std::vector<Sentence>& train, const std::vector<Sentence>& test,
                     const FeatureResources& res, bool conj_features, std::uint64_t seed) {
  Hyperparams hp;
  hp.use_conj_features = conj_features;
  auto m = Model::create(train, hp, res.embeddings, seed);
  Trainer t(m, res, seed);
  for (int e = 0; e < 10; ++e) t.train_epoch(train);
  return rel_att_metrics(test, greedy_parse(test, m, res), "conj").f1;
}

Outcome directional_effect() {
  const auto train = load("coord_train.conllx");
  const auto test = load("coord_test.conllx");
  FeatureResources res;
  res.lemmas = LemmaLexicon::load_file(testutil::data("coord_lemmas.tsv"));
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::vector<std::future<double>> with, without;
  for (auto s : seeds) {
    with.push_back(std::async(std::launch::async, coord_conj_f1, std::cref(train), std::cref(test),
                              std::cref(res), true, s));
    without.push_back(std::async(std::launch::async, coord_conj_f1, std::cref(train), std::cref(test),
                                 std::cref(res), false, s));
  }
  double gap_sum = 0.0, min_gap = 1e9;
  std::ostringstream d;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const double a = with[i].get(), b = without[i].get();
    gap_sum += a - b;
    min_gap = std::min(min_gap, a - b);
    d << "seed " << seeds[i] << ": " << fmt(a) << " vs " << fmt(b) << "; ";
  }
  const double mean = gap_sum / static_cast<double>(seeds.size());
  d << "mean gap " << fmt(mean) << ", min gap " << fmt(min_gap);
  return {mean >= 5.0 && min_gap >= 5.0, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"oracle round-trip", oracle_round_trip},
      {"gradient check", gradient_check_joint_loss},
      {"baseline equivalence", baseline_equivalence},
      {"overfit", overfit32},
      {"feature examples", feature_examples},
      {"metric oracle equivalence", metric_oracle},
      {"conj-diff correctness", conj_diff_fixture},
      {"corpus statistics", corpus_statistics},
      {"determinism and persistence", determinism_and_persistence},
      {"directional effect", directional_effect},
  };
  // optional list of criterion numbers to run
  std::vector<bool> selected(criteria.size(), argc <= 1);
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k >= 1 && static_cast<std::size_t>(k) <= criteria.size()) selected[static_cast<std::size_t>(k - 1)] = true;
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": " << criteria[i].first
              << " - " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
