#include <benchmark/benchmark.h>

#include <sstream>

#include "conjparse/trainer.hpp"

using namespace conjparse;

namespace {

std::string data(const char* name) { return std::string(CONJPARSE_DATA_DIR) + "/" + name; }

const std::vector<Sentence>& corpus() {
  static const auto c = read_conll_file(data("sample_treebank.conllx"), ConllFormat::conllx);
  return c;
}

const FeatureResources& resources() {
  static const FeatureResources r = [] {
    FeatureResources x;
    x.lemmas = LemmaLexicon::load_file(data("sample_lemmas.tsv"));
    x.sentiment = SentimentLexicon::load_files(data("sentiment_positive.txt"),
                                               data("sentiment_negative.txt"));
    x.embeddings = EmbeddingTable::load_file(data("sample_embeddings.txt"));
    return x;
  }();
  return r;
}

const Model& model() {
  static const Model m = Model::create(corpus(), Hyperparams{}, resources().embeddings, 1);
  return m;
}

std::size_t tokens(std::span<const Sentence> s) {
  std::size_t n = 0;
  for (const auto& x : s) n += x.size();
  return n;
}

}  // namespace

static void BM_ReadConll(benchmark::State& state) {
  std::ostringstream buf;
  write_conll(buf, corpus(), false);
  const auto text = buf.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(read_conll(in, ConllFormat::conllx));
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ReadConll);

static void BM_ExtractFeatures(benchmark::State& state) {
  const auto& c = corpus();
  std::size_t pairs = 0;
  for (auto _ : state) {
    for (const auto& s : c) {
      for (const auto& t : s.tokens) {
        if (t.gold_head == 0) continue;
        benchmark::DoNotOptimize(extract(s.token(t.gold_head), t, resources()));
        ++pairs;
      }
    }
  }
  state.SetItemsProcessed(static_cast<int64_t>(pairs));
}
BENCHMARK(BM_ExtractFeatures);

static void BM_Encode(benchmark::State& state) {
  const auto& s = corpus()[0];
  for (auto _ : state) benchmark::DoNotOptimize(encode(s, model()));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * s.size()));
}
BENCHMARK(BM_Encode);

static void BM_GreedyParse(benchmark::State& state) {
  const auto batch = std::span(corpus()).subspan(0, 20);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_parse(batch, model(), resources()));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * tokens(batch)));
}
BENCHMARK(BM_GreedyParse)->Unit(benchmark::kMillisecond);

static void BM_TrainStep(benchmark::State& state) {
  Model m = model();
  Trainer t(m, resources(), 1);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(t.train_step(std::span(corpus()).subspan(i, 1)));
    i = (i + 1) % corpus().size();
  }
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
