#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "conjparse/corpus_analysis.hpp"
#include "conjparse/error.hpp"
#include "conjparse/evaluation.hpp"
#include "conjparse/gradient_check.hpp"
#include "conjparse/model.hpp"
#include "conjparse/model_io.hpp"
#include "conjparse/trainer.hpp"
#include "conjparse/treebank.hpp"

namespace conjparse::cli {

namespace {

struct ResourceOptions {
  std::string embeddings;
  std::string lemma_lexicon;
  std::string sentiment_pos;
  std::string sentiment_neg;
};

struct RunConfig {
  std::string format = "conllx";
  ResourceOptions resources;

  std::string train;
  std::string dev;
  std::string model;
  std::string log;
  std::optional<std::uint64_t> seed;
  std::size_t epochs = 10;
  std::size_t batch_size = 1;
  bool no_conj_features = false;
  bool no_single_root = false;
  bool train_pretrained = false;
  bool no_word_dropout = false;
  Hyperparams hp;

  std::string input;
  std::string output;

  std::string gold;
  std::string pred;
  std::string pred_b;
  std::string name_a = "A";
  std::string name_b = "B";
  std::string label = "conj";
  bool tsv = false;

  std::size_t top_k = 10;
  bool markdown = false;

  std::string corrupt_gradient;
  bool zero_params = false;
};

std::uint64_t fnv1a(std::istream& in) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string fingerprint(const std::string& path) {
  if (path.empty()) return "none";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open '" + path + "'");
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(in);
  return os.str();
}

const std::pair<const char*, std::string ResourceOptions::*> kResourceFields[] = {
    {"embeddings", &ResourceOptions::embeddings},
    {"lemma_lexicon", &ResourceOptions::lemma_lexicon},
    {"sentiment_pos", &ResourceOptions::sentiment_pos},
    {"sentiment_neg", &ResourceOptions::sentiment_neg},
};

FeatureResources load_resources(const ResourceOptions& r, std::ostream& err) {
  FeatureResources res;
  if (!r.embeddings.empty()) res.embeddings = EmbeddingTable::load_file(r.embeddings);
  if (!r.lemma_lexicon.empty()) res.lemmas = LemmaLexicon::load_file(r.lemma_lexicon);
  if (r.sentiment_pos.empty() != r.sentiment_neg.empty()) {
    throw ResourceError("--sentiment-pos and --sentiment-neg must be given together");
  }
  if (!r.sentiment_pos.empty()) {
    res.sentiment = SentimentLexicon::load_files(r.sentiment_pos, r.sentiment_neg);
  } else {
    err << "warning: no sentiment lexicon; sentiment features are neutral\n";
  }
  return res;
}

void record_fingerprints(Model& m, const ResourceOptions& r) {
  for (const auto& [name, field] : kResourceFields) {
    m.metadata()["resource." + std::string(name)] = fingerprint(r.*field);
  }
}

void compare_fingerprints(const Model& m, const ResourceOptions& r, std::ostream& err) {
  for (const auto& [name, field] : kResourceFields) {
    const auto it = m.metadata().find("resource." + std::string(name));
    if (it == m.metadata().end()) continue;
    const auto now = fingerprint(r.*field);
    if (now != it->second) {
      err << "warning: " << name << " differs from the resource used in training ("
          << ((r.*field).empty() ? "not given" : "content changed") << ")\n";
    }
  }
}

std::vector<Sentence> read_corpus(const std::string& path, ConllFormat fmt,
                                  TreeCheck check = TreeCheck::strict) {
  return read_conll_file(path, fmt, check);
}

// ---------------------------------------------------------------------------

int cmd_train(const RunConfig& cfg, const std::string& effective, std::ostream& out,
              std::ostream& err) {
  const auto fmt = parse_format(cfg.format);
  std::unique_ptr<std::ofstream> log_file;
  if (!cfg.log.empty()) {
    log_file = std::make_unique<std::ofstream>(cfg.log);
    if (!*log_file) throw ResourceError("cannot write log '" + cfg.log + "'");
  }
  std::ostream& log = log_file ? static_cast<std::ostream&>(*log_file) : err;

  const auto res = load_resources(cfg.resources, err);
  auto corpus = read_corpus(cfg.train, fmt);
  std::vector<Sentence> dev;
  if (!cfg.dev.empty()) dev = read_corpus(cfg.dev, fmt);

  std::vector<Sentence> train;
  std::size_t skipped = 0;
  for (auto& s : corpus) {
    if (is_projective(s)) {
      train.push_back(std::move(s));
    } else {
      ++skipped;
    }
  }
  if (train.empty()) throw StructureError("no projective training sentences", 0);

  auto hp = cfg.hp;
  hp.use_conj_features = !cfg.no_conj_features;
  hp.single_root = !cfg.no_single_root;
  hp.freeze_pretrained = !cfg.train_pretrained;

  log << "# effective configuration\n" << effective;
  log << "training sentences: " << train.size() << " (skipped " << skipped
      << " non-projective)\n";
  if (!dev.empty()) log << "dev sentences: " << dev.size() << '\n';

  Model model = Model::create(train, hp, res.embeddings, *cfg.seed);
  record_fingerprints(model, cfg.resources);
  model.metadata()["seed"] = std::to_string(*cfg.seed);

  Trainer trainer(model, res, *cfg.seed);
  trainer.set_word_dropout(!cfg.no_word_dropout);
  std::optional<Model> best;
  double best_las = -1.0;
  std::size_t best_epoch = 0;
  log << std::fixed << std::setprecision(4);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const double loss = trainer.train_epoch(train, cfg.batch_size);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log << "epoch " << epoch << " loss " << loss << " time " << std::setprecision(1) << secs
        << "s" << std::setprecision(4);
    if (!dev.empty()) {
      const auto scores = attachment_scores(dev, greedy_parse(dev, model, res));
      log << " dev_uas " << scores.uas << " dev_las " << scores.las;
      if (scores.las > best_las) {
        best_las = scores.las;
        best_epoch = epoch;
        best = model;
      }
    }
    log << '\n' << std::flush;
  }
  Model& chosen = best ? *best : model;
  chosen.metadata()["epochs"] = std::to_string(cfg.epochs);
  if (best) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << best_las;
    chosen.metadata()["best_epoch"] = std::to_string(best_epoch);
    chosen.metadata()["best_dev_las"] = os.str();
    log << "best dev LAS " << best_las << " at epoch " << best_epoch << '\n';
  }
  save_model_file(cfg.model, chosen);
  out << "saved " << cfg.model << '\n';
  return kOk;
}

int cmd_parse(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto fmt = parse_format(cfg.format);
  const Model model = load_model_file(cfg.model);
  compare_fingerprints(model, cfg.resources, err);
  const auto res = load_resources(cfg.resources, err);
  const auto input = read_corpus(cfg.input, fmt);
  const auto parsed = greedy_parse(input, model, res);
  if (cfg.output.empty()) {
    write_conll(out, parsed, true, fmt);
  } else {
    std::ofstream file(cfg.output);
    if (!file) throw ResourceError("cannot write '" + cfg.output + "'");
    write_conll(file, parsed, true, fmt);
  }
  return kOk;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto fmt = parse_format(cfg.format);
  const auto gold = read_corpus(cfg.gold, fmt);
  const auto pred = read_corpus(cfg.pred, fmt, TreeCheck::heads_in_range);
  const auto report = evaluate(gold, pred);
  if (cfg.tsv) {
    write_report_tsv(out, report);
  } else {
    write_report_table(out, report, cfg.label);
  }
  if (!cfg.pred_b.empty()) {
    const auto pred_b = read_corpus(cfg.pred_b, fmt, TreeCheck::heads_in_range);
    const auto res = load_resources(cfg.resources, err);
    const auto diff = conj_diff(gold, pred, pred_b, res, cfg.label);
    out << '\n';
    write_conj_diff(out, diff, gold, cfg.name_a, cfg.name_b);
  }
  return kOk;
}

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto fmt = parse_format(cfg.format);
  const auto corpus = read_corpus(cfg.input, fmt);
  const auto res = load_resources(cfg.resources, err);
  const auto stats = label_stats(corpus, res);
  const auto pairs = top_pairs(corpus, cfg.label, cfg.top_k);
  if (cfg.markdown) {
    write_top_pairs_markdown(out, cfg.label, pairs);
    out << '\n';
    write_label_stats_markdown(out, stats);
  } else {
    write_top_pairs_tsv(out, pairs);
    out << '\n';
    write_label_stats_tsv(out, stats);
  }
  return kOk;
}

constexpr const char* kGradcheckTreebank =
    "1\tApples\t_\tNNS\tNNS\t_\t4\tnsubj\t_\t_\n"
    "2\tand\t_\tCC\tCC\t_\t1\tcc\t_\t_\n"
    "3\tpears\t_\tNNS\tNNS\t_\t1\tconj\t_\t_\n"
    "4\tgrow\t_\tVBP\tVBP\t_\t0\troot\t_\t_\n"
    "5\t.\t_\t.\t.\t_\t4\tpunct\t_\t_\n"
    "\n"
    "1\tPoland\t_\tNNP\tNNP\t_\t4\tnsubj\t_\t_\n"
    "2\tand\t_\tCC\tCC\t_\t1\tcc\t_\t_\n"
    "3\tHungary\t_\tNNP\tNNP\t_\t1\tconj\t_\t_\n"
    "4\trose\t_\tVBD\tVBD\t_\t0\troot\t_\t_\n"
    "5\tand\t_\tCC\tCC\t_\t4\tcc\t_\t_\n"
    "6\tfell\t_\tVBD\tVBD\t_\t4\tconj\t_\t_\n"
    "\n";

constexpr const char* kGradcheckEmbeddings =
    "apples 0.5 -0.2 0.1\n"
    "pears 0.4 -0.1 0.3\n"
    "poland -0.3 0.6 0.2\n"
    "hungary -0.2 0.5 0.4\n"
    "rose 0.1 0.1 -0.7\n";

int cmd_gradcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<Sentence> batch;
  if (cfg.input.empty()) {
    std::istringstream in(kGradcheckTreebank);
    batch = read_conll(in, ConllFormat::conllx);
  } else {
    batch = read_corpus(cfg.input, parse_format(cfg.format));
  }
  FeatureResources res;
  if (cfg.input.empty()) {
    std::istringstream emb(kGradcheckEmbeddings);
    res.embeddings = EmbeddingTable::load(emb);
    res.lemmas.add("rose", PosClass::verb, "rise");
    res.lemmas.add("fell", PosClass::verb, "fall");
    const std::vector<std::string> pos{"rose", "grow"};
    const std::vector<std::string> neg{"fell"};
    res.sentiment = SentimentLexicon(pos, neg);
  } else {
    res = load_resources(cfg.resources, err);
  }

  Hyperparams hp;
  hp.word_dim = 4;
  hp.pos_dim = 3;
  hp.lstm_layers = 2;
  hp.lstm_hidden = 3;
  hp.mlp_hidden = 5;
  hp.conj_hidden = 4;
  hp.use_conj_features = !cfg.no_conj_features;
  Model model = Model::create(batch, hp, res.embeddings, cfg.seed.value_or(1));
  if (cfg.zero_params) {
    for (auto& t : model.params().tensors()) std::fill(t.data, t.data + t.size(), 0.0);
  }

  GradCheckOptions opts;
  if (!cfg.corrupt_gradient.empty()) {
    const auto colon = cfg.corrupt_gradient.rfind(':');
    if (colon == std::string::npos) {
      throw CLI::ValidationError("--corrupt-gradient", "expected TENSOR:INDEX");
    }
    std::size_t index = 0;
    try {
      index = std::stoul(cfg.corrupt_gradient.substr(colon + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--corrupt-gradient", "bad index");
    }
    opts.corrupt_entry = std::make_pair(cfg.corrupt_gradient.substr(0, colon), index);
  }

  const auto report = gradient_check(model, res, batch, opts);
  out << std::scientific << std::setprecision(3);
  out << "group\tentries\tkinks\tmax_rel_error\tworst\n";
  for (const auto& [name, g] : report.groups) {
    out << name << '\t' << g.checked << '\t' << g.kinks << '\t' << g.max_rel_error << '\t'
        << g.worst_tensor << '[' << g.worst_index << "]\n";
  }
  out << "max relative error " << report.max_rel_error << " (tolerance " << opts.tolerance
      << ")\n";
  out << (report.passed ? "PASS" : "FAIL") << '\n';
  return report.passed ? kOk : kCheckFailed;
}

void add_resource_flags(CLI::App* app, ResourceOptions& r) {
  app->add_option("--embeddings", r.embeddings, "Pretrained embeddings (word2vec text)")
      ->check(CLI::ExistingFile);
  app->add_option("--lemma-lexicon", r.lemma_lexicon, "TSV: form, POS class, lemma")
      ->check(CLI::ExistingFile);
  app->add_option("--sentiment-pos", r.sentiment_pos, "Positive word list")
      ->check(CLI::ExistingFile);
  app->add_option("--sentiment-neg", r.sentiment_neg, "Negative word list")
      ->check(CLI::ExistingFile);
}

void add_format_flag(CLI::App* app, std::string& format) {
  app->add_option("--format", format, "Treebank format")
      ->check(CLI::IsMember({"conllx", "conllu"}))
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Greedy arc-hybrid dependency parser with conjunction scoring", "conjparse"};
  app.set_config("--config", "", "Config file (TOML/INI); command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  auto* train = app.add_subcommand("train", "Train a model");
  train->add_option("--train", cfg.train, "Training treebank")->required()->check(CLI::ExistingFile);
  train->add_option("--dev", cfg.dev, "Development treebank")->check(CLI::ExistingFile);
  train->add_option("--model", cfg.model, "Output model file")->required();
  train->add_option("--seed", cfg.seed, "Random seed")->required();
  train->add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str();
  train->add_option("--batch-size", cfg.batch_size, "Sentences per update")->capture_default_str();
  train->add_option("--log", cfg.log, "Training log file (default: stderr)");
  train->add_flag("--no-conj-features", cfg.no_conj_features, "Train the baseline parser");
  train->add_flag("--no-single-root", cfg.no_single_root, "Allow several root attachments");
  train->add_flag("--train-pretrained", cfg.train_pretrained, "Update pretrained vectors");
  train->add_flag("--no-word-dropout", cfg.no_word_dropout, "Disable word dropout");
  train->add_option("--word-dim", cfg.hp.word_dim)->capture_default_str();
  train->add_option("--pos-dim", cfg.hp.pos_dim)->capture_default_str();
  train->add_option("--lstm-layers", cfg.hp.lstm_layers)->capture_default_str();
  train->add_option("--lstm-hidden", cfg.hp.lstm_hidden)->capture_default_str();
  train->add_option("--mlp-hidden", cfg.hp.mlp_hidden)->capture_default_str();
  train->add_option("--conj-hidden", cfg.hp.conj_hidden)->capture_default_str();
  train->add_option("--learning-rate", cfg.hp.learning_rate)->capture_default_str();
  train->add_option("--dropout-alpha", cfg.hp.word_dropout_alpha)->capture_default_str();
  add_resource_flags(train, cfg.resources);
  add_format_flag(train, cfg.format);

  auto* parse = app.add_subcommand("parse", "Parse a treebank with a trained model");
  parse->add_option("--input", cfg.input, "Input treebank")->required()->check(CLI::ExistingFile);
  parse->add_option("--model", cfg.model, "Model file")->required()->check(CLI::ExistingFile);
  parse->add_option("--output", cfg.output, "Output file (default: stdout)");
  add_resource_flags(parse, cfg.resources);
  add_format_flag(parse, cfg.format);

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold trees");
  evaluate->add_option("--gold", cfg.gold, "Gold treebank")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--pred", cfg.pred, "Predictions")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--pred-b", cfg.pred_b, "Second system for the conj diff")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--name-a", cfg.name_a)->capture_default_str();
  evaluate->add_option("--name-b", cfg.name_b)->capture_default_str();
  evaluate->add_option("--label", cfg.label, "Label for the focus block and diff")
      ->capture_default_str();
  evaluate->add_flag("--tsv", cfg.tsv, "Emit TSV instead of a table");
  add_resource_flags(evaluate, cfg.resources);
  add_format_flag(evaluate, cfg.format);

  auto* analyze = app.add_subcommand("analyze", "Symmetry statistics of a treebank");
  analyze->add_option("--input", cfg.input, "Treebank")->required()->check(CLI::ExistingFile);
  analyze->add_option("--label", cfg.label, "Label for the pair table")->capture_default_str();
  analyze->add_option("--top", cfg.top_k, "Number of pairs")->capture_default_str();
  analyze->add_flag("--markdown", cfg.markdown, "Emit Markdown tables");
  add_resource_flags(analyze, cfg.resources);
  add_format_flag(analyze, cfg.format);

  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  gradcheck->add_option("--input", cfg.input, "Treebank (default: bundled fixture)")
      ->check(CLI::ExistingFile);
  gradcheck->add_option("--seed", cfg.seed, "Initialization seed (default 1)");
  gradcheck->add_flag("--no-conj-features", cfg.no_conj_features);
  gradcheck->add_flag("--zero-params", cfg.zero_params, "Check an all-zero model");
  gradcheck->add_option("--corrupt-gradient", cfg.corrupt_gradient,
                        "Test hook: perturb the analytic gradient at TENSOR:INDEX");
  add_resource_flags(gradcheck, cfg.resources);
  add_format_flag(gradcheck, cfg.format);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return cmd_train(cfg, app.config_to_str(true, false), out, err);
    if (*parse) return cmd_parse(cfg, out, err);
    if (*evaluate) return cmd_evaluate(cfg, out, err);
    if (*analyze) return cmd_analyze(cfg, out, err);
    if (*gradcheck) return cmd_gradcheck(cfg, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ModelFormatError& e) {
    err << "model error: " << e.what() << '\n';
    return kModelError;
  } catch (const ParseError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const StructureError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const AlignmentError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const ResourceError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const OracleError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kUsage;
}

}  // namespace conjparse::cli
