#include "conjparse/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "conjparse/error.hpp"
#include "conjparse/utf8.hpp"

namespace conjparse {

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() {
  words_ = {"<unk>", "<root>"};
  counts_ = {0, 0};
  tags_ = {"<unk>", "<root>"};
}

Vocabulary Vocabulary::from_corpus(std::span<const Sentence> corpus) {
  std::map<std::string, std::size_t> words;
  std::map<std::string, std::size_t> tags;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) {
      ++words[t.form];
      ++tags[t.pos];
    }
  }
  Vocabulary v;
  for (const auto& [w, c] : words) v.add_word(w, c);
  for (const auto& [t, c] : tags) v.add_pos(t);
  return v;
}

void Vocabulary::add_word(std::string_view form, std::size_t count) {
  const auto [it, inserted] = word_index_.emplace(std::string(form), static_cast<int>(words_.size()));
  if (!inserted) {
    counts_[static_cast<std::size_t>(it->second)] += count;
    return;
  }
  words_.emplace_back(form);
  counts_.push_back(count);
}

void Vocabulary::add_pos(std::string_view tag) {
  if (tag_index_.emplace(std::string(tag), static_cast<int>(tags_.size())).second) {
    tags_.emplace_back(tag);
  }
}

int Vocabulary::word_index(std::string_view form) const {
  const auto it = word_index_.find(std::string(form));
  return it == word_index_.end() ? kUnk : it->second;
}

int Vocabulary::pos_index(std::string_view tag) const {
  const auto it = tag_index_.find(std::string(tag));
  return it == tag_index_.end() ? kUnk : it->second;
}

// ---------------------------------------------------------------------------
// Parameters

const char* to_string(ParamGroup g) {
  switch (g) {
    case ParamGroup::embeddings:
      return "embeddings";
    case ParamGroup::lstm:
      return "lstm";
    case ParamGroup::mlp:
      return "mlp";
    case ParamGroup::conj_mlp:
      return "conj_mlp";
  }
  return "?";
}

namespace {

template <class View, class P>
std::vector<View> collect(P& p) {
  std::vector<View> out;
  auto add = [&out](std::string name, ParamGroup g, auto& t) {
    out.push_back(View{std::move(name), g, t.data(), t.rows(), t.cols()});
  };
  add("word_emb", ParamGroup::embeddings, p.word_emb);
  add("pretrained_emb", ParamGroup::embeddings, p.pretrained_emb);
  add("pos_emb", ParamGroup::embeddings, p.pos_emb);
  for (std::size_t l = 0; l < p.lstm_fwd.size(); ++l) {
    for (int dir = 0; dir < 2; ++dir) {
      auto& cell = dir == 0 ? p.lstm_fwd[l] : p.lstm_bwd[l];
      const std::string prefix = "lstm" + std::to_string(l) + (dir == 0 ? ".fwd." : ".bwd.");
      add(prefix + "w", ParamGroup::lstm, cell.w);
      add(prefix + "u", ParamGroup::lstm, cell.u);
      add(prefix + "b", ParamGroup::lstm, cell.b);
    }
  }
  add("pad", ParamGroup::lstm, p.pad);
  add("mlp.w1", ParamGroup::mlp, p.mlp.w1);
  add("mlp.b1", ParamGroup::mlp, p.mlp.b1);
  add("mlp.w2", ParamGroup::mlp, p.mlp.w2);
  add("mlp.b2", ParamGroup::mlp, p.mlp.b2);
  add("conj.w1", ParamGroup::conj_mlp, p.conj_mlp.w1);
  add("conj.b1", ParamGroup::conj_mlp, p.conj_mlp.b1);
  add("conj.w2", ParamGroup::conj_mlp, p.conj_mlp.w2);
  add("conj.b2", ParamGroup::conj_mlp, p.conj_mlp.b2);
  return out;
}

}  // namespace

std::vector<TensorView> Parameters::tensors() { return collect<TensorView>(*this); }
std::vector<ConstTensorView> Parameters::tensors() const { return collect<ConstTensorView>(*this); }

Parameters Parameters::zeros_like(bool with_embeddings) const {
  Parameters z;
  if (with_embeddings) {
    z.word_emb.setZero(word_emb.rows(), word_emb.cols());
    z.pretrained_emb.setZero(pretrained_emb.rows(), pretrained_emb.cols());
    z.pos_emb.setZero(pos_emb.rows(), pos_emb.cols());
  }
  for (std::size_t l = 0; l < lstm_fwd.size(); ++l) {
    z.lstm_fwd.emplace_back().resize(lstm_fwd[l].input(), lstm_fwd[l].hidden());
    z.lstm_bwd.emplace_back().resize(lstm_bwd[l].input(), lstm_bwd[l].hidden());
  }
  z.pad.setZero(pad.size());
  z.mlp.resize(mlp.input(), mlp.w1.rows(), mlp.output());
  z.conj_mlp.resize(conj_mlp.input(), conj_mlp.w1.rows(), conj_mlp.output());
  return z;
}

bool Parameters::operator==(const Parameters& o) const {
  const auto a = tensors();
  const auto b = o.tensors();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rows != b[i].rows || a[i].cols != b[i].cols) return false;
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      if (a[i].data[k] != b[i].data[k]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Model

Model::Model(Hyperparams hp, Vocabulary vocab, LabelInventory labels,
             std::vector<std::string> pretrained_words, std::size_t pretrained_dim)
    : hp_(hp),
      vocab_(std::move(vocab)),
      labels_(std::move(labels)),
      pretrained_words_(std::move(pretrained_words)) {
  for (std::size_t i = 0; i < pretrained_words_.size(); ++i) {
    pretrained_index_.emplace(pretrained_words_[i], static_cast<int>(i) + 2);
  }
  allocate(pretrained_dim);
}

Model::Model(Hyperparams hp, Vocabulary vocab, LabelInventory labels,
             const EmbeddingTable& pretrained, std::uint64_t seed)
    : hp_(hp), vocab_(std::move(vocab)), labels_(std::move(labels)) {
  if (hp_.lstm_layers == 0) throw std::invalid_argument("at least one LSTM layer is required");
  pretrained_words_.reserve(pretrained.size());
  for (std::size_t i = 0; i < pretrained.size(); ++i) {
    pretrained_words_.push_back(pretrained.word(i));
    pretrained_index_.emplace(pretrained.word(i), static_cast<int>(i) + 2);
  }
  allocate(pretrained.size() > 0 ? pretrained.dim() : 0);

  Rng rng(seed);
  for (auto& t : params_.tensors()) {
    if (t.name == "pretrained_emb") continue;
    const bool bias = t.cols == 1 && t.name != "pad";
    if (bias) continue;
    double limit;
    if (t.group == ParamGroup::embeddings) {
      limit = std::sqrt(3.0 / static_cast<double>(t.rows));
    } else {
      limit = std::sqrt(6.0 / static_cast<double>(t.rows + t.cols));
    }
    for (std::size_t k = 0; k < t.size(); ++k) t.data[k] = rng.uniform(-limit, limit);
  }
  for (std::size_t i = 0; i < pretrained.size(); ++i) {
    const auto v = pretrained.vector(i);
    for (std::size_t r = 0; r < v.size(); ++r) {
      params_.pretrained_emb(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i) + 2) = v[r];
    }
  }
}

void Model::allocate(std::size_t pretrained_dim) {
  const auto h = static_cast<Eigen::Index>(hp_.lstm_hidden);
  params_.word_emb.setZero(static_cast<Eigen::Index>(hp_.word_dim),
                           static_cast<Eigen::Index>(vocab_.num_words()));
  params_.pretrained_emb.setZero(static_cast<Eigen::Index>(pretrained_dim),
                                 pretrained_dim > 0
                                     ? static_cast<Eigen::Index>(pretrained_words_.size()) + 2
                                     : 0);
  params_.pos_emb.setZero(static_cast<Eigen::Index>(hp_.pos_dim),
                          static_cast<Eigen::Index>(vocab_.num_pos()));
  params_.lstm_fwd.clear();
  params_.lstm_bwd.clear();
  Eigen::Index in = static_cast<Eigen::Index>(input_dim());
  for (std::size_t l = 0; l < hp_.lstm_layers; ++l) {
    params_.lstm_fwd.emplace_back().resize(in, h);
    params_.lstm_bwd.emplace_back().resize(in, h);
    in = 2 * h;
  }
  params_.pad.setZero(2 * h);
  const auto f = static_cast<Eigen::Index>(feature_dim());
  params_.mlp.resize(f, static_cast<Eigen::Index>(hp_.mlp_hidden),
                     static_cast<Eigen::Index>(num_transitions()));
  params_.conj_mlp.resize(f + static_cast<Eigen::Index>(kConjFeatureWidth),
                          static_cast<Eigen::Index>(hp_.conj_hidden), 1);
}

Model Model::create(std::span<const Sentence> train, const Hyperparams& hp,
                    const EmbeddingTable& pretrained, std::uint64_t seed) {
  return Model(hp, Vocabulary::from_corpus(train), LabelInventory::from_corpus(train), pretrained,
               seed);
}

int Model::pretrained_index(std::string_view form) const {
  if (pretrained_words_.empty()) return Vocabulary::kUnk;
  if (auto it = pretrained_index_.find(std::string(form)); it != pretrained_index_.end()) {
    return it->second;
  }
  if (auto it = pretrained_index_.find(utf8::to_lower(form)); it != pretrained_index_.end()) {
    return it->second;
  }
  return Vocabulary::kUnk;
}

std::optional<std::size_t> Model::right_conj_index() const {
  if (!hp_.use_conj_features) return std::nullopt;
  const auto conj = labels_.conj_index();
  if (!conj) return std::nullopt;
  return Transition::right(*conj).index(labels_.size());
}

// ---------------------------------------------------------------------------
// Encoding and scoring

TokenIndices lookup_indices(const Sentence& s, const Model& m) {
  TokenIndices idx;
  const auto n = s.size() + 1;
  idx.word.reserve(n);
  idx.pretrained.reserve(n);
  idx.pos.reserve(n);
  idx.word.push_back(Vocabulary::kRoot);
  idx.pretrained.push_back(m.pretrained_words().empty() ? Vocabulary::kUnk : Vocabulary::kRoot);
  idx.pos.push_back(Vocabulary::kRoot);
  for (const auto& t : s.tokens) {
    idx.word.push_back(m.vocab().word_index(t.form));
    idx.pretrained.push_back(m.pretrained_index(t.form));
    idx.pos.push_back(m.vocab().pos_index(t.pos));
  }
  return idx;
}

EncodedSentence encode(const TokenIndices& idx, const Model& m, EncoderCache* cache) {
  const auto& p = m.params();
  const auto steps = static_cast<Eigen::Index>(idx.word.size());
  const auto dw = p.word_emb.rows();
  const auto dp = p.pretrained_emb.rows();
  const auto dt = p.pos_emb.rows();
  Eigen::MatrixXd x(dw + dp + dt, steps);
  for (Eigen::Index t = 0; t < steps; ++t) {
    const auto k = static_cast<std::size_t>(t);
    x.col(t).segment(0, dw) = p.word_emb.col(idx.word[k]);
    if (dp > 0) x.col(t).segment(dw, dp) = p.pretrained_emb.col(idx.pretrained[k]);
    x.col(t).segment(dw + dp, dt) = p.pos_emb.col(idx.pos[k]);
  }
  if (cache) {
    cache->layer_inputs.clear();
    cache->fwd.assign(p.lstm_fwd.size(), {});
    cache->bwd.assign(p.lstm_bwd.size(), {});
  }
  for (std::size_t l = 0; l < p.lstm_fwd.size(); ++l) {
    const auto h = p.lstm_fwd[l].hidden();
    Eigen::MatrixXd out(2 * h, steps);
    out.topRows(h) = nn::lstm_forward(p.lstm_fwd[l], x, false, cache ? &cache->fwd[l] : nullptr);
    out.bottomRows(h) = nn::lstm_forward(p.lstm_bwd[l], x, true, cache ? &cache->bwd[l] : nullptr);
    if (cache) cache->layer_inputs.push_back(std::move(x));
    x = std::move(out);
  }
  return EncodedSentence{std::move(x), p.pad};
}

EncodedSentence encode(const Sentence& s, const Model& m) { return encode(lookup_indices(s, m), m); }

std::array<int, 4> feature_slots(const ParseConfiguration& c) {
  return {c.from_top(0), c.from_top(1), c.from_top(2), c.buffer_empty() ? -1 : c.buffer_front()};
}

Eigen::VectorXd config_features(const ParseConfiguration& c, const EncodedSentence& e) {
  const auto d = e.dim();
  Eigen::VectorXd f(4 * d);
  const auto slots = feature_slots(c);
  for (Eigen::Index k = 0; k < 4; ++k) {
    const int node = slots[static_cast<std::size_t>(k)];
    if (node < 0) {
      f.segment(k * d, d) = e.pad;
    } else {
      f.segment(k * d, d) = e.context.col(node);
    }
  }
  return f;
}

Eigen::VectorXd score_transitions(const Eigen::VectorXd& features, const Model& m) {
  return nn::mlp_forward(m.params().mlp, features);
}

Eigen::VectorXd conj_input(const Eigen::VectorXd& features, const ConjFeatureVector& cf) {
  Eigen::VectorXd x(features.size() + static_cast<Eigen::Index>(kConjFeatureWidth));
  x.head(features.size()) = features;
  const auto enc = scorer_encoding(cf);
  for (std::size_t k = 0; k < kConjFeatureWidth; ++k) {
    x(features.size() + static_cast<Eigen::Index>(k)) = enc[k];
  }
  return x;
}

double conj_score(const Eigen::VectorXd& features, const ConjFeatureVector& cf, const Model& m) {
  return nn::mlp_forward(m.params().conj_mlp, conj_input(features, cf))(0);
}

ConjFeatureVector right_arc_features(const ParseConfiguration& c, const Sentence& s,
                                     const FeatureResources& res) {
  const int head = c.from_top(1);
  const int dep = c.from_top(0);
  if (head <= 0 || dep <= 0) return {};
  return extract(s.token(head), s.token(dep), res);
}

Eigen::VectorXd augmented_scores(const ParseConfiguration& c, const EncodedSentence& e,
                                 const Sentence& s, const Model& m, const FeatureResources& res) {
  const Eigen::VectorXd f = config_features(c, e);
  Eigen::VectorXd scores = score_transitions(f, m);
  if (const auto rc = m.right_conj_index(); rc && c.stack().size() >= 2) {
    scores(static_cast<Eigen::Index>(*rc)) += conj_score(f, right_arc_features(c, s, res), m);
  }
  return scores;
}

std::size_t best_legal(const Eigen::VectorXd& scores, const Legality& legal, std::size_t num_labels) {
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  bool found = false;
  const std::size_t total = num_transitions(num_labels);
  for (std::size_t i = 0; i < total; ++i) {
    if (!legal.allows(Transition::from_index(i, num_labels))) continue;
    const double v = scores(static_cast<Eigen::Index>(i));
    if (!found || v > best_score) {
      best = i;
      best_score = v;
      found = true;
    }
  }
  if (!found) throw std::logic_error("no legal transition");
  return best;
}

Sentence greedy_parse(const Sentence& s, const Model& m, const FeatureResources& res) {
  Sentence out = s;
  const auto e = encode(s, m);
  const bool single_root = m.hyper().single_root;
  const std::size_t num_labels = m.labels().size();
  auto c = initial_config(s);
  std::size_t steps = 0;
  while (!is_terminal(c)) {
    const auto legal = legality(c, single_root);
    if (!legal.any() || steps++ > 2 * s.size()) {
      throw std::logic_error("decoder stuck before reaching a terminal configuration");
    }
    const auto scores = augmented_scores(c, e, s, m, res);
    c.apply(Transition::from_index(best_legal(scores, legal, num_labels), num_labels), single_root);
  }
  for (auto& t : out.tokens) {
    t.pred_head = c.head_of(t.id);
    t.pred_label = m.labels().label(c.label_of(t.id));
  }
  return out;
}

std::vector<Sentence> greedy_parse(std::span<const Sentence> corpus, const Model& m,
                                   const FeatureResources& res) {
  std::vector<Sentence> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(greedy_parse(s, m, res));
  return out;
}

}  // namespace conjparse
