#include "conjparse/trainer.hpp"

#include <cmath>
#include <numeric>

#include "conjparse/error.hpp"

namespace conjparse {

Parameters Gradients::to_dense(const Model& m) const {
  Parameters d = dense;
  const auto& p = m.params();
  d.word_emb.setZero(p.word_emb.rows(), p.word_emb.cols());
  d.pretrained_emb.setZero(p.pretrained_emb.rows(), p.pretrained_emb.cols());
  d.pos_emb.setZero(p.pos_emb.rows(), p.pos_emb.cols());
  for (const auto& [col, v] : word) d.word_emb.col(col) = v;
  for (const auto& [col, v] : pretrained) d.pretrained_emb.col(col) = v;
  for (const auto& [col, v] : pos) d.pos_emb.col(col) = v;
  return d;
}

namespace {

std::size_t legal_count(const Legality& l, std::size_t num_labels) {
  return (l.shift ? 1 : 0) + (l.left ? num_labels : 0) + (l.right ? num_labels : 0);
}

void accumulate(std::map<int, Eigen::VectorXd>& table, int column,
                const Eigen::Ref<const Eigen::VectorXd>& g) {
  auto [it, inserted] = table.try_emplace(column, Eigen::VectorXd::Zero(g.size()));
  it->second += g;
}

void backprop_encoder(const Model& m, const TokenIndices& idx, const EncoderCache& cache,
                      Eigen::MatrixXd d_out, Gradients& grad) {
  const auto& p = m.params();
  for (std::size_t l = p.lstm_fwd.size(); l-- > 0;) {
    const auto& x = cache.layer_inputs[l];
    const auto h = p.lstm_fwd[l].hidden();
    Eigen::MatrixXd d_x = Eigen::MatrixXd::Zero(x.rows(), x.cols());
    nn::lstm_backward(p.lstm_fwd[l], x, false, cache.fwd[l], d_out.topRows(h),
                      grad.dense.lstm_fwd[l], d_x);
    nn::lstm_backward(p.lstm_bwd[l], x, true, cache.bwd[l], d_out.bottomRows(h),
                      grad.dense.lstm_bwd[l], d_x);
    d_out = std::move(d_x);
  }
  const auto dw = p.word_emb.rows();
  const auto dp = p.pretrained_emb.rows();
  const auto dt = p.pos_emb.rows();
  for (Eigen::Index t = 0; t < d_out.cols(); ++t) {
    const auto k = static_cast<std::size_t>(t);
    accumulate(grad.word, idx.word[k], d_out.col(t).segment(0, dw));
    if (dp > 0) accumulate(grad.pretrained, idx.pretrained[k], d_out.col(t).segment(dw, dp));
    accumulate(grad.pos, idx.pos[k], d_out.col(t).segment(dw + dp, dt));
  }
}

double sentence_loss(const Model& m, const FeatureResources& res, const Sentence& s,
                     const TokenIndices& idx, Gradients* grad) {
  if (!is_projective(s)) {
    throw OracleError("training sentence" + (s.id ? " '" + *s.id + "'" : std::string()) +
                      " is not projective");
  }
  const auto& p = m.params();
  const auto& labels = m.labels();
  const std::size_t num_labels = labels.size();
  const bool single_root = m.hyper().single_root;
  const auto rc = m.right_conj_index();

  EncoderCache cache;
  const auto enc = encode(idx, m, grad ? &cache : nullptr);
  const auto d = enc.dim();
  Eigen::MatrixXd d_ctx;
  if (grad) d_ctx.setZero(d, enc.context.cols());

  double total = 0.0;
  Eigen::VectorXd hidden;
  Eigen::VectorXd conj_hidden;
  auto c = initial_config(s);
  while (!is_terminal(c)) {
    const auto gold = detail::static_oracle_unchecked(c, s, labels);
    const auto legal = legality(c, single_root);
    if (legal_count(legal, num_labels) > 1) {
      const Eigen::VectorXd f = config_features(c, enc);
      Eigen::VectorXd scores = nn::mlp_forward(p.mlp, f, &hidden);
      const bool with_conj = rc && c.stack().size() >= 2;
      Eigen::VectorXd conj_x;
      if (with_conj) {
        conj_x = conj_input(f, right_arc_features(c, s, res));
        scores(static_cast<Eigen::Index>(*rc)) += nn::mlp_forward(p.conj_mlp, conj_x, &conj_hidden)(0);
      }
      const std::size_t gold_index = gold.index(num_labels);
      std::size_t viol = 0;
      double viol_score = 0.0;
      bool found = false;
      for (std::size_t i = 0; i < num_transitions(num_labels); ++i) {
        if (i == gold_index || !legal.allows(Transition::from_index(i, num_labels))) continue;
        const double v = scores(static_cast<Eigen::Index>(i));
        if (!found || v > viol_score) {
          viol = i;
          viol_score = v;
          found = true;
        }
      }
      const double margin = 1.0 - scores(static_cast<Eigen::Index>(gold_index)) + viol_score;
      if (margin > 0.0) {
        total += margin;
        if (grad) {
          Eigen::VectorXd d_scores = Eigen::VectorXd::Zero(scores.size());
          d_scores(static_cast<Eigen::Index>(gold_index)) -= 1.0;
          d_scores(static_cast<Eigen::Index>(viol)) += 1.0;
          Eigen::VectorXd d_f = nn::mlp_backward(p.mlp, f, hidden, d_scores, grad->dense.mlp);
          if (with_conj) {
            const double d_conj = d_scores(static_cast<Eigen::Index>(*rc));
            if (d_conj != 0.0) {
              const Eigen::VectorXd dx = nn::mlp_backward(p.conj_mlp, conj_x, conj_hidden,
                                                          Eigen::VectorXd::Constant(1, d_conj),
                                                          grad->dense.conj_mlp);
              d_f += dx.head(f.size());
            }
          }
          const auto slots = feature_slots(c);
          for (Eigen::Index k = 0; k < 4; ++k) {
            const int node = slots[static_cast<std::size_t>(k)];
            if (node < 0) {
              grad->dense.pad += d_f.segment(k * d, d);
            } else {
              d_ctx.col(node) += d_f.segment(k * d, d);
            }
          }
        }
      }
    }
    c.apply(gold, single_root);
  }
  if (grad) backprop_encoder(m, idx, cache, std::move(d_ctx), *grad);
  return total;
}

}  // namespace

double joint_loss(const Model& m, const FeatureResources& res, std::span<const Sentence> batch,
                  Gradients* grad, std::span<const TokenIndices> inputs) {
  if (!inputs.empty() && inputs.size() != batch.size()) {
    throw std::invalid_argument("one TokenIndices per sentence is required");
  }
  double total = 0.0;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    if (inputs.empty()) {
      total += sentence_loss(m, res, batch[k], lookup_indices(batch[k], m), grad);
    } else {
      total += sentence_loss(m, res, batch[k], inputs[k], grad);
    }
  }
  return total;
}

// ---------------------------------------------------------------------------

Trainer::Trainer(Model& model, const FeatureResources& res, std::uint64_t seed)
    : model_(model),
      res_(res),
      rng_(seed),
      m1_(model.params().zeros_like(true)),
      m2_(model.params().zeros_like(true)) {}

TokenIndices Trainer::dropped_indices(const Sentence& s) {
  auto idx = lookup_indices(s, model_);
  if (!word_dropout_) return idx;
  const double alpha = model_.hyper().word_dropout_alpha;
  for (std::size_t t = 1; t < idx.word.size(); ++t) {
    const int w = idx.word[t];
    if (w == Vocabulary::kUnk) continue;
    const double count = static_cast<double>(model_.vocab().word_count(w));
    if (rng_.uniform() < alpha / (alpha + count)) idx.word[t] = Vocabulary::kUnk;
  }
  return idx;
}

double Trainer::train_step(std::span<const Sentence> batch) {
  std::vector<TokenIndices> inputs;
  inputs.reserve(batch.size());
  for (const auto& s : batch) inputs.push_back(dropped_indices(s));
  Gradients g(model_);
  const double loss = joint_loss(model_, res_, batch, &g, inputs);
  if (loss > 0.0) apply_update(g);
  return loss;
}

double Trainer::train_epoch(std::span<const Sentence> corpus, std::size_t batch_size) {
  if (batch_size == 0) batch_size = 1;
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng_.shuffle(std::span<std::size_t>(order));
  double total = 0.0;
  std::vector<Sentence> batch;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    batch.clear();
    for (std::size_t k = start; k < std::min(order.size(), start + batch_size); ++k) {
      batch.push_back(corpus[order[k]]);
    }
    total += train_step(batch);
  }
  return total;
}

void Trainer::apply_update(const Gradients& g) {
  ++step_;
  const auto& hp = model_.hyper();
  const double b1 = hp.adam_beta1;
  const double b2 = hp.adam_beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  const double lr = hp.learning_rate;
  const double eps = hp.adam_eps;

  auto update = [&](double& w, double& m, double& v, double grad) {
    m = b1 * m + (1.0 - b1) * grad;
    v = b2 * v + (1.0 - b2) * grad * grad;
    w -= lr * (m / c1) / (std::sqrt(v / c2) + eps);
  };

  auto params = model_.params().tensors();
  auto m1 = m1_.tensors();
  auto m2 = m2_.tensors();
  const auto grads = g.dense.tensors();
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& t = params[i];
    if (t.group == ParamGroup::embeddings) {
      const std::map<int, Eigen::VectorXd>* sparse = nullptr;
      if (t.name == "word_emb") sparse = &g.word;
      if (t.name == "pos_emb") sparse = &g.pos;
      if (t.name == "pretrained_emb" && !hp.freeze_pretrained) sparse = &g.pretrained;
      if (!sparse) continue;
      for (const auto& [col, v] : *sparse) {
        const auto offset = static_cast<std::size_t>(col) * static_cast<std::size_t>(t.rows);
        for (Eigen::Index r = 0; r < t.rows; ++r) {
          const auto k = offset + static_cast<std::size_t>(r);
          update(t.data[k], m1[i].data[k], m2[i].data[k], v(r));
        }
      }
      continue;
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
      update(t.data[k], m1[i].data[k], m2[i].data[k], grads[i].data[k]);
    }
  }
}

}  // namespace conjparse
