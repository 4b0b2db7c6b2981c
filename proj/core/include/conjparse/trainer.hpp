#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "conjparse/model.hpp"

namespace conjparse {

/// Gradient of the joint loss. Embedding gradients are kept per touched column.
struct Gradients {
  Parameters dense;  // embedding tables left empty
  std::map<int, Eigen::VectorXd> word;
  std::map<int, Eigen::VectorXd> pretrained;
  std::map<int, Eigen::VectorXd> pos;

  explicit Gradients(const Model& m) : dense(m.params().zeros_like(false)) {}

  /// Full-size copy including embedding tables, shaped like m.params().
  Parameters to_dense(const Model& m) const;
};

/// Sum over every oracle configuration of
///   max(0, 1 - score(gold) + max_{legal t != gold} score(t))
/// with augmented scores. Sentences must be projective. When grad is given the
/// gradient is accumulated into it. inputs overrides the embedding rows per
/// sentence (word dropout); empty means the model's own lookup.
double joint_loss(const Model& m, const FeatureResources& res, std::span<const Sentence> batch,
                  Gradients* grad = nullptr, std::span<const TokenIndices> inputs = {});

/// Adam over the dense tensors; embedding columns are updated only when
/// touched by the batch. Pretrained vectors are skipped when frozen.
class Trainer {
 public:
  Trainer(Model& model, const FeatureResources& res, std::uint64_t seed);

  /// Returns the loss before the update. A zero loss leaves every parameter
  /// and the optimizer state untouched.
  double train_step(std::span<const Sentence> batch);

  /// One pass in a seeded shuffled order; returns the summed loss.
  double train_epoch(std::span<const Sentence> corpus, std::size_t batch_size = 1);

  void set_word_dropout(bool on) { word_dropout_ = on; }
  std::uint64_t steps() const noexcept { return step_; }
  Rng& rng() noexcept { return rng_; }

 private:
  TokenIndices dropped_indices(const Sentence& s);
  void apply_update(const Gradients& g);

  Model& model_;
  const FeatureResources& res_;
  Rng rng_;
  bool word_dropout_ = true;
  std::uint64_t step_ = 0;
  Parameters m1_;
  Parameters m2_;
};

}  // namespace conjparse
