#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "conjparse/conj_features.hpp"
#include "conjparse/nn.hpp"
#include "conjparse/random.hpp"
#include "conjparse/transition_system.hpp"
#include "conjparse/treebank.hpp"

namespace conjparse {

/// Architecture and optimizer settings; every field is stored in the model file.
struct Hyperparams {
  std::size_t word_dim = 100;
  std::size_t pos_dim = 25;
  std::size_t lstm_layers = 2;
  std::size_t lstm_hidden = 125;
  std::size_t mlp_hidden = 100;
  std::size_t conj_hidden = 100;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double word_dropout_alpha = 0.25;
  bool use_conj_features = true;
  bool freeze_pretrained = true;
  bool single_root = true;

  bool operator==(const Hyperparams&) const = default;
};

/// Word and POS vocabularies. Index 0 is UNK and index 1 the root symbol in both.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kRoot = 1;

  Vocabulary();
  static Vocabulary from_corpus(std::span<const Sentence> corpus);

  void add_word(std::string_view form, std::size_t count);
  void add_pos(std::string_view tag);

  int word_index(std::string_view form) const;
  int pos_index(std::string_view tag) const;
  std::size_t word_count(int index) const { return counts_.at(static_cast<std::size_t>(index)); }

  std::size_t num_words() const noexcept { return words_.size(); }
  std::size_t num_pos() const noexcept { return tags_.size(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  const std::vector<std::string>& pos_tags() const noexcept { return tags_; }

  bool operator==(const Vocabulary& o) const { return words_ == o.words_ && counts_ == o.counts_ && tags_ == o.tags_; }

 private:
  std::vector<std::string> words_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, int> word_index_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, int> tag_index_;
};

enum class ParamGroup { embeddings, lstm, mlp, conj_mlp };
const char* to_string(ParamGroup g);

struct TensorView {
  std::string name;
  ParamGroup group;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
  std::size_t size() const { return static_cast<std::size_t>(rows * cols); }
};

struct ConstTensorView {
  std::string name;
  ParamGroup group;
  const double* data;
  Eigen::Index rows;
  Eigen::Index cols;
  std::size_t size() const { return static_cast<std::size_t>(rows * cols); }
};

/// All trainable tensors. Embedding tables hold one column per entry.
struct Parameters {
  Eigen::MatrixXd word_emb;
  Eigen::MatrixXd pretrained_emb;
  Eigen::MatrixXd pos_emb;
  std::vector<nn::LstmParams> lstm_fwd;
  std::vector<nn::LstmParams> lstm_bwd;
  Eigen::VectorXd pad;
  nn::Mlp mlp;
  nn::Mlp conj_mlp;

  /// Fixed order: embeddings, LSTM layers, pad, transition MLP, conjunction MLP.
  std::vector<TensorView> tensors();
  std::vector<ConstTensorView> tensors() const;

  /// Same shapes, all zero; embedding tables are left empty when requested.
  Parameters zeros_like(bool with_embeddings = true) const;

  bool operator==(const Parameters& o) const;
};

/// Context vectors for nodes 0..n (column 0 is the root) plus the padding vector.
struct EncodedSentence {
  Eigen::MatrixXd context;
  Eigen::VectorXd pad;

  Eigen::Index dim() const { return context.rows(); }
  Eigen::VectorXd node(int id) const { return id < 0 ? pad : Eigen::VectorXd(context.col(id)); }
};

/// Row indices for nodes 0..n into the three embedding tables.
struct TokenIndices {
  std::vector<int> word;
  std::vector<int> pretrained;
  std::vector<int> pos;
};

class Model {
 public:
  Model() = default;

  /// Glorot-uniform initialization from the seed. Pretrained vectors are
  /// copied from the table; their UNK and root columns stay zero.
  Model(Hyperparams hp, Vocabulary vocab, LabelInventory labels, const EmbeddingTable& pretrained,
        std::uint64_t seed);

  static Model create(std::span<const Sentence> train, const Hyperparams& hp,
                      const EmbeddingTable& pretrained, std::uint64_t seed);

  const Hyperparams& hyper() const noexcept { return hp_; }
  Hyperparams& hyper() noexcept { return hp_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }
  const LabelInventory& labels() const noexcept { return labels_; }
  const Parameters& params() const noexcept { return params_; }
  Parameters& params() noexcept { return params_; }

  /// Words of the pretrained table; column k + 2 of pretrained_emb holds word k.
  const std::vector<std::string>& pretrained_words() const noexcept { return pretrained_words_; }
  int pretrained_index(std::string_view form) const;

  std::size_t pretrained_dim() const { return static_cast<std::size_t>(params_.pretrained_emb.rows()); }
  std::size_t input_dim() const { return hp_.word_dim + pretrained_dim() + hp_.pos_dim; }
  std::size_t context_dim() const { return 2 * hp_.lstm_hidden; }
  std::size_t feature_dim() const { return 4 * context_dim(); }
  std::size_t num_transitions() const { return conjparse::num_transitions(labels_.size()); }

  /// Index of Right(conj) when conjunction scoring is active.
  std::optional<std::size_t> right_conj_index() const;

  std::map<std::string, std::string>& metadata() noexcept { return metadata_; }
  const std::map<std::string, std::string>& metadata() const noexcept { return metadata_; }

  /// Load-time constructor; parameters are filled in afterwards.
  Model(Hyperparams hp, Vocabulary vocab, LabelInventory labels,
        std::vector<std::string> pretrained_words, std::size_t pretrained_dim);

 private:
  void allocate(std::size_t pretrained_dim);

  Hyperparams hp_;
  Vocabulary vocab_;
  LabelInventory labels_;
  std::vector<std::string> pretrained_words_;
  std::unordered_map<std::string, int> pretrained_index_;
  Parameters params_;
  std::map<std::string, std::string> metadata_;
};

TokenIndices lookup_indices(const Sentence& s, const Model& m);

struct EncoderCache {
  std::vector<Eigen::MatrixXd> layer_inputs;
  std::vector<nn::LstmCache> fwd;
  std::vector<nn::LstmCache> bwd;
};

EncodedSentence encode(const TokenIndices& idx, const Model& m, EncoderCache* cache = nullptr);
EncodedSentence encode(const Sentence& s, const Model& m);

/// Node ids in slot order stack[-1], stack[-2], stack[-3], buffer[0]; -1 = pad.
std::array<int, 4> feature_slots(const ParseConfiguration& c);
Eigen::VectorXd config_features(const ParseConfiguration& c, const EncodedSentence& e);

Eigen::VectorXd score_transitions(const Eigen::VectorXd& features, const Model& m);

/// Input to the conjunction MLP: configuration features followed by the
/// six encoded symmetry features.
Eigen::VectorXd conj_input(const Eigen::VectorXd& features, const ConjFeatureVector& cf);
double conj_score(const Eigen::VectorXd& features, const ConjFeatureVector& cf, const Model& m);

/// Features of the arc a Right transition would add (stack[-2] -> stack[-1]);
/// all-neutral when stack[-2] is the root node.
ConjFeatureVector right_arc_features(const ParseConfiguration& c, const Sentence& s,
                                     const FeatureResources& res);

Eigen::VectorXd augmented_scores(const ParseConfiguration& c, const EncodedSentence& e,
                                 const Sentence& s, const Model& m, const FeatureResources& res);

/// Highest-scoring legal transition; ties go to the lowest index.
std::size_t best_legal(const Eigen::VectorXd& scores, const Legality& legal, std::size_t num_labels);

/// Fills pred_head / pred_label of a copy of s.
Sentence greedy_parse(const Sentence& s, const Model& m, const FeatureResources& res);
std::vector<Sentence> greedy_parse(std::span<const Sentence> corpus, const Model& m,
                                   const FeatureResources& res);

}  // namespace conjparse
