#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace conjparse {

enum class ConllFormat { conllx, conllu };

ConllFormat parse_format(std::string_view name);

struct Token {
  int id = 0;
  std::string form;
  std::string pos;
  std::optional<std::string> cpos;
  std::optional<std::string> lemma;
  int gold_head = 0;
  std::string gold_label;
  std::optional<int> pred_head;
  std::optional<std::string> pred_label;

  bool operator==(const Token&) const = default;
};

/// Tokens 1..n; node 0 is the implicit root and has no Token.
struct Sentence {
  std::vector<Token> tokens;
  std::optional<std::string> id;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  const Token& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }
  Token& token(int id) { return tokens.at(static_cast<std::size_t>(id - 1)); }

  bool operator==(const Sentence&) const = default;
};

/// Ordered set of dependency labels; transitions are enumerated against it.
class LabelInventory {
 public:
  LabelInventory() = default;
  explicit LabelInventory(std::vector<std::string> labels);

  /// Sorted unique gold labels of the corpus.
  static LabelInventory from_corpus(std::span<const Sentence> corpus);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::optional<std::size_t> conj_index() const { return index_of("conj"); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Throws StructureError unless gold heads form one tree rooted at 0 with
/// exactly one root dependent.
void validate_tree(const Sentence& s, std::size_t sentence_index = 0);

/// Same check over an arbitrary head vector (heads[i] is the head of token i+1).
bool is_single_rooted_tree(std::span<const int> heads);

/// strict: heads must form a single-rooted tree. heads_in_range: any head in
/// [0, n] is accepted, as in prediction files from a multi-root parser.
enum class TreeCheck { strict, heads_in_range };

std::vector<Sentence> read_conll(std::istream& in, ConllFormat format,
                                 TreeCheck check = TreeCheck::strict);
std::vector<Sentence> read_conll_file(const std::string& path, ConllFormat format,
                                      TreeCheck check = TreeCheck::strict);

/// Throws std::invalid_argument naming the sentence and token when
/// use_predicted is set and a prediction is missing.
void write_conll(std::ostream& out, std::span<const Sentence> sentences, bool use_predicted,
                 ConllFormat format = ConllFormat::conllx);

bool is_projective(const Sentence& s);
bool is_projective(std::span<const int> heads);

}  // namespace conjparse
