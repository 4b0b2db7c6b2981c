#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "conjparse/treebank.hpp"

namespace conjparse {

/// Symmetry features of one (head, modifier) word pair.
struct ConjFeatureVector {
  bool cap = false;       // both words start with an uppercase letter
  std::size_t suf = 0;    // longest common suffix, in characters
  bool lem = false;       // identical lemmas
  double sym = 0.0;       // cosine similarity of the word embeddings
  int sent_h = 0;         // head sentiment in {-1, 0, 1}
  int sent_m = 0;         // modifier sentiment in {-1, 0, 1}

  bool operator==(const ConjFeatureVector&) const = default;
};

/// SUF values at or above this are clipped before entering the scorer.
inline constexpr std::size_t kSuffixCap = 7;
inline constexpr std::size_t kConjFeatureWidth = 6;

/// (cap, min(suf, 7) / 7, lem, sym, sent_h, sent_m) as scorer input.
std::array<double, kConjFeatureWidth> scorer_encoding(const ConjFeatureVector& f);

class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  /// Words are lowercased; a word in both lists is rejected with ResourceError.
  SentimentLexicon(std::span<const std::string> positive, std::span<const std::string> negative);

  static SentimentLexicon load(std::istream& positive, std::istream& negative);
  static SentimentLexicon load_files(const std::string& positive_path,
                                     const std::string& negative_path);

  bool is_positive(std::string_view lowered) const { return positive_.contains(std::string(lowered)); }
  bool is_negative(std::string_view lowered) const { return negative_.contains(std::string(lowered)); }
  std::size_t size() const noexcept { return positive_.size() + negative_.size(); }

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

enum class PosClass { noun, verb, adj, adv, other };

/// First character of a PTB tag (N, V, J, R); UD tags ADJ/ADV/PROPN/AUX too.
PosClass pos_class(std::string_view pos);
std::optional<PosClass> parse_pos_class(std::string_view text);

/// (lowercased form, POS class) -> lemma, with identity fallback.
class LemmaLexicon {
 public:
  void add(std::string_view form, PosClass cls, std::string_view lemma);

  /// Lines "form<TAB>class<TAB>lemma"; class is n/v/a/r/x or noun/verb/adj/adv/other.
  static LemmaLexicon load(std::istream& in);
  static LemmaLexicon load_file(const std::string& path);

  std::string lookup(std::string_view form, std::string_view pos) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::pair<std::string, PosClass>, std::string> entries_;
};

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim, bool lowercase_fallback = true)
      : dim_(dim), lowercase_fallback_(lowercase_fallback) {}

  /// Text format: optional "count dim" header, then "word v1 ... vd" lines.
  static EmbeddingTable load(std::istream& in, bool lowercase_fallback = true);
  static EmbeddingTable load_file(const std::string& path, bool lowercase_fallback = true);

  void add(std::string_view word, std::span<const double> vector);

  /// Exact match first, then the lowercased word when the fallback is on.
  std::optional<std::span<const double>> lookup(std::string_view word) const;
  std::optional<std::size_t> index_of(std::string_view word) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  std::span<const double> vector(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  bool lowercase_fallback() const noexcept { return lowercase_fallback_; }

 private:
  std::size_t dim_ = 0;
  bool lowercase_fallback_ = true;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

/// Lexical resources behind the features; immutable once loaded.
struct FeatureResources {
  LemmaLexicon lemmas;
  SentimentLexicon sentiment;
  EmbeddingTable embeddings;
};

bool cap_feature(std::string_view head, std::string_view modifier);
std::size_t suffix_feature(std::string_view head, std::string_view modifier);
bool lemma_feature(std::string_view head, std::string_view head_pos, std::string_view modifier,
                   std::string_view modifier_pos, const LemmaLexicon& lex);
double sym_feature(std::string_view head, std::string_view modifier, const EmbeddingTable& emb);
int sentiment_feature(std::string_view word, const SentimentLexicon& lex);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

ConjFeatureVector extract(const Token& head, const Token& modifier, const FeatureResources& res);

}  // namespace conjparse
