#include "conjparse/conj_features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <stdexcept>

#include "conjparse/error.hpp"
#include "conjparse/utf8.hpp"

namespace conjparse {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string> read_word_list(std::istream& in) {
  std::vector<std::string> words;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    words.emplace_back(line);
  }
  return words;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open '" + path + "'");
  return in;
}

void require_nonempty(std::string_view head, std::string_view modifier) {
  if (head.empty() || modifier.empty()) {
    throw std::invalid_argument("conjunction features need non-empty words");
  }
}

}  // namespace

std::array<double, kConjFeatureWidth> scorer_encoding(const ConjFeatureVector& f) {
  const double suf = static_cast<double>(std::min(f.suf, kSuffixCap)) / static_cast<double>(kSuffixCap);
  return {f.cap ? 1.0 : 0.0, suf, f.lem ? 1.0 : 0.0, f.sym, static_cast<double>(f.sent_h),
          static_cast<double>(f.sent_m)};
}

// ---------------------------------------------------------------------------

SentimentLexicon::SentimentLexicon(std::span<const std::string> positive,
                                   std::span<const std::string> negative) {
  for (const auto& w : positive) positive_.insert(utf8::to_lower(w));
  for (const auto& w : negative) {
    auto lowered = utf8::to_lower(w);
    if (positive_.contains(lowered)) {
      throw ResourceError("sentiment word '" + lowered + "' is both positive and negative");
    }
    negative_.insert(std::move(lowered));
  }
}

SentimentLexicon SentimentLexicon::load(std::istream& positive, std::istream& negative) {
  const auto pos = read_word_list(positive);
  const auto neg = read_word_list(negative);
  return SentimentLexicon(pos, neg);
}

SentimentLexicon SentimentLexicon::load_files(const std::string& positive_path,
                                              const std::string& negative_path) {
  auto pos = open_or_throw(positive_path);
  auto neg = open_or_throw(negative_path);
  return load(pos, neg);
}

// ---------------------------------------------------------------------------

PosClass pos_class(std::string_view pos) {
  if (pos == "ADJ") return PosClass::adj;
  if (pos == "ADV") return PosClass::adv;
  if (pos == "PROPN") return PosClass::noun;
  if (pos == "AUX") return PosClass::verb;
  if (pos.empty()) return PosClass::other;
  switch (pos.front()) {
    case 'N':
      return PosClass::noun;
    case 'V':
      return PosClass::verb;
    case 'J':
      return PosClass::adj;
    case 'R':
      return PosClass::adv;
    default:
      return PosClass::other;
  }
}

std::optional<PosClass> parse_pos_class(std::string_view text) {
  if (text == "n" || text == "noun") return PosClass::noun;
  if (text == "v" || text == "verb") return PosClass::verb;
  if (text == "a" || text == "s" || text == "adj") return PosClass::adj;
  if (text == "r" || text == "adv") return PosClass::adv;
  if (text == "x" || text == "other") return PosClass::other;
  return std::nullopt;
}

void LemmaLexicon::add(std::string_view form, PosClass cls, std::string_view lemma) {
  entries_.insert_or_assign({utf8::to_lower(form), cls}, utf8::to_lower(lemma));
}

LemmaLexicon LemmaLexicon::load(std::istream& in) {
  LemmaLexicon lex;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 3) {
      throw ParseError("lemma lexicon needs 3 tab-separated columns", line_no);
    }
    const auto cls = parse_pos_class(cols[1]);
    if (!cls) throw ParseError("unknown POS class '" + std::string(cols[1]) + "'", line_no);
    lex.add(cols[0], *cls, cols[2]);
  }
  return lex;
}

LemmaLexicon LemmaLexicon::load_file(const std::string& path) {
  auto in = open_or_throw(path);
  return load(in);
}

std::string LemmaLexicon::lookup(std::string_view form, std::string_view pos) const {
  auto lowered = utf8::to_lower(form);
  const auto it = entries_.find({lowered, pos_class(pos)});
  return it == entries_.end() ? lowered : it->second;
}

// ---------------------------------------------------------------------------

EmbeddingTable EmbeddingTable::load(std::istream& in, bool lowercase_fallback) {
  EmbeddingTable table(0, lowercase_fallback);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared;
  std::vector<double> values;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    const auto cols = split_ws(line);
    if (line_no == 1 && cols.size() == 2) {
      std::size_t count = 0;
      std::size_t dim = 0;
      const auto r1 = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), count);
      const auto r2 = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), dim);
      if (r1.ec == std::errc() && r2.ec == std::errc() &&
          r1.ptr == cols[0].data() + cols[0].size() && r2.ptr == cols[1].data() + cols[1].size()) {
        declared = dim;
        continue;
      }
    }
    if (cols.size() < 2) throw ParseError("embedding line has no vector", line_no);
    const std::size_t dim = cols.size() - 1;
    if (table.dim_ == 0) table.dim_ = declared.value_or(dim);
    if (dim != table.dim_) {
      throw ParseError("embedding has " + std::to_string(dim) + " values, expected " +
                           std::to_string(table.dim_),
                       line_no);
    }
    values.assign(dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const auto& c = cols[k + 1];
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), values[k]);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw ParseError("bad embedding value '" + std::string(c) + "'", line_no);
      }
    }
    table.add(cols[0], values);
  }
  if (table.dim_ == 0 && declared) table.dim_ = *declared;
  return table;
}

EmbeddingTable EmbeddingTable::load_file(const std::string& path, bool lowercase_fallback) {
  auto in = open_or_throw(path);
  return load(in, lowercase_fallback);
}

void EmbeddingTable::add(std::string_view word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw DimensionError("embedding for '" + std::string(word) + "' has length " +
                         std::to_string(vector.size()) + ", table dimension is " +
                         std::to_string(dim_));
  }
  if (!index_.emplace(std::string(word), words_.size()).second) return;
  words_.emplace_back(word);
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::optional<std::size_t> EmbeddingTable::index_of(std::string_view word) const {
  if (auto it = index_.find(std::string(word)); it != index_.end()) return it->second;
  if (lowercase_fallback_) {
    if (auto it = index_.find(utf8::to_lower(word)); it != index_.end()) return it->second;
  }
  return std::nullopt;
}

std::optional<std::span<const double>> EmbeddingTable::lookup(std::string_view word) const {
  const auto i = index_of(word);
  if (!i) return std::nullopt;
  return vector(*i);
}

// ---------------------------------------------------------------------------

bool cap_feature(std::string_view head, std::string_view modifier) {
  require_nonempty(head, modifier);
  const auto h = utf8::decode(head);
  const auto m = utf8::decode(modifier);
  return utf8::is_upper(h.front()) && utf8::is_upper(m.front());
}

std::size_t suffix_feature(std::string_view head, std::string_view modifier) {
  require_nonempty(head, modifier);
  const auto h = utf8::decode(head);
  const auto m = utf8::decode(modifier);
  std::size_t n = 0;
  while (n < h.size() && n < m.size() && h[h.size() - 1 - n] == m[m.size() - 1 - n]) ++n;
  return n;
}

bool lemma_feature(std::string_view head, std::string_view head_pos, std::string_view modifier,
                   std::string_view modifier_pos, const LemmaLexicon& lex) {
  return lex.lookup(head, head_pos) == lex.lookup(modifier, modifier_pos);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("cosine of vectors with different lengths");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double sym_feature(std::string_view head, std::string_view modifier, const EmbeddingTable& emb) {
  const auto h = emb.lookup(head);
  const auto m = emb.lookup(modifier);
  if (!h || !m) return 0.0;
  return cosine_similarity(*h, *m);
}

int sentiment_feature(std::string_view word, const SentimentLexicon& lex) {
  const auto lowered = utf8::to_lower(word);
  if (lex.is_positive(lowered)) return 1;
  if (lex.is_negative(lowered)) return -1;
  return 0;
}

ConjFeatureVector extract(const Token& head, const Token& modifier, const FeatureResources& res) {
  ConjFeatureVector f;
  f.cap = cap_feature(head.form, modifier.form);
  f.suf = suffix_feature(head.form, modifier.form);
  f.lem = lemma_feature(head.form, head.pos, modifier.form, modifier.pos, res.lemmas);
  f.sym = sym_feature(head.form, modifier.form, res.embeddings);
  f.sent_h = sentiment_feature(head.form, res.sentiment);
  f.sent_m = sentiment_feature(modifier.form, res.sentiment);
  return f;
}

}  // namespace conjparse
