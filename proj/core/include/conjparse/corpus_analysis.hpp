#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "conjparse/conj_features.hpp"
#include "conjparse/treebank.hpp"

namespace conjparse {

/// Gold-edge counts of the symmetry properties for one label.
struct LabelStats {
  std::string label;
  std::size_t total_edges = 0;
  std::size_t cap_both = 0;
  std::size_t cap_one = 0;
  std::size_t suf_ge_3 = 0;
  std::size_t lem_same = 0;
  std::size_t sent_both_nonneutral = 0;

  bool operator==(const LabelStats&) const = default;
};

using WordPair = std::pair<std::string, std::string>;

/// Most frequent lowercased (head, modifier) form pairs of gold edges with
/// `label`; descending count, ties in lexicographic pair order. Edges headed
/// by the root use "<root>" as the head form.
std::vector<std::pair<WordPair, std::size_t>> top_pairs(std::span<const Sentence> corpus,
                                                        const std::string& label, std::size_t k);

/// Per-label counters over every gold edge with a word head, sorted by label.
std::vector<LabelStats> label_stats(std::span<const Sentence> corpus, const FeatureResources& res);

double percent(std::size_t count, std::size_t total);

void write_label_stats_tsv(std::ostream& out, std::span<const LabelStats> stats);
void write_label_stats_markdown(std::ostream& out, std::span<const LabelStats> stats);
void write_top_pairs_tsv(std::ostream& out,
                         std::span<const std::pair<WordPair, std::size_t>> pairs);
void write_top_pairs_markdown(std::ostream& out, const std::string& label,
                              std::span<const std::pair<WordPair, std::size_t>> pairs);

}  // namespace conjparse
