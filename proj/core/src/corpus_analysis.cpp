#include "conjparse/corpus_analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <ostream>

#include "conjparse/utf8.hpp"

namespace conjparse {

std::vector<std::pair<WordPair, std::size_t>> top_pairs(std::span<const Sentence> corpus,
                                                        const std::string& label, std::size_t k) {
  std::map<WordPair, std::size_t> counts;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) {
      if (t.gold_label != label) continue;
      std::string head = t.gold_head > 0 ? utf8::to_lower(s.token(t.gold_head).form) : "<root>";
      ++counts[{std::move(head), utf8::to_lower(t.form)}];
    }
  }
  std::vector<std::pair<WordPair, std::size_t>> out(counts.begin(), counts.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<LabelStats> label_stats(std::span<const Sentence> corpus,
                                    const FeatureResources& res) {
  std::map<std::string, LabelStats> by_label;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) {
      if (t.gold_head <= 0) continue;
      const auto& head = s.token(t.gold_head);
      auto& st = by_label[t.gold_label];
      st.label = t.gold_label;
      ++st.total_edges;
      const auto f = extract(head, t, res);
      const bool cap_h = utf8::is_upper(utf8::decode(head.form).front());
      const bool cap_m = utf8::is_upper(utf8::decode(t.form).front());
      st.cap_both += f.cap;
      st.cap_one += cap_h != cap_m;
      st.suf_ge_3 += f.suf >= 3;
      st.lem_same += f.lem;
      st.sent_both_nonneutral += f.sent_h != 0 && f.sent_m != 0;
    }
  }
  std::vector<LabelStats> out;
  out.reserve(by_label.size());
  for (auto& [_, st] : by_label) out.push_back(std::move(st));
  return out;
}

double percent(std::size_t count, std::size_t total) {
  return total ? 100.0 * static_cast<double>(count) / static_cast<double>(total) : 0.0;
}

void write_label_stats_tsv(std::ostream& out, std::span<const LabelStats> stats) {
  out << std::fixed << std::setprecision(1);
  out << "label\tedges\tcap_both\tcap_one\tsuf_ge_3\tlem_same\tsent_both\t"
         "cap_both_pct\tcap_one_pct\tsuf_ge_3_pct\tlem_same_pct\tsent_both_pct\n";
  for (const auto& s : stats) {
    out << s.label << '\t' << s.total_edges << '\t' << s.cap_both << '\t' << s.cap_one << '\t'
        << s.suf_ge_3 << '\t' << s.lem_same << '\t' << s.sent_both_nonneutral << '\t'
        << percent(s.cap_both, s.total_edges) << '\t' << percent(s.cap_one, s.total_edges) << '\t'
        << percent(s.suf_ge_3, s.total_edges) << '\t' << percent(s.lem_same, s.total_edges)
        << '\t' << percent(s.sent_both_nonneutral, s.total_edges) << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_label_stats_markdown(std::ostream& out, std::span<const LabelStats> stats) {
  out << std::fixed << std::setprecision(1);
  out << "| label | edges | CAP both | CAP one | SUF>=3 | LEM | SENT pair |\n";
  out << "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& s : stats) {
    out << "| " << s.label << " | " << s.total_edges << " | "
        << percent(s.cap_both, s.total_edges) << "% | " << percent(s.cap_one, s.total_edges)
        << "% | " << percent(s.suf_ge_3, s.total_edges) << "% | "
        << percent(s.lem_same, s.total_edges) << "% | "
        << percent(s.sent_both_nonneutral, s.total_edges) << "% |\n";
  }
  out.unsetf(std::ios::floatfield);
}

void write_top_pairs_tsv(std::ostream& out,
                         std::span<const std::pair<WordPair, std::size_t>> pairs) {
  out << "rank\thead\tmodifier\tcount\n";
  std::size_t rank = 0;
  for (const auto& [pair, count] : pairs) {
    out << ++rank << '\t' << pair.first << '\t' << pair.second << '\t' << count << '\n';
  }
}

void write_top_pairs_markdown(std::ostream& out, const std::string& label,
                              std::span<const std::pair<WordPair, std::size_t>> pairs) {
  out << "| # | " << label << " pair | count |\n|---:|---|---:|\n";
  std::size_t rank = 0;
  for (const auto& [pair, count] : pairs) {
    out << "| " << ++rank << " | (" << pair.first << ", " << pair.second << ") | " << count
        << " |\n";
  }
}

}  // namespace conjparse
