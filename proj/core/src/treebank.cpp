#include "conjparse/treebank.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "conjparse/error.hpp"

namespace conjparse {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return cols;
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::optional<std::string> optional_field(std::string_view text) {
  if (text == "_" || text.empty()) return std::nullopt;
  return std::string(text);
}

}  // namespace

ConllFormat parse_format(std::string_view name) {
  if (name == "conllx") return ConllFormat::conllx;
  if (name == "conllu") return ConllFormat::conllu;
  throw std::invalid_argument("unknown CoNLL format '" + std::string(name) + "'");
}

LabelInventory::LabelInventory(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw std::invalid_argument("duplicate label '" + labels_[i] + "'");
    }
  }
}

LabelInventory LabelInventory::from_corpus(std::span<const Sentence> corpus) {
  std::set<std::string> unique;
  for (const auto& s : corpus) {
    for (const auto& t : s.tokens) unique.insert(t.gold_label);
  }
  return LabelInventory(std::vector<std::string>(unique.begin(), unique.end()));
}

std::optional<std::size_t> LabelInventory::index_of(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Returns an error message, or empty when heads form a single-rooted tree.
std::string range_problem(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int i = 0; i < n; ++i) {
    const int h = heads[static_cast<std::size_t>(i)];
    if (h < 0 || h > n) {
      return "token " + std::to_string(i + 1) + " has head " + std::to_string(h) +
             " outside [0, " + std::to_string(n) + "]";
    }
  }
  return {};
}

std::string tree_problem(std::span<const int> heads) {
  if (auto problem = range_problem(heads); !problem.empty()) return problem;
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const int h = heads[static_cast<std::size_t>(i)];
    if (h == i + 1) return "token " + std::to_string(i + 1) + " heads itself";
    if (h == 0) ++roots;
  }
  if (n > 0 && roots != 1) {
    return std::to_string(roots) + " tokens attach to the root (expected 1)";
  }
  // 0 = unvisited, 1 = on current path, 2 = known to reach the root
  std::vector<char> state(static_cast<std::size_t>(n) + 1, 0);
  state[0] = 2;
  std::vector<int> path;
  for (int start = 1; start <= n; ++start) {
    path.clear();
    int node = start;
    while (state[static_cast<std::size_t>(node)] == 0) {
      state[static_cast<std::size_t>(node)] = 1;
      path.push_back(node);
      node = heads[static_cast<std::size_t>(node - 1)];
    }
    if (state[static_cast<std::size_t>(node)] == 1) {
      return "cycle through token " + std::to_string(node);
    }
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
  return {};
}

std::vector<int> gold_heads(const Sentence& s) {
  std::vector<int> heads;
  heads.reserve(s.size());
  for (const auto& t : s.tokens) heads.push_back(t.gold_head);
  return heads;
}

}  // namespace

bool is_single_rooted_tree(std::span<const int> heads) { return tree_problem(heads).empty(); }

void validate_tree(const Sentence& s, std::size_t sentence_index) {
  const auto heads = gold_heads(s);
  if (auto problem = tree_problem(heads); !problem.empty()) {
    throw StructureError(problem, sentence_index);
  }
}

std::vector<Sentence> read_conll(std::istream& in, ConllFormat format, TreeCheck check) {
  std::vector<Sentence> sentences;
  Sentence current;
  std::size_t line_no = 0;
  std::size_t sentence_line = 0;

  auto flush = [&] {
    if (current.tokens.empty()) {
      current = Sentence{};
      return;
    }
    const auto heads = gold_heads(current);
    auto problem = check == TreeCheck::strict ? tree_problem(heads) : range_problem(heads);
    if (!problem.empty()) {
      throw StructureError(problem + " (starting at line " + std::to_string(sentence_line) + ")",
                           sentences.size() + 1);
    }
    sentences.push_back(std::move(current));
    current = Sentence{};
  };

  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      constexpr std::string_view kSentId = "# sent_id = ";
      if (line.starts_with(kSentId) && current.tokens.empty()) {
        current.id = std::string(line.substr(kSentId.size()));
      }
      continue;
    }
    const auto cols = split_tabs(line);
    const bool width_ok =
        cols.size() == 10 || (format == ConllFormat::conllx && cols.size() == 8);
    if (!width_ok) {
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(cols.size()),
                       line_no);
    }
    if (format == ConllFormat::conllu &&
        cols[0].find_first_of("-.") != std::string_view::npos) {
      continue;
    }
    if (current.tokens.empty()) sentence_line = line_no;
    const auto id = parse_int(cols[0]);
    if (!id || *id != static_cast<int>(current.tokens.size()) + 1) {
      throw ParseError("token id '" + std::string(cols[0]) + "' is not " +
                           std::to_string(current.tokens.size() + 1),
                       line_no);
    }
    const auto head = parse_int(cols[6]);
    if (!head) throw ParseError("head '" + std::string(cols[6]) + "' is not an integer", line_no);
    if (cols[1].empty()) throw ParseError("empty form", line_no);

    Token t;
    t.id = *id;
    t.form = std::string(cols[1]);
    t.lemma = optional_field(cols[2]);
    t.cpos = optional_field(cols[3]);
    t.pos = cols[4] != "_" && !cols[4].empty() ? std::string(cols[4]) : std::string(cols[3]);
    t.gold_head = *head;
    t.gold_label = std::string(cols[7]);
    current.tokens.push_back(std::move(t));
  }
  flush();
  return sentences;
}

std::vector<Sentence> read_conll_file(const std::string& path, ConllFormat format,
                                      TreeCheck check) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open '" + path + "'");
  return read_conll(in, format, check);
}

void write_conll(std::ostream& out, std::span<const Sentence> sentences, bool use_predicted,
                 ConllFormat format) {
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const auto& s = sentences[si];
    if (format == ConllFormat::conllu && s.id) out << "# sent_id = " << *s.id << '\n';
    for (const auto& t : s.tokens) {
      int head = t.gold_head;
      const std::string* label = &t.gold_label;
      if (use_predicted) {
        if (!t.pred_head || !t.pred_label) {
          throw std::invalid_argument("sentence " + std::to_string(si + 1) + " token " +
                                      std::to_string(t.id) + " has no prediction");
        }
        head = *t.pred_head;
        label = &*t.pred_label;
      }
      out << t.id << '\t' << t.form << '\t' << t.lemma.value_or("_") << '\t'
          << t.cpos.value_or("_") << '\t' << t.pos << "\t_\t" << head << '\t' << *label
          << "\t_\t_\n";
    }
    out << '\n';
  }
}

bool is_projective(std::span<const int> heads) {
  const int n = static_cast<int>(heads.size());
  for (int d = 1; d <= n; ++d) {
    const int h = heads[static_cast<std::size_t>(d - 1)];
    const int lo = std::min(h, d);
    const int hi = std::max(h, d);
    for (int k = lo + 1; k < hi; ++k) {
      const int hk = heads[static_cast<std::size_t>(k - 1)];
      if (hk < lo || hk > hi) return false;
    }
  }
  return true;
}

bool is_projective(const Sentence& s) { return is_projective(gold_heads(s)); }

}  // namespace conjparse
