#include "conjparse/transition_system.hpp"

#include <sstream>

#include "conjparse/error.hpp"

namespace conjparse {

std::size_t Transition::index(std::size_t num_labels) const {
  switch (kind) {
    case Kind::shift:
      return 0;
    case Kind::left:
      return 1 + label;
    case Kind::right:
      return 1 + num_labels + label;
  }
  return 0;
}

Transition Transition::from_index(std::size_t index, std::size_t num_labels) {
  if (index == 0) return shift();
  if (index <= num_labels) return left(index - 1);
  if (index <= 2 * num_labels) return right(index - 1 - num_labels);
  throw std::out_of_range("transition index " + std::to_string(index) + " out of range");
}

std::string Transition::to_string(const LabelInventory* labels) const {
  if (kind == Kind::shift) return "Shift";
  const std::string name = labels && label < labels->size() ? labels->label(label)
                                                            : std::to_string(label);
  return (kind == Kind::left ? "Left(" : "Right(") + name + ")";
}

std::vector<Transition> enumerate_transitions(const LabelInventory& labels) {
  std::vector<Transition> all;
  all.reserve(num_transitions(labels.size()));
  for (std::size_t i = 0; i < num_transitions(labels.size()); ++i) {
    all.push_back(Transition::from_index(i, labels.size()));
  }
  return all;
}

ParseConfiguration::ParseConfiguration(std::vector<int> stack, int buffer_front, int buffer_end,
                                       int sentence_length)
    : stack_(std::move(stack)),
      buffer_front_(buffer_front),
      buffer_end_(buffer_end),
      length_(sentence_length),
      heads_(static_cast<std::size_t>(sentence_length) + 1, -1),
      labels_(static_cast<std::size_t>(sentence_length) + 1, 0) {}

std::vector<int> ParseConfiguration::buffer() const {
  std::vector<int> items;
  for (int i = buffer_front_; i < buffer_end_; ++i) items.push_back(i);
  return items;
}

std::vector<Arc> ParseConfiguration::arcs() const {
  std::vector<Arc> out;
  for (std::size_t d = 1; d < heads_.size(); ++d) {
    if (heads_[d] >= 0) out.push_back({heads_[d], static_cast<int>(d), labels_[d]});
  }
  return out;
}

namespace {

std::string summary(const ParseConfiguration& c) {
  std::ostringstream os;
  os << "stack [";
  for (std::size_t i = 0; i < c.stack().size(); ++i) os << (i ? "," : "") << c.stack()[i];
  os << "] buffer [";
  const auto b = c.buffer();
  for (std::size_t i = 0; i < b.size(); ++i) os << (i ? "," : "") << b[i];
  os << "]";
  return os.str();
}

}  // namespace

void ParseConfiguration::apply(const Transition& t, bool single_root) {
  if (!legality(*this, single_root).allows(t)) {
    throw TransitionError("illegal transition " + t.to_string() + " in " + summary(*this));
  }
  switch (t.kind) {
    case Transition::Kind::shift:
      stack_.push_back(buffer_front_++);
      break;
    case Transition::Kind::left: {
      const int dep = stack_.back();
      stack_.pop_back();
      heads_[static_cast<std::size_t>(dep)] = buffer_front_;
      labels_[static_cast<std::size_t>(dep)] = t.label;
      break;
    }
    case Transition::Kind::right: {
      const int dep = stack_.back();
      stack_.pop_back();
      heads_[static_cast<std::size_t>(dep)] = stack_.back();
      labels_[static_cast<std::size_t>(dep)] = t.label;
      break;
    }
  }
}

bool Legality::allows(const Transition& t) const {
  switch (t.kind) {
    case Transition::Kind::shift:
      return shift;
    case Transition::Kind::left:
      return left;
    case Transition::Kind::right:
      return right;
  }
  return false;
}

ParseConfiguration initial_config(int sentence_length) {
  return ParseConfiguration({0}, 1, sentence_length + 1, sentence_length);
}

ParseConfiguration initial_config(const Sentence& s) {
  return initial_config(static_cast<int>(s.size()));
}

Legality legality(const ParseConfiguration& c, bool single_root) {
  Legality l;
  const auto& stack = c.stack();
  l.shift = !c.buffer_empty();
  l.left = !c.buffer_empty() && !stack.empty() && stack.back() != 0;
  l.right = stack.size() >= 2 && stack.back() != 0;
  if (l.right && single_root && stack[stack.size() - 2] == 0) l.right = c.buffer_empty();
  return l;
}

std::vector<Transition> legal_transitions(const ParseConfiguration& c,
                                          const LabelInventory& labels, bool single_root) {
  const auto l = legality(c, single_root);
  std::vector<Transition> out;
  if (l.shift) out.push_back(Transition::shift());
  if (l.left) {
    for (std::size_t i = 0; i < labels.size(); ++i) out.push_back(Transition::left(i));
  }
  if (l.right) {
    for (std::size_t i = 0; i < labels.size(); ++i) out.push_back(Transition::right(i));
  }
  return out;
}

ParseConfiguration apply(const ParseConfiguration& c, const Transition& t, bool single_root) {
  ParseConfiguration next = c;
  next.apply(t, single_root);
  return next;
}

bool is_terminal(const ParseConfiguration& c) {
  return c.buffer_empty() && c.stack().size() == 1 && c.stack().front() == 0;
}

namespace detail {

Transition static_oracle_unchecked(const ParseConfiguration& c, const Sentence& s,
                                   const LabelInventory& labels) {
  const int top = c.from_top(0);
  if (top > 0) {
    bool complete = true;
    for (const auto& t : s.tokens) {
      if (t.gold_head == top && c.head_of(t.id) < 0) {
        complete = false;
        break;
      }
    }
    if (complete) {
      const auto& tok = s.token(top);
      const auto label = labels.index_of(tok.gold_label);
      if (!label) throw OracleError("label '" + tok.gold_label + "' not in the inventory");
      if (!c.buffer_empty() && tok.gold_head == c.buffer_front()) return Transition::left(*label);
      if (tok.gold_head == c.from_top(1)) return Transition::right(*label);
    }
  }
  if (c.buffer_empty()) {
    throw OracleError("no gold transition from " + summary(c) +
                      "; configuration is not reachable from the gold tree");
  }
  return Transition::shift();
}

}  // namespace detail

Transition static_oracle(const ParseConfiguration& c, const Sentence& s,
                         const LabelInventory& labels) {
  if (!is_projective(s)) throw OracleError("static oracle is undefined for non-projective trees");
  return detail::static_oracle_unchecked(c, s, labels);
}

std::vector<Transition> oracle_sequence(const Sentence& s, const LabelInventory& labels) {
  if (!is_projective(s)) throw OracleError("static oracle is undefined for non-projective trees");
  std::vector<Transition> seq;
  seq.reserve(2 * s.size());
  auto c = initial_config(s);
  while (!is_terminal(c)) {
    const auto t = detail::static_oracle_unchecked(c, s, labels);
    c.apply(t, /*single_root=*/false);
    seq.push_back(t);
  }
  return seq;
}

}  // namespace conjparse
