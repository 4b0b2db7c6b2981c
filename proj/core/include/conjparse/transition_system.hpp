#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "conjparse/treebank.hpp"

namespace conjparse {

/// Shift, Left(label) or Right(label). Transitions are enumerated as
/// index 0 = Shift, 1..L = Left(l), L+1..2L = Right(l) for L labels.
struct Transition {
  enum class Kind { shift, left, right };

  Kind kind = Kind::shift;
  std::size_t label = 0;

  static Transition shift() { return {Kind::shift, 0}; }
  static Transition left(std::size_t l) { return {Kind::left, l}; }
  static Transition right(std::size_t l) { return {Kind::right, l}; }

  std::size_t index(std::size_t num_labels) const;
  static Transition from_index(std::size_t index, std::size_t num_labels);

  std::string to_string(const LabelInventory* labels = nullptr) const;

  bool operator==(const Transition&) const = default;
};

inline std::size_t num_transitions(std::size_t num_labels) { return 2 * num_labels + 1; }

/// Every transition for the inventory in index order.
std::vector<Transition> enumerate_transitions(const LabelInventory& labels);

struct Arc {
  int head = 0;
  int dependent = 0;
  std::size_t label = 0;
  bool operator==(const Arc&) const = default;
};

/// Arc-hybrid configuration. The buffer is always a contiguous suffix of the
/// sentence, so it is kept as the half-open id range [buffer_front, buffer_end).
class ParseConfiguration {
 public:
  ParseConfiguration() = default;
  ParseConfiguration(std::vector<int> stack, int buffer_front, int buffer_end, int sentence_length);

  const std::vector<int>& stack() const noexcept { return stack_; }
  std::vector<int> buffer() const;
  bool buffer_empty() const noexcept { return buffer_front_ >= buffer_end_; }
  int buffer_front() const noexcept { return buffer_front_; }
  std::size_t buffer_size() const noexcept {
    return buffer_empty() ? 0 : static_cast<std::size_t>(buffer_end_ - buffer_front_);
  }
  int sentence_length() const noexcept { return length_; }

  /// Element counted from the top: from_top(0) is the stack top; -1 if absent.
  int from_top(std::size_t depth) const noexcept {
    return depth < stack_.size() ? stack_[stack_.size() - 1 - depth] : -1;
  }

  /// Head assigned to a dependent so far, or -1.
  int head_of(int dependent) const { return heads_.at(static_cast<std::size_t>(dependent)); }
  std::size_t label_of(int dependent) const { return labels_.at(static_cast<std::size_t>(dependent)); }
  std::vector<Arc> arcs() const;

  /// In-place transition; throws TransitionError when illegal.
  void apply(const Transition& t, bool single_root = true);

 private:
  std::vector<int> stack_{0};
  int buffer_front_ = 1;
  int buffer_end_ = 1;
  int length_ = 0;
  std::vector<int> heads_{-1};
  std::vector<std::size_t> labels_{0};
};

struct Legality {
  bool shift = false;
  bool left = false;
  bool right = false;

  bool allows(const Transition& t) const;
  bool any() const { return shift || left || right; }
  bool operator==(const Legality&) const = default;
};

ParseConfiguration initial_config(const Sentence& s);
ParseConfiguration initial_config(int sentence_length);

/// With single_root, node 0 may only receive its dependent once the buffer
/// is empty, which forces exactly one root dependent.
Legality legality(const ParseConfiguration& c, bool single_root = true);
std::vector<Transition> legal_transitions(const ParseConfiguration& c,
                                          const LabelInventory& labels, bool single_root = true);

ParseConfiguration apply(const ParseConfiguration& c, const Transition& t, bool single_root = true);

bool is_terminal(const ParseConfiguration& c);

/// Gold transition for a configuration reachable by earlier oracle moves.
/// Throws OracleError when s is not projective.
Transition static_oracle(const ParseConfiguration& c, const Sentence& s,
                         const LabelInventory& labels);

/// Full oracle sequence from the initial configuration; 2n transitions.
std::vector<Transition> oracle_sequence(const Sentence& s, const LabelInventory& labels);

namespace detail {
// Oracle without the projectivity pre-check, for callers that did it already.
Transition static_oracle_unchecked(const ParseConfiguration& c, const Sentence& s,
                                   const LabelInventory& labels);
}  // namespace detail

}  // namespace conjparse
