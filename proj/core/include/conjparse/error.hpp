#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conjparse {

/// Malformed input text (CoNLL lines, lexicon files, embedding files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A sentence whose gold heads do not form a single-rooted tree.
class StructureError : public std::runtime_error {
 public:
  StructureError(const std::string& what, std::size_t sentence)
      : std::runtime_error("sentence " + std::to_string(sentence) + ": " + what),
        sentence_(sentence) {}
  std::size_t sentence() const noexcept { return sentence_; }

 private:
  std::size_t sentence_;
};

class TransitionError : public std::logic_error {
  using std::logic_error::logic_error;
};

class OracleError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class DimensionError : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Gold and predicted corpora that do not line up token for token.
class AlignmentError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Unreadable, truncated, or version-mismatched model file.
class ModelFormatError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace conjparse
