#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "conjparse/conj_features.hpp"
#include "conjparse/treebank.hpp"

namespace conjparse {

struct EvalOptions {
  /// A token is punctuation when its gold label is punct_label or its gold
  /// POS is one of punct_tags. Punctuation is left out of every metric.
  std::string punct_label = "punct";
  std::set<std::string> punct_tags = {"``", "''", ":", ",", "."};
};

bool is_punctuation(const Token& gold, const EvalOptions& opts = {});

/// Head and label a prediction corpus assigns: pred_* when present,
/// otherwise the head/label columns themselves.
int predicted_head(const Token& t);
const std::string& predicted_label(const Token& t);

struct AttachmentScores {
  double uas = 0.0;
  double las = 0.0;
  std::size_t counted = 0;
  std::size_t head_correct = 0;
  std::size_t both_correct = 0;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;  // support
};

struct LabelMetrics {
  Prf rel;
  Prf rel_att;
};

struct EvalReport {
  double uas = 0.0;
  double las = 0.0;
  std::size_t counted_tokens = 0;
  std::map<std::string, LabelMetrics> per_label;
};

/// Percentages with F1 = 0 when precision and recall are both 0.
Prf make_prf(std::size_t tp, std::size_t predicted, std::size_t gold);

/// Throws AlignmentError naming the first sentence whose length or forms differ.
void check_alignment(std::span<const Sentence> gold, std::span<const Sentence> pred);

AttachmentScores attachment_scores(std::span<const Sentence> gold, std::span<const Sentence> pred,
                                   const EvalOptions& opts = {});

/// Label-only identification of modifiers carrying `label`.
Prf rel_metrics(std::span<const Sentence> gold, std::span<const Sentence> pred,
                const std::string& label, const EvalOptions& opts = {});
/// As rel_metrics, but a true positive also needs the gold head.
Prf rel_att_metrics(std::span<const Sentence> gold, std::span<const Sentence> pred,
                    const std::string& label, const EvalOptions& opts = {});

/// Every label seen in gold or prediction gets a row, zero-support ones included.
EvalReport evaluate(std::span<const Sentence> gold, std::span<const Sentence> pred,
                    const EvalOptions& opts = {});

void write_report_tsv(std::ostream& out, const EvalReport& report);
void write_report_table(std::ostream& out, const EvalReport& report,
                        const std::string& focus_label = "conj");

// ---------------------------------------------------------------------------
// Two-system comparison on conj attachments

struct ConjCase {
  std::size_t sentence = 0;  // 0-based position in the corpus
  int modifier = 0;
  int gold_head = 0;
  int head_a = 0;
  int head_b = 0;
  ConjFeatureVector features;  // of the gold (head, modifier) pair
};

/// Which of LEM, CAP, SUF>=3 and the sentiment pair fire for a case.
struct FiredFeatures {
  bool lem = false;
  bool cap = false;
  bool suf = false;
  bool sentiment = false;  // both words non-neutral

  std::size_t count() const { return lem + cap + suf + sentiment; }
  std::string to_string() const;
};

inline constexpr std::size_t kSuffixThreshold = 3;
FiredFeatures fired_features(const ConjFeatureVector& f);

/// Percentages of a case list. Individual rows count a feature whenever it
/// fires; the combination rows count cases whose fired set is exactly that
/// combination, "single" counts exactly one feature, "any" at least one.
struct FeaturePrevalence {
  std::size_t cases = 0;
  double lem = 0.0;
  double cap = 0.0;
  double suf = 0.0;
  double sentiment = 0.0;
  double lem_cap_suf = 0.0;
  double lem_suf = 0.0;
  double sentiment_suf = 0.0;
  double single = 0.0;
  double other_combination = 0.0;
  double any = 0.0;
};

FeaturePrevalence prevalence(std::span<const ConjCase> cases);

struct ConjDiff {
  std::vector<ConjCase> only_a;
  std::vector<ConjCase> only_b;
  FeaturePrevalence prevalence_a;
  FeaturePrevalence prevalence_b;
};

/// A gold conj attachment is correct in a system when it predicts both the
/// conj label and the gold head.
ConjDiff conj_diff(std::span<const Sentence> gold, std::span<const Sentence> pred_a,
                   std::span<const Sentence> pred_b, const FeatureResources& res,
                   const std::string& label = "conj");

void write_conj_diff(std::ostream& out, const ConjDiff& diff, std::span<const Sentence> gold,
                     const std::string& name_a = "A", const std::string& name_b = "B");

}  // namespace conjparse
