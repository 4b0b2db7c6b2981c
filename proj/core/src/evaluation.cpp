#include "conjparse/evaluation.hpp"

#include <iomanip>
#include <ostream>
#include <set>

#include "conjparse/error.hpp"

namespace conjparse {

bool is_punctuation(const Token& gold, const EvalOptions& opts) {
  return gold.gold_label == opts.punct_label || opts.punct_tags.contains(gold.pos);
}

int predicted_head(const Token& t) { return t.pred_head.value_or(t.gold_head); }

const std::string& predicted_label(const Token& t) {
  return t.pred_label ? *t.pred_label : t.gold_label;
}

Prf make_prf(std::size_t tp, std::size_t predicted, std::size_t gold) {
  Prf r;
  r.true_positives = tp;
  r.predicted = predicted;
  r.gold = gold;
  r.precision = predicted ? 100.0 * static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  r.recall = gold ? 100.0 * static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

void check_alignment(std::span<const Sentence> gold, std::span<const Sentence> pred) {
  if (gold.size() != pred.size()) {
    throw AlignmentError("gold has " + std::to_string(gold.size()) + " sentences, prediction has " +
                         std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != pred[i].size()) {
      throw AlignmentError("sentence " + std::to_string(i + 1) + ": gold has " +
                           std::to_string(gold[i].size()) + " tokens, prediction has " +
                           std::to_string(pred[i].size()));
    }
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      if (gold[i].tokens[k].form != pred[i].tokens[k].form) {
        throw AlignmentError("sentence " + std::to_string(i + 1) + " token " +
                             std::to_string(k + 1) + ": '" + gold[i].tokens[k].form + "' vs '" +
                             pred[i].tokens[k].form + "'");
      }
    }
  }
}

AttachmentScores attachment_scores(std::span<const Sentence> gold, std::span<const Sentence> pred,
                                   const EvalOptions& opts) {
  check_alignment(gold, pred);
  AttachmentScores s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      const auto& g = gold[i].tokens[k];
      if (is_punctuation(g, opts)) continue;
      const auto& p = pred[i].tokens[k];
      ++s.counted;
      if (predicted_head(p) == g.gold_head) {
        ++s.head_correct;
        if (predicted_label(p) == g.gold_label) ++s.both_correct;
      }
    }
  }
  if (s.counted > 0) {
    s.uas = 100.0 * static_cast<double>(s.head_correct) / static_cast<double>(s.counted);
    s.las = 100.0 * static_cast<double>(s.both_correct) / static_cast<double>(s.counted);
  }
  return s;
}

namespace {

Prf label_prf(std::span<const Sentence> gold, std::span<const Sentence> pred,
              const std::string& label, const EvalOptions& opts, bool need_head) {
  check_alignment(gold, pred);
  std::size_t tp = 0;
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      const auto& g = gold[i].tokens[k];
      if (is_punctuation(g, opts)) continue;
      const auto& p = pred[i].tokens[k];
      const bool in_gold = g.gold_label == label;
      const bool in_pred = predicted_label(p) == label;
      n_gold += in_gold;
      n_pred += in_pred;
      if (in_gold && in_pred && (!need_head || predicted_head(p) == g.gold_head)) ++tp;
    }
  }
  return make_prf(tp, n_pred, n_gold);
}

}  // namespace

Prf rel_metrics(std::span<const Sentence> gold, std::span<const Sentence> pred,
                const std::string& label, const EvalOptions& opts) {
  return label_prf(gold, pred, label, opts, false);
}

Prf rel_att_metrics(std::span<const Sentence> gold, std::span<const Sentence> pred,
                    const std::string& label, const EvalOptions& opts) {
  return label_prf(gold, pred, label, opts, true);
}

EvalReport evaluate(std::span<const Sentence> gold, std::span<const Sentence> pred,
                    const EvalOptions& opts) {
  const auto att = attachment_scores(gold, pred, opts);
  EvalReport report;
  report.uas = att.uas;
  report.las = att.las;
  report.counted_tokens = att.counted;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      if (is_punctuation(gold[i].tokens[k], opts)) continue;
      labels.insert(gold[i].tokens[k].gold_label);
      labels.insert(predicted_label(pred[i].tokens[k]));
    }
  }
  for (const auto& label : labels) {
    report.per_label[label] = {rel_metrics(gold, pred, label, opts),
                               rel_att_metrics(gold, pred, label, opts)};
  }
  return report;
}

void write_report_tsv(std::ostream& out, const EvalReport& report) {
  out << std::fixed << std::setprecision(2);
  out << "metric\tvalue\n";
  out << "UAS\t" << report.uas << '\n';
  out << "LAS\t" << report.las << '\n';
  out << "tokens\t" << report.counted_tokens << '\n';
  out << '\n';
  out << "label\trel_p\trel_r\trel_f1\trelatt_p\trelatt_r\trelatt_f1\tsupport\tpredicted\n";
  for (const auto& [label, m] : report.per_label) {
    out << label << '\t' << m.rel.precision << '\t' << m.rel.recall << '\t' << m.rel.f1 << '\t'
        << m.rel_att.precision << '\t' << m.rel_att.recall << '\t' << m.rel_att.f1 << '\t'
        << m.rel.gold << '\t' << m.rel.predicted << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

void write_report_table(std::ostream& out, const EvalReport& report,
                        const std::string& focus_label) {
  out << std::fixed << std::setprecision(2);
  out << "UAS " << report.uas << "  LAS " << report.las << "  (" << report.counted_tokens
      << " non-punctuation tokens)\n\n";
  if (const auto it = report.per_label.find(focus_label); it != report.per_label.end()) {
    const auto& m = it->second;
    out << "'" << focus_label << "' label (support " << m.rel.gold << ")\n";
    out << "  Rel      P " << std::setw(6) << m.rel.precision << "  R " << std::setw(6)
        << m.rel.recall << "  F1 " << std::setw(6) << m.rel.f1 << '\n';
    out << "  Rel+Att  P " << std::setw(6) << m.rel_att.precision << "  R " << std::setw(6)
        << m.rel_att.recall << "  F1 " << std::setw(6) << m.rel_att.f1 << "\n\n";
  }
  out << std::left << std::setw(12) << "label" << std::right << std::setw(8) << "support"
      << std::setw(9) << "Rel F1" << std::setw(13) << "Rel+Att F1" << '\n';
  for (const auto& [label, m] : report.per_label) {
    out << std::left << std::setw(12) << label << std::right << std::setw(8) << m.rel.gold
        << std::setw(9) << m.rel.f1 << std::setw(13) << m.rel_att.f1 << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

// ---------------------------------------------------------------------------

std::string FiredFeatures::to_string() const {
  std::string s;
  auto add = [&s](bool on, const char* name) {
    if (!on) return;
    if (!s.empty()) s += '+';
    s += name;
  };
  add(lem, "LEM");
  add(cap, "CAP");
  add(sentiment, "SENTIMENT");
  add(suf, "SUF");
  return s.empty() ? "-" : s;
}

FiredFeatures fired_features(const ConjFeatureVector& f) {
  return {f.lem, f.cap, f.suf >= kSuffixThreshold, f.sent_h != 0 && f.sent_m != 0};
}

FeaturePrevalence prevalence(std::span<const ConjCase> cases) {
  FeaturePrevalence p;
  p.cases = cases.size();
  if (cases.empty()) return p;
  std::size_t lem = 0, cap = 0, suf = 0, sent = 0;
  std::size_t lem_cap_suf = 0, lem_suf = 0, sent_suf = 0, single = 0, other = 0, any = 0;
  for (const auto& c : cases) {
    const auto f = fired_features(c.features);
    lem += f.lem;
    cap += f.cap;
    suf += f.suf;
    sent += f.sentiment;
    const auto n = f.count();
    if (n == 0) continue;
    ++any;
    if (n == 1) {
      ++single;
    } else if (f.lem && f.cap && f.suf && !f.sentiment) {
      ++lem_cap_suf;
    } else if (f.lem && f.suf && !f.cap && !f.sentiment) {
      ++lem_suf;
    } else if (f.sentiment && f.suf && !f.lem && !f.cap) {
      ++sent_suf;
    } else {
      ++other;
    }
  }
  const auto pct = [&](std::size_t k) {
    return 100.0 * static_cast<double>(k) / static_cast<double>(cases.size());
  };
  p.lem = pct(lem);
  p.cap = pct(cap);
  p.suf = pct(suf);
  p.sentiment = pct(sent);
  p.lem_cap_suf = pct(lem_cap_suf);
  p.lem_suf = pct(lem_suf);
  p.sentiment_suf = pct(sent_suf);
  p.single = pct(single);
  p.other_combination = pct(other);
  p.any = pct(any);
  return p;
}

ConjDiff conj_diff(std::span<const Sentence> gold, std::span<const Sentence> pred_a,
                   std::span<const Sentence> pred_b, const FeatureResources& res,
                   const std::string& label) {
  check_alignment(gold, pred_a);
  check_alignment(gold, pred_b);
  ConjDiff diff;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (std::size_t k = 0; k < gold[i].size(); ++k) {
      const auto& g = gold[i].tokens[k];
      if (g.gold_label != label) continue;
      const auto& a = pred_a[i].tokens[k];
      const auto& b = pred_b[i].tokens[k];
      const bool ok_a = predicted_label(a) == label && predicted_head(a) == g.gold_head;
      const bool ok_b = predicted_label(b) == label && predicted_head(b) == g.gold_head;
      if (ok_a == ok_b) continue;
      ConjCase c;
      c.sentence = i;
      c.modifier = g.id;
      c.gold_head = g.gold_head;
      c.head_a = predicted_head(a);
      c.head_b = predicted_head(b);
      if (g.gold_head > 0) c.features = extract(gold[i].token(g.gold_head), g, res);
      (ok_a ? diff.only_a : diff.only_b).push_back(c);
    }
  }
  diff.prevalence_a = prevalence(diff.only_a);
  diff.prevalence_b = prevalence(diff.only_b);
  return diff;
}

namespace {

std::string form_of(const Sentence& s, int id) { return id > 0 ? s.token(id).form : "<root>"; }

}  // namespace

void write_conj_diff(std::ostream& out, const ConjDiff& diff, std::span<const Sentence> gold,
                     const std::string& name_a, const std::string& name_b) {
  out << "list\tsentence\tmodifier\tgold_head\t" << name_a << "_head\t" << name_b
      << "_head\tfeatures\n";
  auto cases = [&](const std::vector<ConjCase>& list, const std::string& tag) {
    for (const auto& c : list) {
      const auto& s = gold[c.sentence];
      out << tag << '\t' << s.id.value_or(std::to_string(c.sentence + 1)) << '\t'
          << form_of(s, c.modifier) << '\t' << form_of(s, c.gold_head) << '\t'
          << form_of(s, c.head_a) << '\t' << form_of(s, c.head_b) << '\t'
          << fired_features(c.features).to_string() << '\n';
    }
  };
  cases(diff.only_a, "+" + name_a + ",-" + name_b);
  cases(diff.only_b, "-" + name_a + ",+" + name_b);

  out << '\n' << std::fixed << std::setprecision(1);
  out << "features\t+" << name_a << ",-" << name_b << "\t-" << name_a << ",+" << name_b << '\n';
  const auto& a = diff.prevalence_a;
  const auto& b = diff.prevalence_b;
  out << "cases\t" << a.cases << '\t' << b.cases << '\n';
  out << "LEM+CAP+SUF\t" << a.lem_cap_suf << '\t' << b.lem_cap_suf << '\n';
  out << "LEM+SUF\t" << a.lem_suf << '\t' << b.lem_suf << '\n';
  out << "SENTIMENT+SUF\t" << a.sentiment_suf << '\t' << b.sentiment_suf << '\n';
  out << "LEM/CAP/SENTIMENT/SUF\t" << a.single << '\t' << b.single << '\n';
  out << "other combination\t" << a.other_combination << '\t' << b.other_combination << '\n';
  out << "Total\t" << a.any << '\t' << b.any << '\n';
  out << "LEM\t" << a.lem << '\t' << b.lem << '\n';
  out << "CAP\t" << a.cap << '\t' << b.cap << '\n';
  out << "SUF>=3\t" << a.suf << '\t' << b.suf << '\n';
  out << "SENTIMENT pair\t" << a.sentiment << '\t' << b.sentiment << '\n';
  out.unsetf(std::ios::floatfield);
}

}  // namespace conjparse
