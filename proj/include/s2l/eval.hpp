#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "s2l/metrics.hpp"
#include "s2l/segment.hpp"

namespace s2l {

// Fractions; the report layer renders percentages.
struct ScoreSet {
  std::optional<double> cer;
  std::optional<double> wer;
  std::optional<double> rouge1;
  std::optional<double> bleu;
  std::optional<double> sacre_style_bleu;
  std::optional<double> chrf;
  std::optional<double> chrfpp;
  std::optional<double> texbleu_proxy;
};

inline const std::vector<std::string>& all_metric_names() {
  static const std::vector<std::string> names = {
      "cer",  "wer",  "rouge1", "bleu",
      "sacre_style_bleu", "chrf", "chrfpp", "texbleu_proxy"};
  return names;
}

struct EvalConfig {
  enum class Mode { Equations, Sentences };
  enum class Aggregate { Micro, Macro };  // for cer/wer

  Mode mode = Mode::Equations;
  NormalizationConfig normalization = NormalizationConfig::paper_mode();
  bool normalize_inputs = true;  // --no-normalize turns this off
  bool strip_presentation_both_sides = false;
  bool lowercase_metrics = true;  // all metrics except texbleu_proxy
  std::string equation_separator = " ";
  // Wrap extracted formulas back in '$' for the equation scope
  // (mode=sentences); matches the corpus-surface comparison.
  bool equation_scope_delimiters = true;
  // Normalize each extracted math segment in mode=sentences.
  bool normalize_math_segments = false;
  std::set<std::string> metrics;  // empty = all
  Aggregate aggregate = Aggregate::Micro;
};

struct EvalReport {
  std::map<std::string, ScoreSet> per_scope;  // "sentence","text","equation"
  double compilation_rate = 0.0;
  std::size_t record_count = 0;
  std::size_t degenerate_warnings = 0;
  std::size_t failed_parses = 0;
  EvalConfig config;
};

struct EvalDataError {
  std::string message;
  std::size_t line = 0;  // 1-based; 0 when not line-specific
};

// Inputs: JSON-lines {"id","latex"} or raw text, one item per line.
Result<std::vector<std::pair<std::string, std::string>>> read_eval_file(
    const std::string& path);

class EvalResult {
 public:
  EvalResult(EvalReport r) : report_(std::move(r)), ok_(true) {}
  EvalResult(EvalDataError e) : error_(std::move(e)), ok_(false) {}
  bool ok() const { return ok_; }
  const EvalReport& report() const { return report_; }
  const EvalDataError& error() const { return error_; }

 private:
  EvalReport report_;
  EvalDataError error_;
  bool ok_;
};

EvalResult evaluate(const std::string& prediction_file,
                    const std::string& reference_file, const EvalConfig& config);

// Pre-loaded pairs; used by evaluate() and directly by tests.
EvalResult evaluate_pairs(
    const std::vector<std::pair<std::string, std::string>>& predictions,
    const std::vector<std::pair<std::string, std::string>>& references,
    const EvalConfig& config);

enum class ReportFormat { Json, Table };
std::string report(const EvalReport& eval_report, ReportFormat format);

}  // namespace s2l
