#include "s2l/eval.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace s2l {

using nlohmann::json;

Result<std::vector<std::pair<std::string, std::string>>> read_eval_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in)
    return ParseError{ParseError::Kind::MissingArgument, 0,
                      "cannot open file: " + path};
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string::npos && line[first] == '{') {
      json j = json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.contains("latex") || !j["latex"].is_string())
        return ParseError{ParseError::Kind::MissingArgument, lineno,
                          "malformed JSON line " + std::to_string(lineno)};
      std::string id = j.contains("id") && j["id"].is_string()
                           ? j["id"].get<std::string>()
                           : std::to_string(lineno);
      out.emplace_back(std::move(id), j["latex"].get<std::string>());
    } else {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      out.emplace_back(std::to_string(lineno), line);
    }
  }
  return out;
}

namespace {

struct MetricAccumulator {
  // micro accumulation for cer/wer
  std::size_t edit_sum = 0, ref_len_sum = 0;
  std::size_t wedit_sum = 0, wref_len_sum = 0;
  // macro / mean accumulation
  std::map<std::string, double> sums;
  std::map<std::string, std::size_t> counts;

  void add(const std::string& name, double value) {
    sums[name] += value;
    ++counts[name];
  }
  std::optional<double> mean(const std::string& name) const {
    auto it = counts.find(name);
    if (it == counts.end() || it->second == 0) return std::nullopt;
    return sums.at(name) / static_cast<double>(it->second);
  }
};

bool wants(const EvalConfig& cfg, const std::string& name) {
  return cfg.metrics.empty() || cfg.metrics.count(name) > 0;
}

NormalizationConfig effective_norm(const EvalConfig& cfg) {
  NormalizationConfig norm = cfg.normalization;
  if (cfg.strip_presentation_both_sides) norm.strip_presentation = true;
  return norm;
}

struct ScopedPair {
  std::string scope;
  std::string reference;
  std::string hypothesis;
};

void score_pair(const ScopedPair& pair, const EvalConfig& cfg,
                MetricAccumulator& acc, std::size_t& degenerate) {
  std::string ref = pair.reference;
  std::string hyp = pair.hypothesis;
  if (cfg.lowercase_metrics) {
    ref = lowercase_preserving_commands(ref);
    hyp = lowercase_preserving_commands(hyp);
  }
  bool warn = false;
  if (wants(cfg, "cer")) {
    const EditOps ops = cer_ops(ref, hyp);
    acc.edit_sum += ops.distance();
    acc.ref_len_sum += ops.reference_length;
    acc.add("cer", cer(ref, hyp, &warn));
    if (warn) ++degenerate;
  }
  if (wants(cfg, "wer")) {
    const EditOps ops = wer_ops(ref, hyp);
    acc.wedit_sum += ops.distance();
    acc.wref_len_sum += ops.reference_length;
    acc.add("wer", wer(ref, hyp, &warn));
    if (warn) ++degenerate;
  }
  if (wants(cfg, "rouge1")) {
    acc.add("rouge1", rouge1(ref, hyp, &warn));
    if (warn) ++degenerate;
  }
  if (wants(cfg, "bleu")) acc.add("bleu", bleu({ref}, hyp));
  if (wants(cfg, "sacre_style_bleu"))
    acc.add("sacre_style_bleu", sacre_style_bleu({ref}, hyp));
  if (wants(cfg, "chrf")) acc.add("chrf", chrf(ref, hyp));
  if (wants(cfg, "chrfpp")) acc.add("chrfpp", chrfpp(ref, hyp));
  if (wants(cfg, "texbleu_proxy"))
    acc.add("texbleu_proxy",
            texbleu_proxy(pair.reference, pair.hypothesis));  // case kept
}

ScoreSet finalize(const MetricAccumulator& acc, const EvalConfig& cfg) {
  ScoreSet s;
  if (cfg.aggregate == EvalConfig::Aggregate::Micro) {
    if (acc.counts.count("cer"))
      s.cer = acc.ref_len_sum
                  ? static_cast<double>(acc.edit_sum) /
                        static_cast<double>(acc.ref_len_sum)
                  : 0.0;
    if (acc.counts.count("wer"))
      s.wer = acc.wref_len_sum
                  ? static_cast<double>(acc.wedit_sum) /
                        static_cast<double>(acc.wref_len_sum)
                  : 0.0;
  } else {
    s.cer = acc.mean("cer");
    s.wer = acc.mean("wer");
  }
  s.rouge1 = acc.mean("rouge1");
  s.bleu = acc.mean("bleu");
  s.sacre_style_bleu = acc.mean("sacre_style_bleu");
  s.chrf = acc.mean("chrf");
  s.chrfpp = acc.mean("chrfpp");
  s.texbleu_proxy = acc.mean("texbleu_proxy");
  return s;
}

}  // namespace

EvalResult evaluate_pairs(
    const std::vector<std::pair<std::string, std::string>>& predictions,
    const std::vector<std::pair<std::string, std::string>>& references,
    const EvalConfig& cfg) {
  if (predictions.size() != references.size())
    return EvalDataError{
        "line-count mismatch: " + std::to_string(predictions.size()) +
            " predictions vs " + std::to_string(references.size()) +
            " references",
        std::min(predictions.size(), references.size()) + 1};
  if (predictions.empty()) return EvalDataError{"no records", 0};

  const NormalizationConfig norm = effective_norm(cfg);
  std::map<std::string, MetricAccumulator> scopes;
  std::size_t degenerate = 0, failed = 0;
  std::size_t compile_pass = 0, compile_total = 0;

  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i].first != references[i].first)
      return EvalDataError{"id mismatch at line " + std::to_string(i + 1) +
                               ": '" + predictions[i].first + "' vs '" +
                               references[i].first + "'",
                           i + 1};
    const std::string& pred = predictions[i].second;
    const std::string& ref = references[i].second;

    if (cfg.mode == EvalConfig::Mode::Equations) {
      ++compile_total;
      if (compile_check(pred)) ++compile_pass;

      auto process = [&](const std::string& s, bool count_failure) {
        const std::string stripped = strip_dollar_delimiters(s);
        if (!cfg.normalize_inputs) return stripped;
        Result<std::string> n = normalize_string(s, norm);
        if (n.ok()) return n.value();
        if (count_failure) ++failed;
        return stripped;  // raw-string fallback
      };
      score_pair({"equation", process(ref, false), process(pred, true)}, cfg,
                 scopes["equation"], degenerate);
      continue;
    }

    // sentences mode
    Result<std::vector<Segment>> pred_segs = segment(pred);
    Result<std::vector<Segment>> ref_segs = segment(ref);
    if (!pred_segs.ok() || !ref_segs.ok()) {
      ++failed;
      score_pair({"sentence", ref, pred}, cfg, scopes["sentence"], degenerate);
      score_pair({"text", ref, pred}, cfg, scopes["text"], degenerate);
      score_pair({"equation", ref, pred}, cfg, scopes["equation"], degenerate);
      ++compile_total;
      continue;
    }
    for (const auto& s : pred_segs.value())
      if (s.kind == Segment::Kind::Math) {
        ++compile_total;
        if (compile_check(s.content)) ++compile_pass;
      }

    EquationConcatOptions opts;
    opts.separator = cfg.equation_separator;
    opts.wrap_delimiters = cfg.equation_scope_delimiters;
    opts.normalize_segments =
        cfg.normalize_math_segments || cfg.strip_presentation_both_sides;
    opts.normalization = norm;

    score_pair({"sentence", ref, pred}, cfg, scopes["sentence"], degenerate);
    score_pair({"text", text_only(ref_segs.value()),
                text_only(pred_segs.value())},
               cfg, scopes["text"], degenerate);
    score_pair({"equation", equations_concat(ref_segs.value(), opts),
                equations_concat(pred_segs.value(), opts)},
               cfg, scopes["equation"], degenerate);
  }

  EvalReport report;
  report.config = cfg;
  report.record_count = predictions.size();
  report.degenerate_warnings = degenerate;
  report.failed_parses = failed;
  report.compilation_rate =
      compile_total ? static_cast<double>(compile_pass) /
                          static_cast<double>(compile_total)
                    : 1.0;
  for (const auto& [scope, acc] : scopes)
    report.per_scope[scope] = finalize(acc, cfg);
  return report;
}

EvalResult evaluate(const std::string& prediction_file,
                    const std::string& reference_file, const EvalConfig& cfg) {
  auto preds = read_eval_file(prediction_file);
  if (!preds.ok())
    return EvalDataError{preds.error().message, preds.error().position};
  auto refs = read_eval_file(reference_file);
  if (!refs.ok())
    return EvalDataError{refs.error().message, refs.error().position};
  return evaluate_pairs(preds.value(), refs.value(), cfg);
}

namespace {

json scope_to_json(const ScoreSet& s) {
  json j = json::object();
  auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) j[name] = *v;
  };
  put("cer", s.cer);
  put("wer", s.wer);
  put("rouge1", s.rouge1);
  put("bleu", s.bleu);
  put("sacre_style_bleu", s.sacre_style_bleu);
  put("chrf", s.chrf);
  put("chrfpp", s.chrfpp);
  put("texbleu_proxy", s.texbleu_proxy);
  return j;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

}  // namespace

std::string report(const EvalReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    json j;
    j["scopes"] = json::object();
    for (const auto& [scope, set] : r.per_scope)
      j["scopes"][scope] = scope_to_json(set);
    j["compilation_rate"] = r.compilation_rate;
    j["record_count"] = r.record_count;
    j["failed_parses"] = r.failed_parses;
    j["degenerate_warnings"] = r.degenerate_warnings;
    json echo;
    echo["mode"] = r.config.mode == EvalConfig::Mode::Equations ? "equations"
                                                                : "sentences";
    echo["normalize"] = r.config.normalize_inputs;
    echo["strip_presentation"] = r.config.strip_presentation_both_sides;
    echo["lowercase"] = r.config.lowercase_metrics;
    echo["equation_separator"] = r.config.equation_separator;
    echo["aggregate"] =
        r.config.aggregate == EvalConfig::Aggregate::Micro ? "micro" : "macro";
    j["config_echo"] = echo;
    return j.dump(2) + "\n";
  }

  // fixed-width table, percentage values to two decimals
  std::ostringstream out;
  std::vector<std::string> cols;
  for (const auto& name : all_metric_names())
    if (r.config.metrics.empty() || r.config.metrics.count(name)) cols.push_back(name);
  out << "scope     ";
  for (const auto& c : cols) {
    out.width(18);
    out << std::right << c;
  }
  out << "\n";
  for (const auto& [scope, set] : r.per_scope) {
    std::ostringstream row;
    row << scope;
    out << row.str();
    for (std::size_t pad = row.str().size(); pad < 10; ++pad) out << ' ';
    auto cell = [&](const std::optional<double>& v) {
      out.width(18);
      out << std::right << (v ? pct(*v) : std::string("-"));
    };
    for (const auto& c : cols) {
      if (c == "cer") cell(set.cer);
      else if (c == "wer") cell(set.wer);
      else if (c == "rouge1") cell(set.rouge1);
      else if (c == "bleu") cell(set.bleu);
      else if (c == "sacre_style_bleu") cell(set.sacre_style_bleu);
      else if (c == "chrf") cell(set.chrf);
      else if (c == "chrfpp") cell(set.chrfpp);
      else if (c == "texbleu_proxy") cell(set.texbleu_proxy);
    }
    out << "\n";
  }
  out << "compilation_rate  " << pct(r.compilation_rate) << "%\n";
  out << "records " << r.record_count << "  failed_parses " << r.failed_parses
      << "  degenerate_warnings " << r.degenerate_warnings << "\n";
  return out.str();
}

}  // namespace s2l
