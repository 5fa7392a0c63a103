#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "s2l/dataset.hpp"
#include "s2l/eval.hpp"

namespace {

using namespace s2l;

int read_lines(const std::string& path, std::vector<std::string>& out) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (path != "-") {
    file.open(path);
    if (!file) {
      std::cerr << "error: cannot open " << path << "\n";
      return 2;
    }
    in = &file;
  }
  std::string line;
  while (std::getline(*in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return 0;
}

int read_records(const std::string& path, std::vector<SampleRecord>& out) {
  std::vector<std::string> lines;
  if (int rc = read_lines(path, lines)) return rc;
  std::size_t lineno = 0;
  for (const auto& line : lines) {
    ++lineno;
    if (line.empty()) continue;
    Result<SampleRecord> rec = record_from_json_line(line);
    if (!rec.ok()) {
      std::cerr << "error: line " << lineno << ": " << rec.error().message
                << "\n";
      return 2;
    }
    out.push_back(rec.value());
  }
  return 0;
}

int cmd_normalize(const std::string& path, const NormalizationConfig& cfg,
                  const std::string& alias_path) {
  AliasTable aliases = default_alias_table();
  if (!alias_path.empty()) {
    Result<AliasTable> loaded = load_alias_table(alias_path);
    if (!loaded.ok()) {
      std::cerr << "error: " << loaded.error().message << "\n";
      return 2;
    }
    aliases = loaded.value();
  }
  std::vector<std::string> lines;
  if (int rc = read_lines(path, lines)) return rc;
  int failures = 0;
  for (const auto& line : lines) {
    Result<std::string> out = normalize_string(line, cfg, aliases);
    if (out.ok()) {
      std::cout << out.value() << "\n";
    } else {
      std::cout << line << "\n";  // echoed unchanged
      std::cerr << "parse error at byte " << out.error().position << " ("
                << to_string(out.error().kind) << "): " << line << "\n";
      ++failures;
    }
  }
  return failures ? 2 : 0;
}

int cmd_validate(const std::string& path, const FilterConfig& cfg) {
  std::vector<SampleRecord> records;
  if (int rc = read_records(path, records)) return rc;
  std::size_t bad = 0;
  for (const auto& r : records) {
    std::vector<std::string> violations = validate_record(r, cfg);
    if (violations.empty()) continue;
    ++bad;
    std::cout << r.id << "\t";
    for (std::size_t i = 0; i < violations.size(); ++i)
      std::cout << (i ? "," : "") << violations[i];
    std::cout << "\n";
  }
  std::cerr << records.size() << " records, " << bad << " with violations\n";
  return 0;
}

int cmd_filter(const std::string& path, const FilterConfig& cfg,
               const std::string& rejected_path, bool apply_dedup) {
  std::vector<SampleRecord> records;
  if (int rc = read_records(path, records)) return rc;
  FilterOutcome outcome = filter_corpus(records, cfg);
  std::vector<SampleRecord> kept = outcome.kept;
  if (apply_dedup) kept = dedup(kept);
  for (const auto& r : kept) std::cout << record_to_json_line(r) << "\n";
  if (!rejected_path.empty()) {
    std::ofstream rej(rejected_path);
    if (!rej) {
      std::cerr << "error: cannot write " << rejected_path << "\n";
      return 2;
    }
    for (const auto& r : outcome.rejected) {
      // rejected stream carries the record plus its first failing reason
      std::string line = record_to_json_line(r.record);
      line.insert(line.size() - 1, ",\"reason\":\"" + r.reason + "\"");
      rej << line << "\n";
    }
  }
  std::cerr << "kept " << kept.size() << ", rejected "
            << outcome.rejected.size() << "\n";
  return 0;
}

int cmd_stratify(const std::string& path) {
  std::vector<SampleRecord> records;
  if (int rc = read_records(path, records)) return rc;
  std::cout << stratum_report_json(stratify(records)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spoken-math LaTeX evaluation toolkit"};
  app.require_subcommand(1);

  // normalize
  auto* norm_cmd = app.add_subcommand(
      "normalize", "Normalize a stream of LaTeX formulas, one per line");
  std::string norm_file = "-";
  std::string alias_path;
  NormalizationConfig norm_cfg = NormalizationConfig::paper_mode();
  bool keep_dollars = false;
  norm_cmd->add_option("file", norm_file, "input file ('-' for stdin)");
  norm_cmd->add_flag("--strip-presentation", norm_cfg.strip_presentation,
                     "remove layout-only commands");
  norm_cmd->add_flag("--lowercase", norm_cfg.lowercase_output,
                     "lowercase the output");
  norm_cmd->add_flag("--no-strip-dollars", keep_dollars,
                     "keep surrounding dollar delimiters");
  norm_cmd->add_option("--aliases", alias_path, "operator alias table file");

  // validate
  auto* val_cmd =
      app.add_subcommand("validate", "Report per-record violations");
  std::string val_file = "-";
  FilterConfig filter_cfg;
  val_cmd->add_option("file", val_file, "JSON-lines manifest");

  // filter
  auto* filt_cmd =
      app.add_subcommand("filter", "Filter a corpus; kept records to stdout");
  std::string filt_file = "-";
  std::string rejected_path;
  bool apply_dedup = false;
  filt_cmd->add_option("file", filt_file, "JSON-lines manifest");
  filt_cmd->add_option("--min-chars", filter_cfg.min_equation_chars,
                       "minimum normalized equation length");
  filt_cmd->add_option("--max-chars", filter_cfg.max_equation_chars,
                       "maximum normalized equation length");
  filt_cmd->add_option("--ratio", filter_cfg.max_latex_to_pronunciation_ratio,
                       "max latex/pronunciation length ratio");
  filt_cmd->add_option("--rejected", rejected_path,
                       "write rejected records (with reasons) here");
  filt_cmd->add_flag("--dedup", apply_dedup,
                     "drop exact duplicates, flag near-duplicate families");

  // stratify
  auto* strat_cmd = app.add_subcommand(
      "stratify", "Histogram by equation length and equations per sentence");
  std::string strat_file = "-";
  strat_cmd->add_option("file", strat_file, "JSON-lines manifest");

  // evaluate
  auto* eval_cmd =
      app.add_subcommand("evaluate", "Score predictions against references");
  std::string pred_path, ref_path, mode = "equations", format = "table";
  std::string aggregate = "micro", metrics_csv;
  EvalConfig eval_cfg;
  bool no_normalize = false;
  eval_cmd->add_option("--pred", pred_path, "predictions file")->required();
  eval_cmd->add_option("--ref", ref_path, "references file")->required();
  eval_cmd->add_option("--mode", mode, "equations|sentences")
      ->check(CLI::IsMember({"equations", "sentences"}));
  eval_cmd->add_flag("--strip-presentation",
                     eval_cfg.strip_presentation_both_sides,
                     "strip layout-only commands on both sides");
  eval_cmd->add_flag("--no-normalize", no_normalize,
                     "compare dollar-stripped strings without normalization");
  eval_cmd->add_option("--separator", eval_cfg.equation_separator,
                       "separator between concatenated equations");
  eval_cmd->add_option("--metrics", metrics_csv,
                       "comma-separated subset of metrics");
  eval_cmd->add_option("--format", format, "json|table")
      ->check(CLI::IsMember({"json", "table"}));
  eval_cmd->add_option("--aggregate", aggregate, "micro|macro (cer/wer)")
      ->check(CLI::IsMember({"micro", "macro"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n" << app.help() << "\n";
    return 1;
  }

  if (norm_cmd->parsed()) {
    norm_cfg.strip_dollars = !keep_dollars;
    return cmd_normalize(norm_file, norm_cfg, alias_path);
  }
  if (val_cmd->parsed()) return cmd_validate(val_file, filter_cfg);
  if (filt_cmd->parsed())
    return cmd_filter(filt_file, filter_cfg, rejected_path, apply_dedup);
  if (strat_cmd->parsed()) return cmd_stratify(strat_file);

  // evaluate
  eval_cfg.mode = mode == "sentences" ? EvalConfig::Mode::Sentences
                                      : EvalConfig::Mode::Equations;
  eval_cfg.normalize_inputs = !no_normalize;
  eval_cfg.aggregate = aggregate == "macro" ? EvalConfig::Aggregate::Macro
                                            : EvalConfig::Aggregate::Micro;
  if (!metrics_csv.empty()) {
    std::stringstream ss(metrics_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      bool known = false;
      for (const auto& name : all_metric_names())
        if (name == item) known = true;
      if (!known) {
        std::cerr << "unknown metric: " << item << "\n";
        return 1;
      }
      eval_cfg.metrics.insert(item);
    }
  }
  EvalResult result = evaluate(pred_path, ref_path, eval_cfg);
  if (!result.ok()) {
    std::cerr << "error: " << result.error().message << "\n";
    return 2;
  }
  std::cout << report(result.report(), format == "json" ? ReportFormat::Json
                                                        : ReportFormat::Table);
  return 0;
}
