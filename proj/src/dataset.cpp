#include "s2l/dataset.hpp"

#include <cctype>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

#include "s2l/metrics.hpp"

#include <json.hpp>

namespace s2l {

using nlohmann::json;

const std::array<const char*, 5> StratumReport::length_labels = {
    "3-10", "10-20", "20-30", "30-50", "50+"};
const std::array<const char*, 6> StratumReport::count_labels = {
    "1", "2", "3", "4", "5", "6-11"};

Result<SampleRecord> record_from_json_line(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    return ParseError{ParseError::Kind::MissingArgument, 0,
                      "malformed JSON record"};
  SampleRecord r;
  auto str = [&](const char* key) {
    return j.contains(key) && j[key].is_string() ? j[key].get<std::string>()
                                                 : std::string();
  };
  r.id = str("id");
  r.language = str("language");
  r.annotation_type = str("annotation_type");
  r.source = str("source");
  r.format = str("format");
  r.latex = str("latex");
  if (j.contains("pronunciations") && j["pronunciations"].is_array())
    for (const auto& p : j["pronunciations"])
      if (p.is_string()) r.pronunciations.push_back(p.get<std::string>());
  if (j.contains("audio_path") && j["audio_path"].is_string())
    r.audio_path = j["audio_path"].get<std::string>();
  return r;
}

std::string record_to_json_line(const SampleRecord& r) {
  json j;
  j["id"] = r.id;
  j["language"] = r.language;
  j["annotation_type"] = r.annotation_type;
  j["source"] = r.source;
  j["format"] = r.format;
  j["latex"] = r.latex;
  j["pronunciations"] = r.pronunciations;
  if (r.audio_path) j["audio_path"] = *r.audio_path;
  if (r.family_key) j["family_key"] = *r.family_key;
  if (r.near_duplicate) j["near_duplicate"] = true;
  return j.dump();
}

namespace {

bool has_unescaped_dollar(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
      continue;
    }
    if (s[i] == '$') return true;
  }
  return false;
}

bool contains_latex_command(const std::string& s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (s[i] == '\\' && std::isalpha(static_cast<unsigned char>(s[i + 1])))
      return true;
  return false;
}

// atoms inside \text blocks vs. atoms elsewhere
void count_atoms(const MathNode& n, std::size_t& text_atoms,
                 std::size_t& other_atoms) {
  switch (n.kind) {
    case MathNode::Kind::Symbol:
      ++other_atoms;
      return;
    case MathNode::Kind::TextBlock:
      for (char c : n.text)
        if (!std::isspace(static_cast<unsigned char>(c))) ++text_atoms;
      return;
    default:
      for (const auto& c : n.children) count_atoms(c, text_atoms, other_atoms);
  }
}

bool is_text_only(const std::string& latex, double threshold) {
  Result<MathNode> parsed = parse(strip_dollar_delimiters(latex));
  if (!parsed.ok()) return false;
  std::size_t text_atoms = 0, other_atoms = 0;
  count_atoms(parsed.value(), text_atoms, other_atoms);
  const std::size_t total = text_atoms + other_atoms;
  if (total == 0) return false;
  return static_cast<double>(text_atoms) / static_cast<double>(total) >=
         threshold;
}

bool latex_compiles(const SampleRecord& r) {
  if (r.format == "sentences") {
    Result<std::vector<Segment>> segs = segment(r.latex);
    if (!segs.ok()) return false;
    for (const auto& s : segs.value())
      if (s.kind == Segment::Kind::Math && !compile_check(s.content))
        return false;
    return true;
  }
  return compile_check(r.latex);
}

std::size_t normalized_length(const SampleRecord& r) {
  Result<std::string> norm =
      normalize_string(r.latex, NormalizationConfig::paper_mode());
  const std::string& s = norm.ok() ? norm.value() : r.latex;
  return to_codepoints(s).size();
}

}  // namespace

std::vector<std::string> validate_record(const SampleRecord& record,
                                         const FilterConfig& config) {
  std::vector<std::string> violations;
  if (record.id.empty() || record.latex.empty())
    violations.push_back("empty-field");
  if (!record.latex.empty() && !latex_compiles(record))
    violations.push_back("invalid-latex");
  if (record.format != "sentences" &&
      is_text_only(record.latex, config.text_only_command_ratio))
    violations.push_back("text-only");
  bool has_pron = false;
  for (const auto& p : record.pronunciations)
    if (!p.empty()) has_pron = true;
  if (!has_pron) violations.push_back("missing-pronunciation");
  if (record.format == "equations" && has_unescaped_dollar(record.latex))
    violations.push_back("latex-contains-dollar");
  for (const auto& p : record.pronunciations)
    if (contains_latex_command(p)) {
      violations.push_back("pronunciation-contains-latex");
      break;
    }
  return violations;
}

FilterOutcome filter_corpus(const std::vector<SampleRecord>& records,
                            const FilterConfig& config) {
  FilterOutcome out;
  for (const auto& r : records) {
    std::vector<std::string> violations = validate_record(r, config);
    if (!violations.empty()) {
      out.rejected.push_back({r, violations.front()});
      continue;
    }
    if (r.format == "equations") {
      const std::size_t len = normalized_length(r);
      if (len < config.min_equation_chars) {
        out.rejected.push_back({r, "too-short"});
        continue;
      }
      if (len > config.max_equation_chars) {
        out.rejected.push_back({r, "too-long"});
        continue;
      }
      std::size_t shortest_pron = SIZE_MAX;
      for (const auto& p : r.pronunciations)
        if (!p.empty()) shortest_pron = std::min(shortest_pron, p.size());
      if (shortest_pron != SIZE_MAX &&
          static_cast<double>(len) >
              config.max_latex_to_pronunciation_ratio *
                  static_cast<double>(shortest_pron)) {
        out.rejected.push_back({r, "length-ratio"});
        continue;
      }
    }
    out.kept.push_back(r);
  }
  return out;
}

std::string dedup_family_key(const std::string& latex) {
  static const std::unordered_set<std::string> greek = {
      "\\alpha", "\\beta", "\\gamma", "\\delta", "\\epsilon", "\\varepsilon",
      "\\zeta", "\\eta", "\\theta", "\\vartheta", "\\iota", "\\kappa",
      "\\lambda", "\\mu", "\\nu", "\\xi", "\\pi", "\\varpi", "\\rho",
      "\\varrho", "\\sigma", "\\varsigma", "\\tau", "\\upsilon", "\\phi",
      "\\varphi", "\\chi", "\\psi", "\\omega", "\\Gamma", "\\Delta", "\\Theta",
      "\\Lambda", "\\Xi", "\\Pi", "\\Sigma", "\\Upsilon", "\\Phi", "\\Psi",
      "\\Omega"};
  Result<std::string> norm =
      normalize_string(latex, NormalizationConfig::paper_mode());
  const std::string s = norm.ok() ? norm.value() : latex;
  std::string key;
  for (const Token& t : tokenize(s)) {
    if (t.kind == TokenKind::Whitespace) continue;
    const bool single_letter =
        t.kind == TokenKind::Letter && t.text.size() == 1;
    if (single_letter || (t.kind == TokenKind::Command && greek.count(t.text)))
      key += "\x01";  // identifier placeholder
    else
      key += t.text;
  }
  return key;
}

std::vector<SampleRecord> dedup(const std::vector<SampleRecord>& records) {
  std::vector<SampleRecord> out;
  std::unordered_set<std::string> seen;
  std::unordered_map<std::string, std::size_t> family_counts;
  for (const auto& r : records) {
    Result<std::string> norm =
        normalize_string(r.latex, NormalizationConfig::paper_mode());
    const std::string key = norm.ok() ? norm.value() : r.latex;
    if (!seen.insert(key).second) continue;
    SampleRecord copy = r;
    copy.family_key = dedup_family_key(r.latex);
    ++family_counts[*copy.family_key];
    out.push_back(std::move(copy));
  }
  for (auto& r : out)
    r.near_duplicate = family_counts[*r.family_key] > 1;
  return out;
}

std::optional<std::size_t> length_bucket(std::size_t chars) {
  if (chars < 3) return std::nullopt;
  if (chars < 10) return 0;
  if (chars < 20) return 1;
  if (chars < 30) return 2;
  if (chars < 50) return 3;
  return 4;
}

StratumReport stratify(const std::vector<SampleRecord>& records) {
  StratumReport report;
  auto add_length = [&](const std::string& latex) {
    Result<std::string> norm =
        normalize_string(latex, NormalizationConfig::paper_mode());
    const std::string& s = norm.ok() ? norm.value() : latex;
    const std::size_t len = to_codepoints(s).size();
    if (auto bucket = length_bucket(len))
      ++report.by_equation_length[*bucket];
    else
      ++report.under_length_range;
  };
  for (const auto& r : records) {
    if (r.format == "sentences") {
      Result<std::vector<Segment>> segs = segment(r.latex);
      if (!segs.ok()) {
        ++report.unsegmentable;
        continue;
      }
      std::size_t count = 0;
      for (const auto& s : segs.value())
        if (s.kind == Segment::Kind::Math) {
          ++count;
          add_length(s.content);
        }
      if (count >= 1)
        ++report.by_equations_per_sentence[std::min<std::size_t>(count, 6) - 1];
    } else {
      add_length(r.latex);
    }
  }
  return report;
}

std::string stratum_report_json(const StratumReport& report) {
  json j;
  for (std::size_t i = 0; i < report.by_equation_length.size(); ++i)
    j["by_equation_length"][StratumReport::length_labels[i]] =
        report.by_equation_length[i];
  for (std::size_t i = 0; i < report.by_equations_per_sentence.size(); ++i)
    j["by_equations_per_sentence"][StratumReport::count_labels[i]] =
        report.by_equations_per_sentence[i];
  j["under_length_range"] = report.under_length_range;
  j["unsegmentable"] = report.unsegmentable;
  return j.dump(2);
}

}  // namespace s2l
