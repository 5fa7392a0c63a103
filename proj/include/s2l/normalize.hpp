#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "s2l/latex.hpp"

namespace s2l {

// "alias canonical" pairs, one per line, '#' comments; see data/operator_aliases.txt.
using AliasTable = std::unordered_map<std::string, std::string>;

const AliasTable& default_alias_table();
Result<AliasTable> load_alias_table(const std::string& path);

// Commands stripped by presentation stripping (\displaystyle, sizing, spacing).
const std::unordered_set<std::string>& default_strip_set();

// Operator names that have a dedicated command (\operatorname{max} -> \max).
const std::unordered_set<std::string>& known_operator_names();

struct NormalizationConfig {
  bool brace_scripts = true;
  bool collapse_spaces = true;
  bool rewrite_underset_overset = true;
  bool unify_operator_names = true;
  bool strip_dollars = true;
  bool strip_presentation = false;
  bool lowercase_output = false;
  // Sub-rule of collapse_spaces: a letter-run command immediately followed by
  // a letter or digit atom gets an explicit "\ " separator ("\Delta\ z").
  bool explicit_command_spacing = true;

  static NormalizationConfig paper_mode() { return {}; }
};

MathNode normalize(const MathNode& node, const NormalizationConfig& config,
                   const AliasTable& aliases = default_alias_table());

MathNode strip_presentation(const MathNode& node);

// strip dollars -> parse -> (strip_presentation) -> normalize -> render
// -> (lowercase).
Result<std::string> normalize_string(const std::string& latex,
                                     const NormalizationConfig& config,
                                     const AliasTable& aliases = default_alias_table());

std::string strip_dollar_delimiters(const std::string& latex);
std::string ascii_lowercase(std::string s);

// Metric-convention lowercase: every ASCII letter except those forming a
// backslash command name ("\Gamma x" -> "\Gamma x", "X" -> "x"), so case
// distinctions like \phi vs \Phi survive scoring.
std::string lowercase_preserving_commands(const std::string& s);

}  // namespace s2l
