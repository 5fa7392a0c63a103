#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "s2l/normalize.hpp"

namespace s2l {

struct Segment {
  enum class Kind { Text, Math };
  Kind kind;
  std::string content;  // Text: prose verbatim; Math: inner LaTeX, no dollars
  std::size_t begin = 0;  // byte range of content in the source
  std::size_t end = 0;

  bool operator==(const Segment&) const = default;
};

// Splits a sentence into ordered Text/Math segments. Recognized math
// delimiters: $...$ (display $$ treated as inline) and \( ... \).
// Escaped \$ is a literal dollar.
Result<std::vector<Segment>> segment(const std::string& sentence);

std::size_t count_equations(const std::vector<Segment>& segments);

struct EquationConcatOptions {
  std::string separator = " ";
  // Keep each formula wrapped in its dollar delimiters, as the evaluation
  // extracts them from the surface string.
  bool wrap_delimiters = true;
  // Run each math segment through normalize_string first (segments that fail
  // to parse are included verbatim).
  bool normalize_segments = false;
  NormalizationConfig normalization = NormalizationConfig::paper_mode();
};

std::string equations_concat(const std::vector<Segment>& segments,
                             const EquationConcatOptions& opts = {});

// Text segments joined in order, whitespace runs collapsed, ends trimmed.
std::string text_only(const std::vector<Segment>& segments);

}  // namespace s2l
