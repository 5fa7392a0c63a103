#include "s2l/segment.hpp"

#include <cctype>

namespace s2l {

Result<std::vector<Segment>> segment(const std::string& sentence) {
  std::vector<Segment> out;
  std::string text;
  std::size_t text_begin = 0;
  auto flush_text = [&](std::size_t end) {
    if (text.empty()) return;
    if (!out.empty() && out.back().kind == Segment::Kind::Text) {
      out.back().content += text;
      out.back().end = end;
    } else {
      out.push_back({Segment::Kind::Text, text, text_begin, end});
    }
    text.clear();
  };

  const std::size_t n = sentence.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = sentence[i];
    if (c == '\\' && i + 1 < n) {
      const char next = sentence[i + 1];
      if (next == '$') {  // literal dollar
        if (text.empty()) text_begin = i;
        text += "\\$";
        i += 2;
        continue;
      }
      if (next == '(') {
        flush_text(i);
        std::size_t open = i;
        std::size_t j = i + 2;
        std::size_t close = std::string::npos;
        while (j + 1 < n) {
          if (sentence[j] == '\\' && sentence[j + 1] == ')') {
            close = j;
            break;
          }
          j += (sentence[j] == '\\') ? 2 : 1;
        }
        if (close == std::string::npos)
          return ParseError{ParseError::Kind::UnbalancedDollar, open,
                            "\\( without matching \\)"};
        out.push_back({Segment::Kind::Math,
                       sentence.substr(open + 2, close - open - 2), open + 2,
                       close});
        i = close + 2;
        continue;
      }
    }
    if (c == '$') {
      flush_text(i);
      std::size_t open = i;
      std::size_t j = i + 1;
      std::size_t close = std::string::npos;
      while (j < n) {
        if (sentence[j] == '\\' && j + 1 < n) {
          j += 2;
          continue;
        }
        if (sentence[j] == '$') {
          close = j;
          break;
        }
        ++j;
      }
      if (close == std::string::npos)
        return ParseError{ParseError::Kind::UnbalancedDollar, open,
                          "unpaired '$'"};
      out.push_back({Segment::Kind::Math,
                     sentence.substr(open + 1, close - open - 1), open + 1,
                     close});
      i = close + 1;
      continue;
    }
    if (text.empty()) text_begin = i;
    text += c;
    ++i;
  }
  flush_text(n);
  return out;
}

std::size_t count_equations(const std::vector<Segment>& segments) {
  std::size_t count = 0;
  for (const auto& s : segments)
    if (s.kind == Segment::Kind::Math) ++count;
  return count;
}

std::string equations_concat(const std::vector<Segment>& segments,
                             const EquationConcatOptions& opts) {
  std::string out;
  bool first = true;
  for (const auto& s : segments) {
    if (s.kind != Segment::Kind::Math) continue;
    std::string content = s.content;
    if (opts.normalize_segments) {
      Result<std::string> norm = normalize_string(content, opts.normalization);
      if (norm.ok())
        content = norm.value();
      else
        content = strip_dollar_delimiters(content);  // score verbatim
    }
    if (!first) out += opts.separator;
    if (opts.wrap_delimiters) out += '$';
    out += content;
    if (opts.wrap_delimiters) out += '$';
    first = false;
  }
  return out;
}

std::string text_only(const std::vector<Segment>& segments) {
  std::string joined;
  for (const auto& s : segments)
    if (s.kind == Segment::Kind::Text) joined += s.content;
  std::string out;
  bool in_space = false;
  for (char c : joined) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
      continue;
    }
    if (in_space && !out.empty()) out += ' ';
    in_space = false;
    out += c;
  }
  return out;
}

}  // namespace s2l
