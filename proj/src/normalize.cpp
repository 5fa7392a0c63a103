#include "s2l/normalize.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace s2l {

namespace {

const std::unordered_set<std::string>& big_operator_set() {
  static const std::unordered_set<std::string> ops = {
      "\\max", "\\min", "\\sup", "\\inf", "\\lim", "\\limsup", "\\liminf",
      "\\sum", "\\prod", "\\coprod", "\\int", "\\oint", "\\bigcup", "\\bigcap",
      "\\bigoplus", "\\bigotimes", "\\bigsqcup", "\\bigvee", "\\bigwedge",
      "\\argmax", "\\argmin",
  };
  return ops;
}

bool is_letter_run_command(const std::string& s) {
  if (s.size() < 2 || s[0] != '\\') return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isalpha(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

// Unwraps Group/Row layers that contain exactly one node.
const MathNode* unwrap_singleton(const MathNode& n) {
  const MathNode* cur = &n;
  while ((cur->kind == MathNode::Kind::Group || cur->kind == MathNode::Kind::Row) &&
         cur->children.size() == 1)
    cur = &cur->children[0];
  return cur;
}

}  // namespace

const AliasTable& default_alias_table() {
  static const AliasTable table = {
      {"\\dfrac", "\\frac"},  {"\\tfrac", "\\frac"}, {"\\cfrac", "\\frac"},
      {"\\le", "\\leq"},      {"\\ge", "\\geq"},     {"\\ne", "\\neq"},
      {"\\to", "\\rightarrow"}, {"\\gets", "\\leftarrow"},
      {"\\land", "\\wedge"},  {"\\lor", "\\vee"},    {"\\lnot", "\\neg"},
      {"\\owns", "\\ni"},     {"\\implies", "\\Rightarrow"},
  };
  return table;
}

Result<AliasTable> load_alias_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    return ParseError{ParseError::Kind::MissingArgument, 0,
                      "cannot open alias table: " + path};
  AliasTable table;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string alias, canonical;
    if (ls >> alias >> canonical) table[alias] = canonical;
  }
  return table;
}

const std::unordered_set<std::string>& default_strip_set() {
  static const std::unordered_set<std::string> strip = {
      "\\displaystyle", "\\textstyle", "\\scriptstyle", "\\scriptscriptstyle",
      "\\left", "\\right", "\\limits", "\\nolimits",
      "\\big", "\\Big", "\\bigg", "\\Bigg",
      "\\bigl", "\\bigr", "\\Bigl", "\\Bigr",
      "\\biggl", "\\biggr", "\\Biggl", "\\Biggr", "\\bigm", "\\Bigm",
      "\\!", "\\,", "\\:", "\\;", "\\quad", "\\qquad",
      "\\thinspace", "\\negthinspace", "\\mathstrut",
  };
  return strip;
}

const std::unordered_set<std::string>& known_operator_names() {
  static const std::unordered_set<std::string> names = {
      "max", "min", "sup", "inf", "lim", "limsup", "liminf",
      "sin", "cos", "tan", "cot", "sec", "csc",
      "sinh", "cosh", "tanh", "coth",
      "arcsin", "arccos", "arctan",
      "log", "ln", "lg", "exp", "det", "gcd", "deg", "dim", "ker", "hom",
      "arg", "Pr", "argmax", "argmin",
  };
  return names;
}

namespace {

class Normalizer {
 public:
  Normalizer(const NormalizationConfig& cfg, const AliasTable& aliases)
      : cfg_(cfg), aliases_(aliases) {}

  MathNode transform(const MathNode& n) {
    MathNode out = n;
    switch (n.kind) {
      case MathNode::Kind::Symbol:
        if (cfg_.unify_operator_names) {
          auto it = aliases_.find(out.text);
          if (it != aliases_.end()) out.text = it->second;
        }
        return out;
      case MathNode::Kind::TextBlock:
        return out;
      case MathNode::Kind::Command: {
        out.children.clear();
        for (const auto& c : n.children) out.children.push_back(transform(c));
        if (cfg_.unify_operator_names) {
          auto it = aliases_.find(out.text);
          if (it != aliases_.end()) out.text = it->second;
        }
        if (out.text == "\\frac" && out.children.size() == 2) {
          out.kind = MathNode::Kind::Fraction;
          out.text.clear();
          return out;
        }
        if (cfg_.rewrite_underset_overset &&
            (out.text == "\\underset" || out.text == "\\overset") &&
            out.children.size() == 2) {
          const MathNode* body = unwrap_singleton(out.children[1]);
          if (body->kind == MathNode::Kind::Symbol &&
              big_operator_set().count(body->text)) {
            MathNode script;
            script.kind = MathNode::Kind::Script;
            script.children.push_back(*body);
            script.children.push_back(out.children[0]);
            if (out.text == "\\underset")
              script.has_sub = true;
            else
              script.has_sup = true;
            return script;
          }
        }
        return out;
      }
      default: {
        out.children.clear();
        for (const auto& c : n.children) out.children.push_back(transform(c));
        if (n.kind == MathNode::Kind::Row || n.kind == MathNode::Kind::Group)
          apply_command_spacing(out.children);
        return out;
      }
    }
  }

 private:
  // Spacing rule: "\Delta z\sim1" -> "\Delta\ z\sim\ 1".
  void apply_command_spacing(std::vector<MathNode>& items) {
    if (!cfg_.collapse_spaces || !cfg_.explicit_command_spacing) return;
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
      const MathNode& a = items[i];
      const MathNode& b = items[i + 1];
      if (a.kind != MathNode::Kind::Symbol || b.kind != MathNode::Kind::Symbol)
        continue;
      if (!is_letter_run_command(a.text)) continue;
      if (b.text.empty() ||
          !std::isalnum(static_cast<unsigned char>(b.text[0])))
        continue;
      items.insert(items.begin() + i + 1, MathNode::symbol("\\ "));
      ++i;
    }
  }

  const NormalizationConfig& cfg_;
  const AliasTable& aliases_;
};

class PresentationStripper {
 public:
  MathNode transform(const MathNode& n) {
    MathNode out = n;
    if (n.kind == MathNode::Kind::Command && n.text == "\\operatorname" &&
        n.children.size() == 1)
      return unwrap_operatorname(n);
    if (n.kind == MathNode::Kind::Symbol || n.kind == MathNode::Kind::TextBlock)
      return out;
    out.children.clear();
    for (const auto& c : n.children) out.children.push_back(transform(c));
    if (n.kind == MathNode::Kind::Row || n.kind == MathNode::Kind::Group)
      strip_list(out.children);
    return out;
  }

 private:
  static void strip_list(std::vector<MathNode>& items) {
    std::vector<MathNode> kept;
    for (std::size_t i = 0; i < items.size(); ++i) {
      const MathNode& n = items[i];
      if (n.kind == MathNode::Kind::Symbol && default_strip_set().count(n.text)) {
        // "\left." / "\right." use '.' as an invisible delimiter
        if ((n.text == "\\left" || n.text == "\\right") &&
            i + 1 < items.size() &&
            items[i + 1].kind == MathNode::Kind::Symbol &&
            items[i + 1].text == ".")
          ++i;
        continue;
      }
      kept.push_back(n);
    }
    items = std::move(kept);
  }

  // \operatorname{max} -> \max; \operatorname{Var} -> \text{Var}
  static MathNode unwrap_operatorname(const MathNode& n) {
    std::string name;
    bool plain = true;
    const MathNode& arg = n.children[0];
    for (const auto& c : arg.children) {
      if (c.kind == MathNode::Kind::Symbol && c.text.size() == 1 &&
          std::isalpha(static_cast<unsigned char>(c.text[0])))
        name += c.text;
      else
        plain = false;
    }
    if (plain && known_operator_names().count(name))
      return MathNode::symbol("\\" + name);
    if (plain && !name.empty()) {
      MathNode tb;
      tb.kind = MathNode::Kind::TextBlock;
      tb.text = name;
      return tb;
    }
    return n;  // non-letter content, leave as-is
  }
};

}  // namespace

MathNode normalize(const MathNode& node, const NormalizationConfig& config,
                   const AliasTable& aliases) {
  Normalizer n(config, aliases);
  return n.transform(node);
}

MathNode strip_presentation(const MathNode& node) {
  PresentationStripper s;
  return s.transform(node);
}

std::string strip_dollar_delimiters(const std::string& latex) {
  std::size_t b = 0, e = latex.size();
  while (b < e && std::isspace(static_cast<unsigned char>(latex[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(latex[e - 1]))) --e;
  std::string s = latex.substr(b, e - b);
  auto strip_pair = [&](const std::string& open, const std::string& close) {
    if (s.size() >= open.size() + close.size() &&
        s.compare(0, open.size(), open) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
      s = s.substr(open.size(), s.size() - open.size() - close.size());
      return true;
    }
    return false;
  };
  if (strip_pair("$$", "$$")) return s;
  if (strip_pair("\\[", "\\]")) return s;
  if (strip_pair("\\(", "\\)")) return s;
  strip_pair("$", "$");
  return s;
}

std::string ascii_lowercase(std::string s) {
  for (char& c : s)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string lowercase_preserving_commands(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '\\' && i + 1 < s.size() &&
        std::isalpha(static_cast<unsigned char>(s[i + 1]))) {
      out += s[i++];
      while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i])))
        out += s[i++];
      continue;
    }
    out += static_cast<char>(
        std::tolower(static_cast<unsigned char>(s[i])));
    ++i;
  }
  return out;
}

Result<std::string> normalize_string(const std::string& latex,
                                     const NormalizationConfig& config,
                                     const AliasTable& aliases) {
  std::string src = config.strip_dollars ? strip_dollar_delimiters(latex) : latex;
  Result<MathNode> parsed = parse(src);
  if (!parsed.ok()) return parsed.error();
  MathNode node = parsed.value();
  if (config.strip_presentation) node = strip_presentation(node);
  node = normalize(node, config, aliases);
  RenderOptions opts;
  opts.brace_scripts = config.brace_scripts;
  std::string out = render(node, opts);
  if (config.lowercase_output) out = lowercase_preserving_commands(out);
  return out;
}

}  // namespace s2l
