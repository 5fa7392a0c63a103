#include "s2l/latex.hpp"

#include <cctype>
#include <unordered_map>

namespace s2l {

namespace {

bool is_ascii_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ascii_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }
bool is_space_char(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::size_t utf8_len(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xe) return 3;
  if ((lead >> 3) == 0x1e) return 4;
  return 1;  // invalid lead byte, consume one byte
}

}  // namespace

const char* to_string(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::UnbalancedBrace: return "UnbalancedBrace";
    case ParseError::Kind::UnbalancedDollar: return "UnbalancedDollar";
    case ParseError::Kind::DanglingScriptMarker: return "DanglingScriptMarker";
    case ParseError::Kind::MissingArgument: return "MissingArgument";
    case ParseError::Kind::UnterminatedEnvironment: return "UnterminatedEnvironment";
  }
  return "ParseError";
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = source.size();
  auto push = [&](TokenKind k, std::size_t start, std::size_t len) {
    out.push_back(Token{k, std::string(source.substr(start, len)), start});
  };
  while (i < n) {
    const char c = source[i];
    if (c == '\\') {
      if (i + 1 >= n) {
        push(TokenKind::OtherSymbol, i, 1);
        ++i;
        continue;
      }
      if (is_ascii_letter(source[i + 1])) {
        std::size_t j = i + 1;
        while (j < n && is_ascii_letter(source[j])) ++j;
        push(TokenKind::Command, i, j - i);
        i = j;
      } else {
        // backslash + one non-letter character (one codepoint)
        std::size_t len = utf8_len(static_cast<unsigned char>(source[i + 1]));
        push(TokenKind::Command, i, 1 + len);
        i += 1 + len;
      }
      continue;
    }
    if (is_space_char(c)) {
      std::size_t j = i;
      while (j < n && is_space_char(source[j])) ++j;
      push(TokenKind::Whitespace, i, j - i);
      i = j;
      continue;
    }
    if (is_ascii_letter(c)) {
      push(TokenKind::Letter, i, 1);
      ++i;
      continue;
    }
    if (is_ascii_digit(c)) {
      push(TokenKind::Digit, i, 1);
      ++i;
      continue;
    }
    switch (c) {
      case '{': push(TokenKind::OpenBrace, i, 1); ++i; continue;
      case '}': push(TokenKind::CloseBrace, i, 1); ++i; continue;
      case '^': push(TokenKind::SuperscriptMarker, i, 1); ++i; continue;
      case '_': push(TokenKind::SubscriptMarker, i, 1); ++i; continue;
      case '$': push(TokenKind::Dollar, i, 1); ++i; continue;
      default: break;
    }
    if (static_cast<unsigned char>(c) < 0x80) {
      push(TokenKind::Punctuation, i, 1);
      ++i;
    } else {
      // one non-ASCII codepoint per token
      std::size_t len = utf8_len(static_cast<unsigned char>(c));
      if (i + len > n) len = n - i;
      push(TokenKind::OtherSymbol, i, len);
      i += len;
    }
  }
  return out;
}

namespace {

// Commands with a fixed argument list; everything else is an atomic symbol.
const std::unordered_map<std::string, int>& arity_table() {
  static const std::unordered_map<std::string, int> table = {
      {"\\frac", 2},    {"\\dfrac", 2},   {"\\tfrac", 2},  {"\\cfrac", 2},
      {"\\underset", 2}, {"\\overset", 2}, {"\\text", 1},
      {"\\mathbf", 1},  {"\\mathcal", 1}, {"\\mathrm", 1},
      {"\\operatorname", 1},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src), toks_(tokenize(src)) {}

  MathNode parse_top() {
    MathNode row = parse_row(StopAt::End, 0);
    return row;
  }

 private:
  enum class StopAt { End, CloseBrace, CloseBracket, EndCommand };

  [[noreturn]] void fail(ParseError::Kind kind, std::size_t pos, std::string msg) {
    throw ParseError{kind, pos, std::move(msg)};
  }

  bool at_end() const { return i_ >= toks_.size(); }
  const Token& cur() const { return toks_[i_]; }
  std::size_t here() const { return at_end() ? src_.size() : cur().position; }

  void skip_ws() {
    while (!at_end() && cur().kind == TokenKind::Whitespace) ++i_;
  }

  MathNode parse_row(StopAt stop, std::size_t open_pos) {
    std::vector<MathNode> items;
    while (true) {
      if (at_end()) {
        if (stop == StopAt::CloseBrace)
          fail(ParseError::Kind::UnbalancedBrace, open_pos, "unclosed brace");
        if (stop == StopAt::CloseBracket)
          fail(ParseError::Kind::MissingArgument, src_.size(), "unclosed bracket");
        if (stop == StopAt::EndCommand)
          fail(ParseError::Kind::UnterminatedEnvironment, open_pos,
               "missing \\end");
        break;
      }
      const Token& t = cur();
      if (t.kind == TokenKind::Whitespace) {
        ++i_;
        continue;
      }
      if (t.kind == TokenKind::CloseBrace) {
        if (stop != StopAt::CloseBrace)
          fail(ParseError::Kind::UnbalancedBrace, t.position, "unmatched '}'");
        ++i_;
        break;
      }
      if (stop == StopAt::CloseBracket && t.kind == TokenKind::Punctuation &&
          t.text == "]") {
        ++i_;
        break;
      }
      if (stop == StopAt::EndCommand && t.kind == TokenKind::Command &&
          t.text == "\\end") {
        break;  // caller consumes the \end{...}
      }
      if (t.kind == TokenKind::Dollar) {
        fail(ParseError::Kind::UnbalancedDollar, t.position,
             "'$' inside math content");
      }
      if (t.kind == TokenKind::SubscriptMarker ||
          t.kind == TokenKind::SuperscriptMarker) {
        attach_script(items, t);
        continue;
      }
      items.push_back(parse_atom());
    }
    MathNode row = MathNode::row(std::move(items));
    return row;
  }

  void attach_script(std::vector<MathNode>& items, const Token& marker) {
    const bool is_sub = marker.kind == TokenKind::SubscriptMarker;
    if (items.empty())
      fail(ParseError::Kind::DanglingScriptMarker, marker.position,
           "script marker without a base");
    ++i_;
    skip_ws();
    if (at_end())
      fail(ParseError::Kind::MissingArgument, src_.size(),
           "script marker without an argument");
    MathNode arg = parse_script_arg();
    MathNode& prev = items.back();
    if (prev.kind == MathNode::Kind::Script &&
        ((is_sub && !prev.has_sub) || (!is_sub && !prev.has_sup))) {
      if (is_sub) {
        prev.children.insert(prev.children.begin() + 1, std::move(arg));
        prev.has_sub = true;
      } else {
        prev.children.push_back(std::move(arg));
        prev.has_sup = true;
      }
      return;
    }
    if (prev.kind == MathNode::Kind::Script)
      fail(ParseError::Kind::DanglingScriptMarker, marker.position,
           is_sub ? "double subscript" : "double superscript");
    MathNode script;
    script.kind = MathNode::Kind::Script;
    script.children.push_back(std::move(prev));
    script.children.push_back(std::move(arg));
    if (is_sub)
      script.has_sub = true;
    else
      script.has_sup = true;
    items.back() = std::move(script);
  }

  // A script/command argument: a braced group, a command (with its own
  // arguments), or a single token.
  MathNode parse_script_arg() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::OpenBrace: {
        std::size_t open = t.position;
        ++i_;
        MathNode row = parse_row(StopAt::CloseBrace, open);
        return MathNode::group(std::move(row.children));
      }
      case TokenKind::Command:
        return parse_atom();
      case TokenKind::Letter:
      case TokenKind::Digit:
      case TokenKind::Punctuation:
      case TokenKind::OtherSymbol: {
        MathNode s = MathNode::symbol(t.text);
        ++i_;
        return s;
      }
      default:
        fail(ParseError::Kind::MissingArgument, t.position,
             "expected script argument");
    }
  }

  // A command argument, always wrapped in a Group so "\mathbf x" and
  // "\mathbf{x}" parse identically.
  MathNode parse_arg(const std::string& for_command) {
    skip_ws();
    if (at_end())
      fail(ParseError::Kind::MissingArgument, src_.size(),
           "missing argument of " + for_command);
    const Token& t = cur();
    if (t.kind == TokenKind::OpenBrace) {
      std::size_t open = t.position;
      ++i_;
      MathNode row = parse_row(StopAt::CloseBrace, open);
      return MathNode::group(std::move(row.children));
    }
    if (t.kind == TokenKind::Command || t.kind == TokenKind::Letter ||
        t.kind == TokenKind::Digit || t.kind == TokenKind::Punctuation ||
        t.kind == TokenKind::OtherSymbol) {
      std::vector<MathNode> one;
      one.push_back(parse_atom());
      return MathNode::group(std::move(one));
    }
    fail(ParseError::Kind::MissingArgument, t.position,
         "missing argument of " + for_command);
  }

  MathNode parse_atom() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::OpenBrace: {
        std::size_t open = t.position;
        ++i_;
        MathNode row = parse_row(StopAt::CloseBrace, open);
        return MathNode::group(std::move(row.children));
      }
      case TokenKind::Command:
        return parse_command();
      case TokenKind::Letter:
      case TokenKind::Digit:
      case TokenKind::Punctuation:
      case TokenKind::OtherSymbol: {
        MathNode s = MathNode::symbol(t.text);
        ++i_;
        return s;
      }
      default:
        fail(ParseError::Kind::MissingArgument, t.position, "unexpected token");
    }
  }

  MathNode parse_command() {
    const Token tok = cur();
    const std::string& name = tok.text;
    if (name == "\\sqrt") return parse_sqrt();
    if (name == "\\begin") return parse_environment();
    if (name == "\\end")
      fail(ParseError::Kind::UnterminatedEnvironment, tok.position,
           "\\end without matching \\begin");
    if (name == "\\text") return parse_text_block();
    auto it = arity_table().find(name);
    if (it == arity_table().end()) {
      ++i_;
      return MathNode::symbol(name);
    }
    ++i_;
    MathNode cmd;
    cmd.kind = MathNode::Kind::Command;
    cmd.text = name;
    for (int k = 0; k < it->second; ++k) cmd.children.push_back(parse_arg(name));
    if (name == "\\frac") {
      cmd.kind = MathNode::Kind::Fraction;
      cmd.text.clear();
    }
    return cmd;
  }

  MathNode parse_sqrt() {
    ++i_;
    skip_ws();
    MathNode rad;
    rad.kind = MathNode::Kind::Radical;
    if (!at_end() && cur().kind == TokenKind::Punctuation && cur().text == "[") {
      const std::size_t open = cur().position;
      ++i_;
      MathNode row = parse_row(StopAt::CloseBracket, open);
      rad.children.push_back(MathNode::group(std::move(row.children)));
      rad.has_index = true;
    }
    rad.children.push_back(parse_arg("\\sqrt"));
    return rad;
  }

  // \text{...}: content kept verbatim, byte for byte, nested braces allowed.
  MathNode parse_text_block() {
    const std::size_t cmd_pos = cur().position;
    ++i_;
    skip_ws();
    if (at_end())
      fail(ParseError::Kind::MissingArgument, src_.size(),
           "missing argument of \\text");
    if (cur().kind != TokenKind::OpenBrace) {
      // single-token argument, e.g. "\text x"
      MathNode tb;
      tb.kind = MathNode::Kind::TextBlock;
      tb.text = cur().text;
      ++i_;
      return tb;
    }
    const std::size_t open = cur().position;
    int depth = 0;
    std::size_t j = i_;
    std::size_t close = std::string::npos;
    for (; j < toks_.size(); ++j) {
      if (toks_[j].kind == TokenKind::OpenBrace) ++depth;
      if (toks_[j].kind == TokenKind::CloseBrace && --depth == 0) {
        close = toks_[j].position;
        break;
      }
    }
    if (close == std::string::npos)
      fail(ParseError::Kind::UnbalancedBrace, open, "unclosed \\text argument");
    MathNode tb;
    tb.kind = MathNode::Kind::TextBlock;
    tb.text = std::string(src_.substr(open + 1, close - open - 1));
    i_ = j + 1;
    (void)cmd_pos;
    return tb;
  }

  MathNode parse_environment() {
    const std::size_t begin_pos = cur().position;
    ++i_;
    std::string name = parse_env_name(begin_pos);
    MathNode body = parse_row(StopAt::EndCommand, begin_pos);
    // consume \end{name}
    if (at_end())
      fail(ParseError::Kind::UnterminatedEnvironment, begin_pos, "missing \\end");
    const std::size_t end_pos = cur().position;
    ++i_;
    std::string end_name = parse_env_name(end_pos);
    if (end_name != name)
      fail(ParseError::Kind::UnterminatedEnvironment, end_pos,
           "\\end{" + end_name + "} does not match \\begin{" + name + "}");
    MathNode env;
    env.kind = MathNode::Kind::Environment;
    env.text = std::move(name);
    env.children.push_back(std::move(body));
    return env;
  }

  std::string parse_env_name(std::size_t at) {
    skip_ws();
    if (at_end() || cur().kind != TokenKind::OpenBrace)
      fail(ParseError::Kind::MissingArgument, here(), "expected environment name");
    ++i_;
    std::string name;
    while (!at_end() && cur().kind != TokenKind::CloseBrace) {
      if (cur().kind == TokenKind::Letter || cur().kind == TokenKind::Digit ||
          (cur().kind == TokenKind::Punctuation && cur().text == "*")) {
        name += cur().text;
        ++i_;
      } else {
        fail(ParseError::Kind::MissingArgument, cur().position,
             "malformed environment name");
      }
    }
    if (at_end())
      fail(ParseError::Kind::UnbalancedBrace, at, "unclosed environment name");
    ++i_;
    return name;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool is_command_word(std::string_view s) {
  if (s.size() < 2 || s[0] != '\\') return false;
  for (std::size_t k = 1; k < s.size(); ++k)
    if (!is_ascii_letter(s[k])) return false;
  return true;
}

class Emitter {
 public:
  explicit Emitter(const RenderOptions& opts) : opts_(opts) {}

  void emit(std::string_view piece) {
    if (piece.empty()) return;
    if (cmd_tail_ && is_ascii_letter(piece[0])) out_ += ' ';
    out_ += piece;
    cmd_tail_ = is_command_word(piece);
  }

  void node(const MathNode& n) {
    switch (n.kind) {
      case MathNode::Kind::Symbol:
        emit(n.text);
        return;
      case MathNode::Kind::Row:
        for (const auto& c : n.children) node(c);
        return;
      case MathNode::Kind::Group:
        emit("{");
        for (const auto& c : n.children) node(c);
        emit("}");
        return;
      case MathNode::Kind::Command:
        emit(n.text);
        for (const auto& c : n.children) braced(c);
        return;
      case MathNode::Kind::Fraction:
        emit("\\frac");
        braced(n.children[0]);
        braced(n.children[1]);
        return;
      case MathNode::Kind::Radical:
        emit("\\sqrt");
        if (n.has_index) {
          emit("[");
          inner(n.children[0]);
          emit("]");
        }
        braced(n.children[n.has_index ? 1 : 0]);
        return;
      case MathNode::Kind::Script:
        node(n.script_base());
        if (const MathNode* sub = n.script_sub()) {
          emit("_");
          script_arg(*sub);
        }
        if (const MathNode* sup = n.script_sup()) {
          emit("^");
          script_arg(*sup);
        }
        return;
      case MathNode::Kind::TextBlock:
        emit("\\text");
        emit("{");
        out_ += n.text;  // verbatim, no spacing logic
        cmd_tail_ = false;
        emit("}");
        return;
      case MathNode::Kind::Environment:
        emit("\\begin");
        emit("{");
        out_ += n.text;
        cmd_tail_ = false;
        emit("}");
        for (const auto& c : n.children) node(c);
        emit("\\end");
        emit("{");
        out_ += n.text;
        cmd_tail_ = false;
        emit("}");
        return;
    }
  }

  std::string take() { return std::move(out_); }

 private:
  // Argument position: groups render as their braced contents.
  void braced(const MathNode& n) {
    emit("{");
    inner(n);
    emit("}");
  }

  void inner(const MathNode& n) {
    if (n.kind == MathNode::Kind::Group || n.kind == MathNode::Kind::Row)
      for (const auto& c : n.children) node(c);
    else
      node(n);
  }

  void script_arg(const MathNode& n) {
    if (!opts_.brace_scripts) {
      // unbraced form allowed only for a single plain atom
      const MathNode* atom = nullptr;
      if (n.kind == MathNode::Kind::Symbol) atom = &n;
      if (n.kind == MathNode::Kind::Group && n.children.size() == 1 &&
          n.children[0].kind == MathNode::Kind::Symbol)
        atom = &n.children[0];
      if (atom) {
        emit(atom->text);
        return;
      }
    }
    braced(n);
  }

  RenderOptions opts_;
  std::string out_;
  bool cmd_tail_ = false;
};

}  // namespace

Result<MathNode> parse(std::string_view source) {
  try {
    Parser p(source);
    return p.parse_top();
  } catch (ParseError& e) {
    if (e.position > source.size()) e.position = source.size();
    return e;
  }
}

std::string render(const MathNode& node, const RenderOptions& opts) {
  Emitter em(opts);
  em.node(node);
  return em.take();
}

}  // namespace s2l
