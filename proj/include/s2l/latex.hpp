#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace s2l {

enum class TokenKind {
  Command,
  Letter,
  Digit,
  OpenBrace,
  CloseBrace,
  SuperscriptMarker,
  SubscriptMarker,
  Punctuation,
  Whitespace,
  Dollar,
  OtherSymbol,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t position;  // byte offset into the source
};

// Lossless: concatenating the token texts reproduces the input exactly.
std::vector<Token> tokenize(std::string_view source);

struct MathNode {
  enum class Kind {
    Symbol,       // text = symbol ("x", "1", "(", "\sum", "\,")
    Command,      // text = command name with backslash; children = braced args
    Group,        // children = contents of a brace group (or a wrapped argument)
    Script,       // children = [base, sub?, sup?]; see has_sub/has_sup
    Fraction,     // children = [numerator, denominator], both Group
    Radical,      // children = [index?, radicand]; see has_index
    TextBlock,    // text = raw bytes between the braces of \text{...}
    Environment,  // text = environment name; children = [body Row]
    Row,          // children = sequence of nodes
  };

  Kind kind = Kind::Row;
  std::string text;
  std::vector<MathNode> children;
  bool has_sub = false;
  bool has_sup = false;
  bool has_index = false;

  bool operator==(const MathNode&) const = default;

  const MathNode& script_base() const { return children[0]; }
  const MathNode* script_sub() const { return has_sub ? &children[1] : nullptr; }
  const MathNode* script_sup() const {
    return has_sup ? &children[has_sub ? 2 : 1] : nullptr;
  }

  static MathNode symbol(std::string s) {
    MathNode n;
    n.kind = Kind::Symbol;
    n.text = std::move(s);
    return n;
  }
  static MathNode row(std::vector<MathNode> kids) {
    MathNode n;
    n.kind = Kind::Row;
    n.children = std::move(kids);
    return n;
  }
  static MathNode group(std::vector<MathNode> kids) {
    MathNode n;
    n.kind = Kind::Group;
    n.children = std::move(kids);
    return n;
  }
};

struct ParseError {
  enum class Kind {
    UnbalancedBrace,
    UnbalancedDollar,
    DanglingScriptMarker,
    MissingArgument,
    UnterminatedEnvironment,
  };
  Kind kind;
  std::size_t position = 0;
  std::string message;
};

const char* to_string(ParseError::Kind kind);

template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(ParseError err) : v_(std::move(err)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const { return std::get<T>(v_); }
  T& value() { return std::get<T>(v_); }
  const ParseError& error() const { return std::get<ParseError>(v_); }

 private:
  std::variant<T, ParseError> v_;
};

// Parses a LaTeX-math fragment (no surrounding dollar delimiters) into a Row.
// Whitespace is non-semantic and dropped, except inside \text{...} and the
// explicit "\ " command, which survives as a Symbol.
Result<MathNode> parse(std::string_view source);

struct RenderOptions {
  // When true (canonical form), script arguments are always braced.
  bool brace_scripts = true;
};

// Deterministic serialization. The only spaces emitted are those required to
// terminate a letter-run command before a following letter ("\sum i").
std::string render(const MathNode& node, const RenderOptions& opts = {});

}  // namespace s2l
