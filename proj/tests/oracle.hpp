// Test-only helpers: independent oracles and deterministic input generators.
// Everything here stays independent of the implementation paths it checks.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace testing_oracle {

// Quadratic-space DP, distance only; no shared code with s2l::edit_ops.
template <typename Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// Random strings over an 8-symbol alphabet including backslash and braces.
inline std::string random_string(std::mt19937& rng, std::size_t max_len) {
  static const char alphabet[] = {'a', 'b', 'x', '1', '\\', '{', '}', '+'};
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<int> ch(0, 7);
  std::string s;
  const std::size_t len = len_dist(rng);
  for (std::size_t i = 0; i < len; ++i) s += alphabet[ch(rng)];
  return s;
}

// Grammar-based formula generator over the parser's arity table.
class FormulaGenerator {
 public:
  explicit FormulaGenerator(uint32_t seed) : rng_(seed) {}

  std::string formula() { return sequence(3); }

 private:
  std::string sequence(int depth) {
    std::uniform_int_distribution<int> count(1, 4);
    std::string out;
    const int n = count(rng_);
    for (int i = 0; i < n; ++i) out += item(depth);
    return out;
  }

  std::string item(int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 9 : 4);
    switch (pick(rng_)) {
      case 0: return atom();
      case 1: return atom();
      case 2: return command_symbol();
      case 3: return atom() + std::string("+") + atom();
      case 4: return "(" + atom() + ")";
      case 5: return "\\frac{" + sequence(depth - 1) + "}{" + sequence(depth - 1) + "}";
      case 6: return "\\sqrt{" + sequence(depth - 1) + "}";
      case 7: return atom() + "_{" + sequence(depth - 1) + "}";
      case 8: return atom() + "^{" + sequence(depth - 1) + "}" ;
      default:
        return "{" + sequence(depth - 1) + "}";
    }
  }

  std::string atom() {
    static const char* atoms[] = {"x", "y", "n", "k", "1", "2", "0"};
    std::uniform_int_distribution<int> pick(0, 6);
    return atoms[pick(rng_)];
  }

  std::string command_symbol() {
    static const char* cmds[] = {"\\alpha", "\\sum", "\\sim",  "\\Delta",
                                 "\\max",   "\\leq", "\\infty", "\\pi"};
    std::uniform_int_distribution<int> pick(0, 7);
    return cmds[pick(rng_)];
  }

  std::mt19937 rng_;
};

// Sentences with 0..max_pairs balanced dollar pairs.
inline std::string random_sentence(std::mt19937& rng, int max_pairs) {
  static const char* words[] = {"let",  "be",  "a",    "graph", "on",
                                "with", "the", "then", "holds"};
  static const char* maths[] = {"x", "f(x)", "n+1", "\\frac{1}{2}",
                                "a_{i}", ""};
  std::uniform_int_distribution<int> pairs(0, max_pairs);
  std::uniform_int_distribution<int> w(0, 8), m(0, 5), wn(1, 3);
  std::string s;
  const int k = pairs(rng);
  for (int i = 0; i < k; ++i) {
    const int nw = wn(rng);
    for (int j = 0; j < nw; ++j) {
      s += words[w(rng)];
      s += ' ';
    }
    s += '$';
    s += maths[m(rng)];
    s += '$';
    s += ' ';
  }
  const int nw = wn(rng);
  for (int j = 0; j < nw; ++j) {
    if (!s.empty() && s.back() != ' ') s += ' ';
    s += words[w(rng)];
  }
  return s;
}

}  // namespace testing_oracle
