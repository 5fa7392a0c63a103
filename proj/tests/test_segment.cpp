#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "s2l/metrics.hpp"
#include "s2l/segment.hpp"

using namespace s2l;

namespace {

std::vector<Segment> seg(const std::string& s) {
  auto r = segment(s);
  REQUIRE(r.ok());
  return r.value();
}

std::string reconstruct(const std::vector<Segment>& segs) {
  std::string out;
  for (const auto& s : segs) {
    if (s.kind == Segment::Kind::Math)
      out += "$" + s.content + "$";
    else
      out += s.content;
  }
  return out;
}

}  // namespace

TEST_CASE("no delimiters") {
  auto segs = seg("no math here");
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].kind == Segment::Kind::Text);
  CHECK(segs[0].content == "no math here");
}

TEST_CASE("mixed sentence splits into ordered segments") {
  auto segs = seg("Let $f: Y\\longrightarrow X$ be a morphism over $k$.");
  REQUIRE(segs.size() == 5);
  CHECK(segs[0].content == "Let ");
  CHECK(segs[1].kind == Segment::Kind::Math);
  CHECK(segs[1].content == "f: Y\\longrightarrow X");
  CHECK(segs[2].content == " be a morphism over ");
  CHECK(segs[3].kind == Segment::Kind::Math);
  CHECK(segs[3].content == "k");
  CHECK(segs[4].content == ".");
}

TEST_CASE("unpaired dollar is an error") {
  auto r = segment("a$b");
  REQUIRE(!r.ok());
  CHECK(r.error().kind == ParseError::Kind::UnbalancedDollar);
  CHECK(r.error().position == 1);
}

TEST_CASE("empty math span yields an empty Math segment") {
  auto segs = seg("a$$b");
  REQUIRE(segs.size() == 3);
  CHECK(segs[1].kind == Segment::Kind::Math);
  CHECK(segs[1].content == "");
}

TEST_CASE("escaped dollar is literal text") {
  auto segs = seg("price \\$5 and $x$");
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].content == "price \\$5 and ");
  CHECK(segs[1].content == "x");
}

TEST_CASE("paren-style delimiters") {
  auto segs = seg("a \\(x+1\\) b");
  REQUIRE(segs.size() == 3);
  CHECK(segs[1].kind == Segment::Kind::Math);
  CHECK(segs[1].content == "x+1");
  CHECK(!segment("a \\(x").ok());
}

TEST_CASE("count_equations") {
  CHECK(count_equations(seg("a $x$ b $y$ c")) == 2);
  CHECK(count_equations(seg("plain")) == 0);
}

TEST_CASE("text_only joins and collapses whitespace") {
  CHECK(text_only(seg("a $x$ b")) == "a b");
  CHECK(text_only(std::vector<Segment>{}) == "");
  CHECK(text_only(seg("Hence, $c_{n-2}$ wins by the tie breaking.")) ==
        "Hence, wins by the tie breaking.");
}

TEST_CASE("equations_concat defaults") {
  auto segs = seg("a $x$ b $y$ c");
  CHECK(equations_concat(segs) == "$x$ $y$");
  EquationConcatOptions bare;
  bare.wrap_delimiters = false;
  CHECK(equations_concat(segs, bare) == "x y");
  CHECK(equations_concat(seg("hi")) == "");
}

TEST_CASE("equations_concat normalization and fallback") {
  EquationConcatOptions opts;
  opts.wrap_delimiters = false;
  opts.normalize_segments = true;
  auto segs = seg("take $\\sum_i^n i$ and $\\frac{1}{2$");
  CHECK(equations_concat(segs, opts) == "\\sum_{i}^{n}i \\frac{1}{2");
}

TEST_CASE("worked sentence example scores 27.27% equation-only CER") {
  const std::string pred =
      "Given a fixed graph $F$, a typical problem on a large graph $G$ on $n$ "
      "vertices that contains no copy of $F$ can have an upper bound on the "
      "number of its edges, denoted by $X(n,F)$";
  const std::string ref =
      "Given a fixed graph $F$, a typical problem in extremal graph theory "
      "asks for the maximum number of edges that a large graph $G$ on $n$ "
      "vertices containing no copy of $F$ can have, denoted by "
      "$\\text{ex}(n, F)$.";
  const std::string pred_eq = equations_concat(seg(pred));
  const std::string ref_eq = equations_concat(seg(ref));
  const double score = cer(ascii_lowercase(ref_eq), ascii_lowercase(pred_eq));
  CHECK(score == doctest::Approx(0.2727).epsilon(0.01));
}

TEST_CASE("coverage: span reconstruction on generated sentences") {
  std::mt19937 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::string s = testing_oracle::random_sentence(rng, 12);
    auto r = segment(s);
    REQUIRE(r.ok());
    CHECK(reconstruct(r.value()) == s);
    // naive delimiter-pair counter
    std::size_t dollars = 0;
    for (char c : s)
      if (c == '$') ++dollars;
    CHECK(count_equations(r.value()) == dollars / 2);
  }
}
