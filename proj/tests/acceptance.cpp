// Acceptance suite: one pass/fail line per criterion. Exercises the library
// directly and (for criterion 1) the installed CLI binary end to end.
//
// Usage: acceptance --cli <path-to-s2l-binary> --data-dir <path-to-data-dir>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "s2l/dataset.hpp"
#include "s2l/eval.hpp"

using namespace s2l;

namespace {

std::string g_cli_path;
std::string g_data_dir;

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

// Runs a command, captures stdout; returns false if the process could not be
// started or exited non-zero.
bool run_command(const std::string& cmd, std::string& stdout_text) {
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return false;
  char buf[4096];
  stdout_text.clear();
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) stdout_text.append(buf, n);
  return pclose(pipe) == 0;
}

struct GoldenRow {
  std::string original;
  std::string normalized;
};

const std::vector<GoldenRow>& normalization_goldens() {
  static const std::vector<GoldenRow> rows = {
      {"\\sum_i^n i", "\\sum_{i}^{n}i"},
      {"\\frac{ n( n+1 ) }{ 2 }", "\\frac{n(n+1)}{2}"},
      {"\\underset{ \\xi }{ \\max }", "\\max_{\\xi}"},
      {"\\Delta z\\sim1", "\\Delta\\ z\\sim\\ 1"},
  };
  return rows;
}

// ---------------------------------------------------------------------------

// Criterion 1: the four golden normalization pairs, byte-exact, both through
// the library and through the CLI `normalize` subcommand.
Check criterion_1() {
  Check c;
  for (const auto& row : normalization_goldens()) {
    auto out = normalize_string(row.original, NormalizationConfig::paper_mode());
    c.require(out.ok(), "parse failed: " + row.original);
    if (out.ok())
      c.require(out.value() == row.normalized,
                row.original + " -> " + out.value() + " (want " +
                    row.normalized + ")");
  }
  if (!c.ok || g_cli_path.empty()) return c;

  const std::string in_path = "acceptance_norm_in.txt";
  {
    std::ofstream in(in_path);
    for (const auto& row : normalization_goldens()) in << row.original << "\n";
  }
  std::string got;
  const bool ran =
      run_command(shell_quote(g_cli_path) + " normalize " + shell_quote(in_path),
                  got);
  std::remove(in_path.c_str());
  c.require(ran, "cli normalize exited non-zero");
  std::string want;
  for (const auto& row : normalization_goldens()) want += row.normalized + "\n";
  c.require(got == want, "cli output differs from goldens");
  return c;
}

// Criterion 2: golden equation pairs — exact-match rows score CER 0, every
// row scores finite, and every ground truth passes compile_check.
Check criterion_2() {
  Check c;
  const std::vector<std::pair<std::string, std::string>> rows = {
      {"F_{\\mu\\nu} = \\partial_\\mu A_\\nu - \\partial_\\nu A_\\mu",
       "F_{\\mu\\nu} = \\partial_\\mu A_\\nu - \\partial_\\nu A_\\mu"},
      {"E = \\frac{F}{q}", "\\mathbf{E} = \\frac{\\mathbf{F}}{q}"},
      {"n(\\mu,\\sigma^2,t)",
       "\\mathcal{N}\\!\\bigl(\\mu, \\tfrac{\\sigma^2}{T}\\bigr)"},
      {"\\text{Var}(X) = r \\frac{1 - p}{p^2}",
       "\\text{Var}(X) = \\frac{r(1 - p)}{p^2}"},
      {"n ( \\gamma , \\theta_{e} ) / n = \\delta ( \\theta_{e} - "
       "\\theta_{j} )",
       "n ( \\Gamma , \\theta_{e} ) / n = \\delta ( \\theta_{e} - "
       "\\theta_{j} )"},
      {"\\mathrm{Ei}(x) = \\frac{1}{\\pi} \\int_{0}^{\\infty} "
       "\\cos\\!\\bigl(\\tfrac{t^3}{3} + xt\\bigr)\\,dt",
       "\\mathrm{Ai}(x) = \\frac{1}{\\pi} \\int_{0}^{\\infty} "
       "\\cos\\!\\bigl(\\tfrac{t^3}{3} + xt\\bigr)\\,dt"},
      {"\\lim_{x \\to -5} \\frac{\\sqrt{4 - x - 3}}{x + 5}",
       "\\lim_{x \\to -5} \\frac{\\sqrt{4 - x} - 3}{x + 5}"},
      {"\\sum_{i=1}^{n} i \\cdot i = \\frac{n(n+1)(2n+1)}{6}",
       "\\sum_{i=1}^{n} i \\cdot i = \\frac{n(n+1)(2n+1)}{6}"},
      {"1 \\leq\\, u_{1}, u_{2}, b_{1}, v_{2} \\leq\\, d",
       "1 \\leq\\, u_{1}, u_{2}, v_{1}, v_{2} \\leq\\, d"}};
  EvalConfig cfg;
  std::size_t compiled = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EvalResult res = evaluate_pairs({{"r", rows[i].first}},
                                    {{"r", rows[i].second}}, cfg);
    c.require(res.ok(), "evaluate failed on row " + std::to_string(i + 1));
    if (!res.ok()) continue;
    const double v = *res.report().per_scope.at("equation").cer;
    c.require(std::isfinite(v), "non-finite CER on row " + std::to_string(i + 1));
    if (i == 0 || i == 7)
      c.require(v == 0.0,
                "exact-match row " + std::to_string(i + 1) + " scored " +
                    std::to_string(v));
    else
      c.require(v > 0.0, "mismatched row " + std::to_string(i + 1) +
                             " scored zero");
    if (compile_check(rows[i].second)) ++compiled;
  }
  c.require(compiled == rows.size(), "ground-truth compile rate below 1.0");
  return c;
}

// Criterion 3: the worked mixed-sentence example scores 27.27% +/- 2.0pp in
// the equation scope.
Check criterion_3() {
  Check c;
  EvalConfig cfg;
  cfg.mode = EvalConfig::Mode::Sentences;
  EvalResult res = evaluate_pairs(
      {{"1",
        "Given a fixed graph $F$, a typical problem on a large graph $G$ on "
        "$n$ vertices that contains no copy of $F$ can have an upper bound on "
        "the number of its edges, denoted by $X(n,F)$"}},
      {{"1",
        "Given a fixed graph $F$, a typical problem in extremal graph theory "
        "asks for the maximum number of edges that a large graph $G$ on $n$ "
        "vertices containing no copy of $F$ can have, denoted by "
        "$\\text{ex}(n, F)$."}},
      cfg);
  c.require(res.ok(), "evaluate failed");
  if (res.ok()) {
    const double pct = *res.report().per_scope.at("equation").cer * 100.0;
    c.require(std::fabs(pct - 27.27) <= 2.0,
              "equation CER " + std::to_string(pct) + "% outside 27.27 +/- 2.0");
  }
  return c;
}

// Criterion 4: cer/wer agree with an independent DP oracle on 1,000 pairs.
Check criterion_4() {
  Check c;
  std::mt19937 rng(20240);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    const std::string a = testing_oracle::random_string(rng, 20);
    const std::string b = testing_oracle::random_string(rng, 20);
    const auto ca = to_codepoints(a), cb = to_codepoints(b);
    c.require(edit_ops(ca, cb).distance() == testing_oracle::levenshtein(ca, cb),
              "char distance mismatch on pair " + std::to_string(i));
    const auto wa = whitespace_tokens(a), wb = whitespace_tokens(b);
    c.require(edit_ops(wa, wb).distance() == testing_oracle::levenshtein(wa, wb),
              "word distance mismatch on pair " + std::to_string(i));
  }
  return c;
}

// Criterion 5: metric hand-checks.
Check criterion_5() {
  Check c;
  c.require(std::fabs(rouge1("a a b", "a c") - 1.0 / 3) < 1e-9, "rouge1");
  BleuConfig uni;
  uni.max_order = 1;
  c.require(std::fabs(bleu({"the cat"}, "the the", uni) - 0.5) < 1e-9,
            "bleu clipping");
  c.require(std::fabs(chrf("abc", "abd", ChrfConfig{1, 2.0}) - 2.0 / 3) < 1e-9,
            "chrf unigram");
  const ChrfComponents comp = chrf_components("abcdef", "abcx");
  c.require(std::fabs(chrf("abcdef", "abcx", ChrfConfig{6, 100.0}) -
                      comp.recall) < 1e-3 * comp.recall,
            "chrf beta->inf limit");
  c.require(std::fabs(chrf("abcdef", "abcx", ChrfConfig{6, 0.01}) -
                      comp.precision) < 1e-3 * comp.precision,
            "chrf beta->0 limit");
  return c;
}

// Criterion 6: 10,000-formula fuzz — normalization is a fixpoint and
// render/parse round-trips structurally; nothing aborts.
Check criterion_6() {
  Check c;
  testing_oracle::FormulaGenerator gen(60606);
  const NormalizationConfig cfg = NormalizationConfig::paper_mode();
  for (int i = 0; i < 10000 && c.ok; ++i) {
    const std::string src = gen.formula();
    auto once = normalize_string(src, cfg);
    c.require(once.ok(), "generated formula failed to parse: " + src);
    if (!once.ok()) continue;
    auto twice = normalize_string(once.value(), cfg);
    c.require(twice.ok() && twice.value() == once.value(),
              "normalization not idempotent on: " + src);
    auto first = parse(src);
    auto second = parse(render(first.value()));
    c.require(second.ok() && second.value() == first.value(),
              "render/parse round-trip changed structure on: " + src);
  }
  return c;
}

// Criterion 7: segmenter span reconstruction + equation counting on 1,000
// generated mixed sentences.
Check criterion_7() {
  Check c;
  std::mt19937 rng(70707);
  for (int i = 0; i < 1000 && c.ok; ++i) {
    const std::string src = testing_oracle::random_sentence(rng, 4);
    auto segs = segment(src);
    c.require(segs.ok(), "segmentation failed on: " + src);
    if (!segs.ok()) continue;
    std::string rebuilt;
    for (const auto& s : segs.value()) {
      if (s.kind == Segment::Kind::Math)
        rebuilt += "$" + s.content + "$";
      else
        rebuilt += s.content;
    }
    c.require(rebuilt == src, "reconstruction differs on: " + src);
    // naive counter: balanced unescaped dollar pairs
    std::size_t dollars = 0;
    for (std::size_t j = 0; j < src.size(); ++j)
      if (src[j] == '$' && (j == 0 || src[j - 1] != '\\')) ++dollars;
    c.require(count_equations(segs.value()) == dollars / 2,
              "equation count differs on: " + src);
  }
  return c;
}

std::vector<SampleRecord> synthetic_manifest(std::size_t n) {
  testing_oracle::FormulaGenerator gen(808);
  std::mt19937 rng(809);
  std::vector<SampleRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    SampleRecord r;
    r.id = "r" + std::to_string(i);
    r.language = "eng";
    r.annotation_type = "artificial";
    r.source = "generated";
    r.format = "equations";
    r.latex = gen.formula();
    r.pronunciations.push_back("spoken form " + std::to_string(i));
    if (i % 7 == 0) r.latex = "\\frac{1}{2";
    if (i % 11 == 0) r.latex = "x";
    if (i % 13 == 0) r.pronunciations.clear();
    if (i % 5 == 0) {
      r.format = "sentences";
      r.latex = testing_oracle::random_sentence(rng, 4);
      if (r.latex.empty()) r.latex = "plain words";
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Criterion 8: filter + dedup + stratify determinism, partition invariant,
// and bucket boundary probes.
Check criterion_8() {
  Check c;
  const auto records = synthetic_manifest(10000);
  auto run = [&records]() {
    FilterOutcome f = filter_corpus(records);
    auto d = dedup(f.kept);
    std::ostringstream out;
    out << f.kept.size() << "/" << f.rejected.size() << "\n";
    for (const auto& r : d) out << record_to_json_line(r) << "\n";
    for (const auto& r : f.rejected)
      out << r.record.id << "|" << r.reason << "\n";
    out << stratum_report_json(stratify(d));
    return out.str();
  };
  c.require(run() == run(), "pipeline output differs between runs");
  FilterOutcome f = filter_corpus(records);
  c.require(f.kept.size() + f.rejected.size() == records.size(),
            "kept + rejected != input size");
  const std::pair<std::size_t, std::size_t> probes[] = {
      {3, 0}, {10, 1}, {20, 2}, {30, 3}, {50, 4}};
  for (const auto& [len, bucket] : probes)
    c.require(length_bucket(len) == bucket,
              "length " + std::to_string(len) + " in wrong bucket");
  c.require(!length_bucket(2).has_value(), "length 2 should be out of range");
  return c;
}

// Criterion 9: conditional dataset-shape check against the released
// sentences manifest; waived when the manifest is not present.
Check criterion_9(bool& waived) {
  Check c;
  const std::string path = g_data_dir + "/s2l_sentences_manifest.jsonl";
  std::ifstream in(path);
  if (!in) {
    waived = true;
    return c;
  }
  std::vector<SampleRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto rec = record_from_json_line(line);
    c.require(rec.ok(), "bad manifest line " + std::to_string(lineno));
    if (rec.ok()) records.push_back(rec.value());
  }
  if (!c.ok) return c;
  const StratumReport rep = stratify(records);
  const std::size_t expected[] = {2752, 2751, 2552, 2396, 1941};
  for (std::size_t i = 0; i < 5; ++i) {
    const double got = static_cast<double>(rep.by_equation_length[i]);
    const double want = static_cast<double>(expected[i]);
    c.require(std::fabs(got - want) <= 0.01 * want,
              "bucket " + std::string(StratumReport::length_labels[i]) +
                  ": got " + std::to_string(rep.by_equation_length[i]));
  }
  return c;
}

// Criterion 10: identity evaluation over >= 100 mixed sentences — zero error
// rates, perfect similarity, and a compilation rate matching an independent
// per-segment recount.
Check criterion_10() {
  Check c;
  std::mt19937 rng(101010);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::size_t segments_total = 0, segments_compiled = 0;
  for (int i = 0; i < 120; ++i) {
    std::string s = testing_oracle::random_sentence(rng, 3);
    auto segs = segment(s);
    if (!segs.ok() || count_equations(segs.value()) == 0) {
      s += " with $x_{" + std::to_string(i) + "}+1$";
      segs = segment(s);
    }
    for (const auto& seg : segs.value()) {
      if (seg.kind != Segment::Kind::Math) continue;
      ++segments_total;
      if (compile_check(seg.content)) ++segments_compiled;
    }
    pairs.emplace_back(std::to_string(i), s);
  }
  EvalConfig cfg;
  cfg.mode = EvalConfig::Mode::Sentences;
  EvalResult res = evaluate_pairs(pairs, pairs, cfg);
  c.require(res.ok(), "evaluate failed");
  if (!res.ok()) return c;
  const EvalReport& rep = res.report();
  for (const char* scope : {"sentence", "text", "equation"}) {
    const ScoreSet& s = rep.per_scope.at(scope);
    c.require(*s.cer == 0.0 && *s.wer == 0.0,
              std::string(scope) + " scope error rate non-zero");
    for (double v : {*s.rouge1, *s.bleu, *s.sacre_style_bleu, *s.chrf,
                     *s.chrfpp, *s.texbleu_proxy})
      c.require(std::fabs(v - 1.0) < 1e-9,
                std::string(scope) + " scope similarity below 1.0");
  }
  const double expected_rate =
      segments_total == 0
          ? 1.0
          : static_cast<double>(segments_compiled) /
                static_cast<double>(segments_total);
  c.require(std::fabs(rep.compilation_rate - expected_rate) < 1e-9,
            "compilation rate " + std::to_string(rep.compilation_rate) +
                " != recounted " + std::to_string(expected_rate));
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli") g_cli_path = argv[++i];
    if (arg == "--data-dir") g_data_dir = argv[++i];
  }

  struct Criterion {
    int number;
    std::string title;
    std::function<Check(bool&)> run;
  };
  auto plain = [](Check (*fn)()) {
    return [fn](bool&) { return fn(); };
  };
  const std::vector<Criterion> criteria = {
      {1, "normalization goldens, library and CLI", plain(criterion_1)},
      {2, "golden equation pair scores and compile checks", plain(criterion_2)},
      {3, "worked mixed-sentence example, equation-scope CER",
       plain(criterion_3)},
      {4, "edit-distance oracle agreement", plain(criterion_4)},
      {5, "metric hand-checks", plain(criterion_5)},
      {6, "normalizer idempotence and round-trip fuzz", plain(criterion_6)},
      {7, "segmenter span reconstruction and counting", plain(criterion_7)},
      {8, "dataset pipeline determinism and boundaries", plain(criterion_8)},
      {9, "released-manifest stratification counts", criterion_9},
      {10, "end-to-end identity evaluation", plain(criterion_10)},
  };

  int failures = 0;
  for (const auto& cr : criteria) {
    bool waived = false;
    Check c;
    try {
      c = cr.run(waived);
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    if (waived) {
      std::cout << "[PASS] criterion " << cr.number << ": " << cr.title
                << " (WAIVED: manifest not present)\n";
      continue;
    }
    if (c.ok) {
      std::cout << "[PASS] criterion " << cr.number << ": " << cr.title << "\n";
    } else {
      std::cout << "[FAIL] criterion " << cr.number << ": " << cr.title
                << " — " << c.detail << "\n";
      ++failures;
    }
  }
  return failures;
}
