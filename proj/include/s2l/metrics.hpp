#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "s2l/normalize.hpp"

namespace s2l {

struct EditOps {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t reference_length = 0;

  std::size_t distance() const { return substitutions + deletions + insertions; }
};

// UTF-8 decode; invalid bytes become one codepoint each.
std::vector<uint32_t> to_codepoints(const std::string& s);
std::vector<std::string> whitespace_tokens(const std::string& s);

// Minimal-cost alignment, unit costs. Backtrace ties resolve
// substitution > deletion > insertion so the S/D/I split is deterministic.
EditOps edit_ops(const std::vector<uint32_t>& reference,
                 const std::vector<uint32_t>& hypothesis);
EditOps edit_ops(const std::vector<std::string>& reference,
                 const std::vector<std::string>& hypothesis);

// (S+D+I)/N. Empty reference with non-empty hypothesis: |hypothesis|/1,
// reported through *degenerate when given.
double cer(const std::string& reference, const std::string& hypothesis,
           bool* degenerate = nullptr);
double wer(const std::string& reference, const std::string& hypothesis,
           bool* degenerate = nullptr);
EditOps cer_ops(const std::string& reference, const std::string& hypothesis);
EditOps wer_ops(const std::string& reference, const std::string& hypothesis);

// Clipped unigram recall over whitespace tokens.
double rouge1(const std::string& reference, const std::string& hypothesis,
              bool* degenerate = nullptr);

struct BleuConfig {
  enum class Tokenizer { Whitespace, FixedIntl };
  enum class Smoothing { None, AddOneOnZeroCounts };
  int max_order = 4;
  std::vector<double> weights;  // empty = uniform over max_order
  Tokenizer tokenizer = Tokenizer::Whitespace;
  Smoothing smoothing = Smoothing::None;
};

double bleu(const std::vector<std::string>& references,
            const std::string& hypothesis, const BleuConfig& config = {});
double sacre_style_bleu(const std::vector<std::string>& references,
                        const std::string& hypothesis);
// BLEU over pre-tokenized streams (used by the LaTeX-token proxy).
double bleu_tokens(const std::vector<std::vector<std::string>>& references,
                   const std::vector<std::string>& hypothesis,
                   const BleuConfig& config);

struct ChrfConfig {
  int max_n = 6;  // chrF default; chrF++ uses 2
  double beta = 2.0;
};

double chrf(const std::string& reference, const std::string& hypothesis,
            const ChrfConfig& config = {});
inline double chrfpp(const std::string& reference, const std::string& hypothesis) {
  return chrf(reference, hypothesis, ChrfConfig{2, 2.0});
}

struct ChrfComponents {
  double precision = 0.0;
  double recall = 0.0;
};
ChrfComponents chrf_components(const std::string& reference,
                               const std::string& hypothesis,
                               const ChrfConfig& config = {});

// BLEU-4 with add-one smoothing over the token stream of parsed-and-normalized
// LaTeX. Case is preserved. Not the published TeXBLEU; a token-level proxy.
double texbleu_proxy(const std::string& reference, const std::string& hypothesis);

// Token stream behind texbleu_proxy: command names, symbols and structural
// markers of the normalized formula; falls back to character-class runs when
// the input does not parse.
std::vector<std::string> latex_token_stream(const std::string& latex);

// Pass iff the formula parses and renders under paper-mode normalization.
bool compile_check(const std::string& latex);

}  // namespace s2l
