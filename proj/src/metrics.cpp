#include "s2l/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace s2l {

std::vector<uint32_t> to_codepoints(const std::string& s) {
  std::vector<uint32_t> out;
  std::size_t i = 0;
  const std::size_t n = s.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    uint32_t cp = c;
    if ((c >> 5) == 0x6) {
      len = 2;
      cp = c & 0x1f;
    } else if ((c >> 4) == 0xe) {
      len = 3;
      cp = c & 0x0f;
    } else if ((c >> 3) == 0x1e) {
      len = 4;
      cp = c & 0x07;
    }
    if (i + len > n) len = 1;
    bool valid = true;
    for (std::size_t k = 1; k < len; ++k) {
      const unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc >> 6) != 0x2) {
        valid = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3f);
    }
    if (!valid) {
      cp = c;
      len = 1;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::vector<std::string> whitespace_tokens(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

namespace {

template <typename T>
EditOps edit_ops_impl(const std::vector<T>& ref, const std::vector<T>& hyp) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::vector<std::size_t>> d(m + 1, std::vector<std::size_t>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t sub = d[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
    }
  EditOps ops;
  ops.reference_length = m;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] &&
        d[i][j] == d[i - 1][j - 1]) {
      --i;
      --j;
      continue;
    }
    if (i > 0 && j > 0 && d[i][j] == d[i - 1][j - 1] + 1) {
      ++ops.substitutions;
      --i;
      --j;
      continue;
    }
    if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
      ++ops.deletions;
      --i;
      continue;
    }
    ++ops.insertions;
    --j;
  }
  return ops;
}

double rate(const EditOps& ops, std::size_t hyp_len, bool* degenerate) {
  if (degenerate) *degenerate = false;
  if (ops.reference_length == 0) {
    if (hyp_len == 0) return 0.0;
    if (degenerate) *degenerate = true;
    return static_cast<double>(hyp_len);  // hypothesis length / 1
  }
  return static_cast<double>(ops.distance()) /
         static_cast<double>(ops.reference_length);
}

using Counts = std::map<std::vector<std::string>, std::size_t>;

Counts ngram_counts(const std::vector<std::string>& toks, int n) {
  Counts counts;
  if (toks.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::vector<std::string> g(toks.begin() + i, toks.begin() + i + n);
    ++counts[std::move(g)];
  }
  return counts;
}

std::vector<std::string> intl_tokens(const std::string& s) {
  // punctuation split off as separate tokens; every non-ASCII codepoint
  // that is not a letter stands alone as well
  std::string padded;
  const std::vector<uint32_t> cps = to_codepoints(s);
  std::size_t byte = 0;
  for (uint32_t cp : cps) {
    std::size_t len = 1;
    if (cp >= 0x80) {
      // re-measure from source bytes
      const unsigned char c = static_cast<unsigned char>(s[byte]);
      if ((c >> 5) == 0x6)
        len = 2;
      else if ((c >> 4) == 0xe)
        len = 3;
      else if ((c >> 3) == 0x1e)
        len = 4;
    }
    const std::string piece = s.substr(byte, len);
    const bool word = cp < 0x80 && (std::isalnum(static_cast<int>(cp)) != 0);
    const bool space = cp < 0x80 && (std::isspace(static_cast<int>(cp)) != 0);
    if (word || space || cp >= 0x80) {
      padded += piece;
    } else {
      padded += ' ';
      padded += piece;
      padded += ' ';
    }
    byte += len;
  }
  return whitespace_tokens(padded);
}

}  // namespace

EditOps edit_ops(const std::vector<uint32_t>& reference,
                 const std::vector<uint32_t>& hypothesis) {
  return edit_ops_impl(reference, hypothesis);
}

EditOps edit_ops(const std::vector<std::string>& reference,
                 const std::vector<std::string>& hypothesis) {
  return edit_ops_impl(reference, hypothesis);
}

EditOps cer_ops(const std::string& reference, const std::string& hypothesis) {
  return edit_ops(to_codepoints(reference), to_codepoints(hypothesis));
}

EditOps wer_ops(const std::string& reference, const std::string& hypothesis) {
  return edit_ops(whitespace_tokens(reference), whitespace_tokens(hypothesis));
}

double cer(const std::string& reference, const std::string& hypothesis,
           bool* degenerate) {
  return rate(cer_ops(reference, hypothesis), to_codepoints(hypothesis).size(),
              degenerate);
}

double wer(const std::string& reference, const std::string& hypothesis,
           bool* degenerate) {
  return rate(wer_ops(reference, hypothesis),
              whitespace_tokens(hypothesis).size(), degenerate);
}

double rouge1(const std::string& reference, const std::string& hypothesis,
              bool* degenerate) {
  if (degenerate) *degenerate = false;
  const auto ref = whitespace_tokens(reference);
  const auto hyp = whitespace_tokens(hypothesis);
  if (ref.empty()) {
    if (degenerate) *degenerate = true;
    return 0.0;
  }
  std::map<std::string, std::size_t> ref_counts, hyp_counts;
  for (const auto& t : ref) ++ref_counts[t];
  for (const auto& t : hyp) ++hyp_counts[t];
  std::size_t overlap = 0;
  for (const auto& [tok, count] : ref_counts) {
    auto it = hyp_counts.find(tok);
    if (it != hyp_counts.end()) overlap += std::min(count, it->second);
  }
  return static_cast<double>(overlap) / static_cast<double>(ref.size());
}

double bleu_tokens(const std::vector<std::vector<std::string>>& references,
                   const std::vector<std::string>& hypothesis,
                   const BleuConfig& config) {
  if (references.empty()) return 0.0;
  if (hypothesis.empty()) return 0.0;
  const std::size_t hyp_len = hypothesis.size();
  // closest reference length for the brevity penalty
  std::size_t ref_len = references[0].size();
  for (const auto& r : references) {
    const auto diff = [&](std::size_t a) {
      return a > hyp_len ? a - hyp_len : hyp_len - a;
    };
    if (diff(r.size()) < diff(ref_len) ||
        (diff(r.size()) == diff(ref_len) && r.size() < ref_len))
      ref_len = r.size();
  }

  std::vector<double> weights = config.weights;
  if (weights.empty())
    weights.assign(config.max_order, 1.0 / config.max_order);

  double log_sum = 0.0;
  double weight_used = 0.0;
  for (int n = 1; n <= config.max_order; ++n) {
    Counts hyp_counts = ngram_counts(hypothesis, n);
    std::size_t total = 0, matches = 0;
    for (const auto& [g, c] : hyp_counts) total += c;
    if (total == 0) continue;  // order longer than the hypothesis: dropped
    Counts max_ref;
    for (const auto& r : references)
      for (const auto& [g, c] : ngram_counts(r, n)) {
        auto& slot = max_ref[g];
        slot = std::max(slot, c);
      }
    for (const auto& [g, c] : hyp_counts) {
      auto it = max_ref.find(g);
      if (it != max_ref.end()) matches += std::min(c, it->second);
    }
    double p;
    if (matches == 0) {
      if (config.smoothing == BleuConfig::Smoothing::None) return 0.0;
      p = 1.0 / static_cast<double>(total + 1);
    } else {
      p = static_cast<double>(matches) / static_cast<double>(total);
    }
    const double w = weights[n - 1];
    log_sum += w * std::log(p);
    weight_used += w;
  }
  if (weight_used == 0.0) return 0.0;
  log_sum /= weight_used;  // renormalize over the orders actually present

  double bp = 1.0;
  if (hyp_len < ref_len)
    bp = std::exp(1.0 - static_cast<double>(ref_len) /
                            static_cast<double>(hyp_len));
  return bp * std::exp(log_sum);
}

double bleu(const std::vector<std::string>& references,
            const std::string& hypothesis, const BleuConfig& config) {
  auto tok = [&](const std::string& s) {
    return config.tokenizer == BleuConfig::Tokenizer::FixedIntl
               ? intl_tokens(s)
               : whitespace_tokens(s);
  };
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tok(r));
  return bleu_tokens(refs, tok(hypothesis), config);
}

double sacre_style_bleu(const std::vector<std::string>& references,
                        const std::string& hypothesis) {
  BleuConfig cfg;
  cfg.tokenizer = BleuConfig::Tokenizer::FixedIntl;
  return bleu(references, hypothesis, cfg);
}

ChrfComponents chrf_components(const std::string& reference,
                               const std::string& hypothesis,
                               const ChrfConfig& config) {
  auto chars = [](const std::string& s) {
    std::vector<std::string> out;
    for (uint32_t cp : to_codepoints(s)) {
      if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r') continue;
      // store codepoints as strings so ngram machinery is shared
      std::string piece;
      if (cp < 0x80) {
        piece += static_cast<char>(cp);
      } else {
        char buf[16];
        std::snprintf(buf, sizeof buf, "U+%04X", cp);
        piece = buf;
      }
      out.push_back(std::move(piece));
    }
    return out;
  };
  const auto ref = chars(reference);
  const auto hyp = chars(hypothesis);
  double p_sum = 0.0, r_sum = 0.0;
  int p_orders = 0, r_orders = 0;
  for (int n = 1; n <= config.max_n; ++n) {
    Counts rc = ngram_counts(ref, n);
    Counts hc = ngram_counts(hyp, n);
    std::size_t ref_total = 0, hyp_total = 0, overlap = 0;
    for (const auto& [g, c] : rc) ref_total += c;
    for (const auto& [g, c] : hc) {
      hyp_total += c;
      auto it = rc.find(g);
      if (it != rc.end()) overlap += std::min(c, it->second);
    }
    if (hyp_total > 0) {
      p_sum += static_cast<double>(overlap) / static_cast<double>(hyp_total);
      ++p_orders;
    }
    if (ref_total > 0) {
      r_sum += static_cast<double>(overlap) / static_cast<double>(ref_total);
      ++r_orders;
    }
  }
  ChrfComponents out;
  out.precision = p_orders ? p_sum / p_orders : 0.0;
  out.recall = r_orders ? r_sum / r_orders : 0.0;
  return out;
}

double chrf(const std::string& reference, const std::string& hypothesis,
            const ChrfConfig& config) {
  const bool ref_empty = to_codepoints(reference).empty();
  const bool hyp_empty = to_codepoints(hypothesis).empty();
  if (ref_empty && hyp_empty) return 1.0;
  if (ref_empty || hyp_empty) return 0.0;
  const ChrfComponents c = chrf_components(reference, hypothesis, config);
  const double b2 = config.beta * config.beta;
  const double denom = b2 * c.precision + c.recall;
  if (denom == 0.0) return 0.0;
  return (1.0 + b2) * c.precision * c.recall / denom;
}

std::vector<std::string> latex_token_stream(const std::string& latex) {
  NormalizationConfig cfg = NormalizationConfig::paper_mode();
  Result<std::string> norm = normalize_string(latex, cfg);
  if (norm.ok()) {
    std::vector<std::string> out;
    for (const Token& t : tokenize(norm.value())) {
      if (t.kind == TokenKind::Whitespace) continue;
      out.push_back(t.text);
    }
    return out;
  }
  // character-class fallback: runs of letters, runs of digits, single others
  std::vector<std::string> out;
  std::string run;
  auto cls = [](char c) {
    if (std::isalpha(static_cast<unsigned char>(c))) return 1;
    if (std::isdigit(static_cast<unsigned char>(c))) return 2;
    if (std::isspace(static_cast<unsigned char>(c))) return 0;
    return 3;
  };
  int run_cls = 0;
  for (char c : latex) {
    const int k = cls(c);
    if (k == 0 || k == 3 || k != run_cls) {
      if (!run.empty()) out.push_back(run);
      run.clear();
    }
    if (k == 0) {
      run_cls = 0;
      continue;
    }
    run += c;
    run_cls = k;
    if (k == 3) {
      out.push_back(run);
      run.clear();
      run_cls = 0;
    }
  }
  if (!run.empty()) out.push_back(run);
  return out;
}

double texbleu_proxy(const std::string& reference, const std::string& hypothesis) {
  const auto ref = latex_token_stream(reference);
  const auto hyp = latex_token_stream(hypothesis);
  if (ref.empty() && hyp.empty()) return 1.0;
  if (ref.empty() || hyp.empty()) return 0.0;
  BleuConfig cfg;
  cfg.smoothing = BleuConfig::Smoothing::AddOneOnZeroCounts;
  return bleu_tokens({ref}, hyp, cfg);
}

bool compile_check(const std::string& latex) {
  return normalize_string(latex, NormalizationConfig::paper_mode()).ok();
}

}  // namespace s2l
