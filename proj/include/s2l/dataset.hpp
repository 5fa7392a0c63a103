#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "s2l/segment.hpp"

namespace s2l {

struct SampleRecord {
  std::string id;
  std::string language;         // "eng" | "rus"
  std::string annotation_type;  // "human" | "artificial"
  std::string source;           // mathbridge | textteller | generated | proofpile | other
  std::string format;           // "equations" | "sentences"
  std::string latex;
  std::vector<std::string> pronunciations;
  std::optional<std::string> audio_path;
  std::optional<std::string> family_key;  // set by dedup for near-duplicates
  bool near_duplicate = false;
};

// JSON-lines I/O; field names match the struct.
Result<SampleRecord> record_from_json_line(const std::string& line);
std::string record_to_json_line(const SampleRecord& record);

struct FilterConfig {
  std::size_t min_equation_chars = 3;
  std::size_t max_equation_chars = 230;
  double text_only_command_ratio = 0.8;
  double max_latex_to_pronunciation_ratio = 2.0;
};

// Every violated check, in a fixed order; empty means clean.
std::vector<std::string> validate_record(const SampleRecord& record,
                                         const FilterConfig& config = {});

struct FilterOutcome {
  std::vector<SampleRecord> kept;
  struct Rejected {
    SampleRecord record;
    std::string reason;  // first failing reason
  };
  std::vector<Rejected> rejected;
};

FilterOutcome filter_corpus(const std::vector<SampleRecord>& records,
                            const FilterConfig& config = {});

// Exact duplicates (same normalized latex) removed, first wins. Survivors get
// a family key (single-letter identifiers and Greek commands replaced by a
// placeholder); records sharing a family are flagged near_duplicate.
std::vector<SampleRecord> dedup(const std::vector<SampleRecord>& records);

std::string dedup_family_key(const std::string& latex);

struct StratumReport {
  // equation length buckets: [3,10) [10,20) [20,30) [30,50) [50,inf)
  std::array<std::size_t, 5> by_equation_length{};
  // equations per sentence: 1, 2, 3, 4, 5, >=6
  std::array<std::size_t, 6> by_equations_per_sentence{};
  std::size_t under_length_range = 0;  // equations shorter than 3 chars
  std::size_t unsegmentable = 0;

  static const std::array<const char*, 5> length_labels;
  static const std::array<const char*, 6> count_labels;
};

StratumReport stratify(const std::vector<SampleRecord>& records);
std::string stratum_report_json(const StratumReport& report);

// Half-open bucket lookup; returns 0..4 for lengths >= 3, nullopt below.
std::optional<std::size_t> length_bucket(std::size_t chars);

}  // namespace s2l
