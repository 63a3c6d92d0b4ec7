#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "ideaflow/series.hpp"

namespace ideaflow {

struct CorpusDoc {
  std::int64_t ts = 0;  // epoch seconds
  Group group = Group::A;
  std::string text;
};

struct IngestConfig {
  std::int64_t bin_width_seconds = 2 * 86400;
  double rare_threshold = 5.0;  // minimum average occurrences per day
  std::set<std::string> stopwords;  // empty = use the bundled default list
  bool lowercase = true;
  bool strip_punct = true;
};

struct IngestReport {
  std::int64_t docs_total = 0;
  std::int64_t docs_skipped_undecodable = 0;
  std::int64_t docs_outside_range = 0;
  std::int64_t tokens_total = 0;
  std::int64_t tokens_after_filter = 0;
  int vocab_a = 0;
  int vocab_b = 0;
  int t = 0;
};

struct TokenOccurrence {
  std::string token;
  Group group = Group::A;
  std::int64_t ts = 0;
};

std::set<std::string> default_stopwords();
std::set<std::string> load_stopwords(const std::string& path);

// Lowercase, split on non-alphanumeric bytes, drop stopwords and tokens
// shorter than 2. The rare-word filter runs after counting: tokens averaging
// fewer than rare_threshold occurrences per day (per group) are dropped.
std::vector<TokenOccurrence> tokenize_filter(const std::vector<CorpusDoc>& docs,
                                             const IngestConfig& cfg,
                                             IngestReport* report = nullptr);

// Half-open bins [start, start + width); T = ceil((t_end - t_start) / width).
// Tokens ordered by descending total count, then lexicographically.
std::pair<GroupSeries, GroupSeries> bin_counts(
    const std::vector<TokenOccurrence>& stream, const IngestConfig& cfg,
    std::int64_t t_start, std::int64_t t_end, IngestReport* report = nullptr);

struct IngestResult {
  GroupSeries a, b;
  IngestReport report;
};

// JSON-lines corpus, one {ts, group, text} object per line.
std::vector<CorpusDoc> read_corpus_jsonl(std::istream& in,
                                         IngestReport* report = nullptr);

IngestResult build_group_series(std::istream& corpus_jsonl,
                                const IngestConfig& cfg);

}  // namespace ideaflow
