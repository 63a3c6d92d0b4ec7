#include "ideaflow/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>

#include <json.hpp>

#include "ideaflow/error.hpp"
#include "ideaflow/textio.hpp"

namespace ideaflow {

std::set<std::string> default_stopwords() {
  // standard English list
  static const char* kWords[] = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "aren", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "cannot", "could", "did", "do", "does", "doing", "don", "down",
      "during", "each", "few", "for", "from", "further", "had", "has",
      "have", "having", "he", "her", "here", "hers", "herself", "him",
      "himself", "his", "how", "i", "if", "in", "into", "is", "isn", "it",
      "its", "itself", "just", "me", "more", "most", "my", "myself", "no",
      "nor", "not", "now", "of", "off", "on", "once", "only", "or", "other",
      "our", "ours", "ourselves", "out", "over", "own", "rt", "s", "same",
      "she", "should", "so", "some", "such", "t", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until",
      "up", "very", "was", "we", "were", "what", "when", "where", "which",
      "while", "who", "whom", "why", "will", "with", "would", "you", "your",
      "yours", "yourself", "yourselves",
  };
  return {std::begin(kWords), std::end(kWords)};
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open stopword file '" + path + "'");
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

namespace {

std::vector<std::string> tokenize(const std::string& text,
                                  const IngestConfig& cfg) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const unsigned char c = static_cast<unsigned char>(ch);
    const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                       (c >= '0' && c <= '9');
    if (alnum) {
      current.push_back(cfg.lowercase && c >= 'A' && c <= 'Z'
                            ? static_cast<char>(c - 'A' + 'a')
                            : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

}  // namespace

std::vector<TokenOccurrence> tokenize_filter(const std::vector<CorpusDoc>& docs,
                                             const IngestConfig& cfg,
                                             IngestReport* report) {
  const std::set<std::string> stop =
      cfg.stopwords.empty() ? default_stopwords() : cfg.stopwords;

  std::int64_t ts_min = 0, ts_max = 0;
  bool first = true;
  std::vector<TokenOccurrence> stream;
  std::int64_t total_tokens = 0;
  for (const auto& doc : docs) {
    if (!is_valid_utf8(doc.text)) {
      if (report) ++report->docs_skipped_undecodable;
      continue;
    }
    if (first || doc.ts < ts_min) ts_min = doc.ts;
    if (first || doc.ts > ts_max) ts_max = doc.ts;
    first = false;
    for (auto& tok : tokenize(doc.text, cfg)) {
      ++total_tokens;
      if (tok.size() < 2) continue;
      if (stop.count(tok)) continue;
      stream.push_back({std::move(tok), doc.group, doc.ts});
    }
  }
  if (report) report->tokens_total += total_tokens;

  // rare-word filter: average occurrences per day, per group
  const double days =
      first ? 0.0
            : std::max(1.0, static_cast<double>(ts_max - ts_min) / 86400.0);
  std::map<std::pair<int, std::string>, std::int64_t> counts;
  for (const auto& occ : stream)
    ++counts[{occ.group == Group::A ? 0 : 1, occ.token}];

  std::vector<TokenOccurrence> kept;
  kept.reserve(stream.size());
  for (auto& occ : stream) {
    const auto total = counts[{occ.group == Group::A ? 0 : 1, occ.token}];
    if (static_cast<double>(total) / days < cfg.rare_threshold) continue;
    kept.push_back(std::move(occ));
  }
  if (report) report->tokens_after_filter += static_cast<std::int64_t>(kept.size());
  return kept;
}

std::pair<GroupSeries, GroupSeries> bin_counts(
    const std::vector<TokenOccurrence>& stream, const IngestConfig& cfg,
    std::int64_t t_start, std::int64_t t_end, IngestReport* report) {
  if (t_start >= t_end) throw InvalidInputError("t_start must precede t_end");
  if (cfg.bin_width_seconds <= 0) throw ConfigError("bin width must be positive");
  const std::int64_t width = cfg.bin_width_seconds;
  const int t = static_cast<int>((t_end - t_start + width - 1) / width);

  std::map<std::pair<int, std::string>, std::vector<double>> table;
  for (const auto& occ : stream) {
    if (occ.ts < t_start || occ.ts >= t_end) {
      if (report) ++report->docs_outside_range;
      continue;
    }
    const int bin = static_cast<int>((occ.ts - t_start) / width);
    auto& row = table[{occ.group == Group::A ? 0 : 1, occ.token}];
    if (row.empty()) row.assign(t, 0.0);
    row[bin] += 1.0;
  }

  const auto build = [&](int gid, Group g) {
    GroupSeries gs;
    gs.group = g;
    struct Item {
      std::string token;
      double total;
      std::vector<double> row;
    };
    std::vector<Item> items;
    for (auto& [key, row] : table) {
      if (key.first != gid) continue;
      double total = 0.0;
      for (double v : row) total += v;
      items.push_back({key.second, total, row});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      if (a.total != b.total) return a.total > b.total;
      return a.token < b.token;
    });
    for (auto& item : items)
      gs.words.push_back({std::move(item.token), g, std::move(item.row)});
    return gs;
  };

  if (report) report->t = t;
  return {build(0, Group::A), build(1, Group::B)};
}

std::vector<CorpusDoc> read_corpus_jsonl(std::istream& in,
                                         IngestReport* report) {
  std::vector<CorpusDoc> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      CorpusDoc doc;
      doc.ts = j.at("ts").get<std::int64_t>();
      doc.group = parse_group(j.at("group").get<std::string>());
      doc.text = j.at("text").get<std::string>();
      docs.push_back(std::move(doc));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("corpus line " + std::to_string(lineno) + ": " +
                        e.what());
    }
    if (report) ++report->docs_total;
  }
  return docs;
}

IngestResult build_group_series(std::istream& corpus_jsonl,
                                const IngestConfig& cfg) {
  IngestResult result;
  const auto docs = read_corpus_jsonl(corpus_jsonl, &result.report);
  bool has_a = false, has_b = false;
  for (const auto& d : docs) (d.group == Group::A ? has_a : has_b) = true;
  if (!has_a) throw EmptyGroupError("no documents for group A");
  if (!has_b) throw EmptyGroupError("no documents for group B");

  const auto stream = tokenize_filter(docs, cfg, &result.report);

  std::int64_t ts_min = docs.front().ts, ts_max = docs.front().ts;
  for (const auto& d : docs) {
    ts_min = std::min(ts_min, d.ts);
    ts_max = std::max(ts_max, d.ts);
  }
  auto [a, b] = bin_counts(stream, cfg, ts_min, ts_max + 1, &result.report);
  result.a = std::move(a);
  result.b = std::move(b);
  result.report.vocab_a = static_cast<int>(result.a.words.size());
  result.report.vocab_b = static_cast<int>(result.b.words.size());
  return result;
}

}  // namespace ideaflow
