#include "ideaflow/series.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "ideaflow/error.hpp"
#include "ideaflow/textio.hpp"

namespace ideaflow {

namespace {
constexpr double kVarianceFloor = 1e-12;
}

char group_letter(Group g) { return g == Group::A ? 'A' : 'B'; }

Group parse_group(const std::string& s) {
  if (s == "A" || s == "a") return Group::A;
  if (s == "B" || s == "b") return Group::B;
  throw FormatError("group must be A or B, got '" + s + "'");
}

TimeSeries znormalize(const TimeSeries& series) {
  if (series.size() < 2)
    throw InvalidInputError("znormalize needs at least 2 points");
  double sum = 0.0;
  for (double v : series) {
    if (!std::isfinite(v)) throw InvalidInputError("non-finite value in series");
    sum += v;
  }
  const double n = static_cast<double>(series.size());
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : series) ss += (v - mean) * (v - mean);
  const double var = ss / n;  // population variance
  TimeSeries out(series.size(), 0.0);
  if (var < kVarianceFloor) return out;
  const double inv_std = 1.0 / std::sqrt(var);
  for (std::size_t k = 0; k < series.size(); ++k)
    out[k] = (series[k] - mean) * inv_std;
  return out;
}

namespace {

void check_group(const GroupSeries& g, int& t) {
  std::unordered_set<std::string> seen;
  for (const auto& ws : g.words) {
    if (ws.word.empty()) throw InvalidInputError("empty word token");
    if (!seen.insert(ws.word).second)
      throw UniquenessError("duplicate word '" + ws.word + "' in group " +
                            std::string(1, group_letter(g.group)));
    if (ws.series.size() < 2)
      throw DimensionError("series for '" + ws.word + "' has fewer than 2 points");
    if (t < 0) t = static_cast<int>(ws.series.size());
    if (static_cast<int>(ws.series.size()) != t)
      throw DimensionError("series for '" + ws.word + "' has length " +
                           std::to_string(ws.series.size()) + ", expected " +
                           std::to_string(t));
    for (double v : ws.series)
      if (!std::isfinite(v))
        throw InvalidInputError("non-finite value in series for '" + ws.word + "'");
  }
}

}  // namespace

GroupPairDims validate_group_pair(const GroupSeries& a, const GroupSeries& b) {
  int t = -1;
  check_group(a, t);
  check_group(b, t);
  GroupPairDims dims;
  dims.n_a = static_cast<int>(a.words.size());
  dims.n_b = static_cast<int>(b.words.size());
  dims.t = t < 0 ? 0 : t;
  return dims;
}

void write_series_csv(std::ostream& out, const GroupSeries& a,
                      const GroupSeries& b) {
  int t = 0;
  if (!a.words.empty())
    t = static_cast<int>(a.words.front().series.size());
  else if (!b.words.empty())
    t = static_cast<int>(b.words.front().series.size());
  out << "word,group";
  for (int k = 0; k < t; ++k) out << ",t" << k;
  out << "\n";
  const auto write_group = [&](const GroupSeries& g) {
    for (const auto& ws : g.words) {
      out << ws.word << ',' << group_letter(g.group);
      for (double v : ws.series) out << ',' << fmt_double(v);
      out << "\n";
    }
  };
  write_group(a);
  write_group(b);
}

std::pair<GroupSeries, GroupSeries> read_series_csv(std::istream& in) {
  GroupSeries a{Group::A, {}};
  GroupSeries b{Group::B, {}};
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty series CSV");
  const auto header = split(line, ',');
  if (header.size() < 4 || header[0] != "word" || header[1] != "group")
    throw FormatError("bad series CSV header");
  const std::size_t t = header.size() - 2;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split(line, ',');
    if (fields.size() != t + 2)
      throw FormatError("line " + std::to_string(lineno) + ": expected " +
                        std::to_string(t + 2) + " fields, got " +
                        std::to_string(fields.size()));
    WordSeries ws;
    ws.word = fields[0];
    ws.group = parse_group(fields[1]);
    ws.series.reserve(t);
    for (std::size_t k = 0; k < t; ++k) {
      try {
        ws.series.push_back(std::stod(fields[k + 2]));
      } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(lineno) +
                          ": bad number '" + fields[k + 2] + "'");
      }
    }
    (ws.group == Group::A ? a : b).words.push_back(std::move(ws));
  }
  return {std::move(a), std::move(b)};
}

}  // namespace ideaflow
