#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ideaflow {

// A word's term-frequency trajectory (or any signal) over T time points.
using TimeSeries = std::vector<double>;

enum class Group { A, B };

char group_letter(Group g);
Group parse_group(const std::string& s);

struct WordSeries {
  std::string word;
  Group group = Group::A;
  TimeSeries series;
};

// Members share one T; word order is canonical and defines tensor indices.
struct GroupSeries {
  Group group = Group::A;
  std::vector<WordSeries> words;
};

struct GroupPairDims {
  int n_a = 0;
  int n_b = 0;
  int t = 0;
};

// Zero-mean, unit-variance rescale with population std. Inputs whose variance
// falls under the floor map to all zeros: constant words are legal corpus
// artifacts and must simply never correlate.
TimeSeries znormalize(const TimeSeries& series);

// Confirms equal T across both groups, unique tokens, finite values.
GroupPairDims validate_group_pair(const GroupSeries& a, const GroupSeries& b);

// CSV interchange: header `word,group,t0,t1,...,t{T-1}`, one row per word.
void write_series_csv(std::ostream& out, const GroupSeries& a,
                      const GroupSeries& b);
std::pair<GroupSeries, GroupSeries> read_series_csv(std::istream& in);

}  // namespace ideaflow
