#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ideaflow/error.hpp"
#include "ideaflow/rng.hpp"
#include "ideaflow/series.hpp"

using namespace ideaflow;

TEST_CASE("znormalize basic values") {
  // hand-computed with population std: mean 2, std sqrt(2/3)
  const TimeSeries out = znormalize({1.0, 2.0, 3.0});
  CHECK(out[0] == doctest::Approx(-1.2247).epsilon(1e-3));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(1.2247).epsilon(1e-3));
}

TEST_CASE("znormalize constant series maps to zeros") {
  const TimeSeries out = znormalize({5.0, 5.0, 5.0, 5.0});
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("znormalize is idempotent") {
  Rng rng(7);
  TimeSeries s(40);
  for (double& v : s) v = rng.gaussian() * 3.0 + 10.0;
  const TimeSeries once = znormalize(s);
  const TimeSeries twice = znormalize(once);
  for (std::size_t k = 0; k < s.size(); ++k)
    CHECK(std::abs(once[k] - twice[k]) < 1e-9);
}

TEST_CASE("znormalize mean and std on random inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(mix_seed(seed, 1));
    TimeSeries s(25);
    for (double& v : s) v = rng.uniform(0.0, 100.0);
    const TimeSeries z = znormalize(s);
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= z.size();
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= z.size();
    CHECK(std::abs(mean) < 1e-9);
    CHECK(std::abs(std::sqrt(var) - 1.0) < 1e-9);
  }
}

TEST_CASE("znormalize rejects non-finite and short input") {
  CHECK_THROWS_AS(znormalize({1.0, std::nan("")}), InvalidInputError);
  CHECK_THROWS_AS(znormalize({1.0}), InvalidInputError);
}

namespace {

GroupSeries make_group(Group g, std::initializer_list<const char*> words,
                       int t) {
  GroupSeries gs;
  gs.group = g;
  int offset = 0;
  for (const char* w : words) {
    WordSeries ws;
    ws.word = w;
    ws.group = g;
    for (int k = 0; k < t; ++k) ws.series.push_back(k + offset);
    ++offset;
    gs.words.push_back(std::move(ws));
  }
  return gs;
}

}  // namespace

TEST_CASE("validate_group_pair happy path") {
  const auto a = make_group(Group::A, {"tax", "bill"}, 200);
  const auto b = make_group(Group::B, {"vote", "law", "act"}, 200);
  const GroupPairDims dims = validate_group_pair(a, b);
  CHECK(dims.n_a == 2);
  CHECK(dims.n_b == 3);
  CHECK(dims.t == 200);
}

TEST_CASE("validate_group_pair catches mismatched T") {
  auto a = make_group(Group::A, {"tax", "bill"}, 200);
  const auto b = make_group(Group::B, {"vote"}, 200);
  a.words[1].series.pop_back();  // length 199
  CHECK_THROWS_AS(validate_group_pair(a, b), DimensionError);
}

TEST_CASE("validate_group_pair catches duplicate token") {
  auto a = make_group(Group::A, {"tax", "tax"}, 50);
  const auto b = make_group(Group::B, {"vote"}, 50);
  CHECK_THROWS_AS(validate_group_pair(a, b), UniquenessError);
}

TEST_CASE("series CSV round trip") {
  const auto a = make_group(Group::A, {"tax", "bill"}, 6);
  const auto b = make_group(Group::B, {"vote"}, 6);
  std::ostringstream out;
  write_series_csv(out, a, b);
  CHECK(out.str().rfind("word,group,t0,t1,t2,t3,t4,t5\n", 0) == 0);

  std::istringstream in(out.str());
  const auto [ra, rb] = read_series_csv(in);
  REQUIRE(ra.words.size() == 2);
  REQUIRE(rb.words.size() == 1);
  CHECK(ra.words[0].word == "tax");
  CHECK(ra.words[1].series == a.words[1].series);
  CHECK(rb.words[0].series == b.words[0].series);
}

TEST_CASE("series CSV rejects ragged rows") {
  std::istringstream in("word,group,t0,t1\nfoo,A,1\n");
  CHECK_THROWS_AS(read_series_csv(in), FormatError);
}
