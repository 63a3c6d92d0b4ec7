// Writes the bundled demo corpus: two user groups tweeting over ~6 weeks,
// with two planted idea flows (group A leads "immigration", group B leads
// "budget") on top of per-word random-walk chatter.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ideaflow/rng.hpp"

using ideaflow::Rng;
using ideaflow::mix_seed;

namespace {

constexpr std::int64_t kEpochStart = 1365465600;  // 2013-04-09
constexpr int kDays = 44;
constexpr std::uint64_t kSeed = 20130409;

struct TopicWord {
  const char* token;
  double weight;
};

// bell-shaped activity bump centered on `peak`, `width` days wide
double bump(double day, double peak, double width) {
  const double z = (day - peak) / width;
  return std::exp(-0.5 * z * z);
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_path = argc > 1 ? argv[1] : "data/demo_corpus.jsonl";
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return 1;
  }

  const std::vector<TopicWord> idea1_a = {{"immigration", 1.0},
                                          {"bill", 0.9},
                                          {"reform", 0.7},
                                          {"border", 0.6}};
  const std::vector<TopicWord> idea1_b = {{"immigration", 1.0},
                                          {"bill", 0.8},
                                          {"amnesty", 0.7},
                                          {"border", 0.7}};
  const std::vector<TopicWord> idea2_a = {{"budget", 1.0},
                                          {"tax", 0.8},
                                          {"spending", 0.7},
                                          {"deficit", 0.6}};
  const std::vector<TopicWord> idea2_b = {{"budget", 1.0},
                                          {"tax", 0.9},
                                          {"jobs", 0.7},
                                          {"growth", 0.6}};
  const std::vector<const char*> filler_a = {"vote",    "committee", "town",
                                             "meeting", "veterans",  "energy"};
  const std::vector<const char*> filler_b = {"hearing", "farm",   "trade",
                                             "school",  "prayer", "huddle"};

  // per-word random-walk chatter level
  const auto walk_level = [&](std::size_t word_idx, char group, int day) {
    Rng rng(mix_seed(kSeed, 0x11, group, word_idx));
    double level = 1.5 + 2.0 * rng.uniform();
    for (int d = 0; d <= day; ++d) {
      level += 0.6 * (rng.uniform() - 0.5);
      level = std::max(0.2, std::min(5.0, level));
    }
    return level;
  };

  long docs = 0;
  for (int day = 0; day < kDays; ++day) {
    for (const char group : {'A', 'B'}) {
      // group A leads idea 1 by four days; group B leads idea 2 by four days
      const double idea1 =
          7.0 * bump(day, group == 'A' ? 11.0 : 15.0, 3.5);
      const double idea2 =
          7.0 * bump(day, group == 'A' ? 32.0 : 28.0, 3.5);
      const auto& i1 = group == 'A' ? idea1_a : idea1_b;
      const auto& i2 = group == 'A' ? idea2_a : idea2_b;
      const auto& filler = group == 'A' ? filler_a : filler_b;

      Rng rng(mix_seed(kSeed, 0x22, group, day));
      const int n_docs = 2 + static_cast<int>(rng.uniform_int(0, 1));
      for (int d = 0; d < n_docs; ++d) {
        std::vector<std::string> words;
        const auto emit_topic = [&](const std::vector<TopicWord>& topic,
                                    double intensity) {
          for (const auto& tw : topic) {
            const double expected = intensity * tw.weight / n_docs;
            int count = static_cast<int>(expected);
            if (rng.uniform() < expected - count) ++count;
            for (int c = 0; c < count; ++c) words.emplace_back(tw.token);
          }
        };
        emit_topic(i1, idea1);
        emit_topic(i2, idea2);
        for (std::size_t f = 0; f < filler.size(); ++f) {
          const double expected = walk_level(f, group, day) / n_docs;
          int count = static_cast<int>(expected);
          if (rng.uniform() < expected - count) ++count;
          for (int c = 0; c < count; ++c) words.emplace_back(filler[f]);
        }
        if (words.empty()) words.emplace_back(filler[day % filler.size()]);

        std::string text = "the";
        for (std::size_t w = 0; w < words.size(); ++w) {
          text += ' ';
          text += words[w];
          if (w % 4 == 3) text += " and the";
        }
        text += " today";

        const std::int64_t ts = kEpochStart + 86400LL * day + 3600LL * (6 + d * 5) +
                                60LL * rng.uniform_int(0, 59);
        out << "{\"ts\":" << ts << ",\"group\":\"" << group << "\",\"text\":\""
            << text << "\"}\n";
        ++docs;
      }
    }
  }
  std::cerr << "wrote " << docs << " docs -> " << out_path << "\n";
  return 0;
}
