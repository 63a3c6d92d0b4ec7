#include "ideaflow/render.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace ideaflow {

namespace {

const char* kPalette[] = {
    "#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
    "#76b7b2", "#edc948", "#ff9da7", "#9c755f", "#bab0ac",
};
constexpr int kPaletteSize = 10;

constexpr double kPlotWidth = 960.0;
constexpr double kMarginX = 60.0;
constexpr double kRowHeight = 56.0;
constexpr double kMaxStripe = 40.0;
constexpr double kMinStripe = 1.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Layout {
  double x(int k, int t) const {
    return kMarginX + (t > 1 ? kPlotWidth * k / (t - 1) : 0.0);
  }
};

}  // namespace

std::string render_flow_svg(const FlowReport& report) {
  const int t = std::max(report.t, 2);
  const int rows =
      static_cast<int>(report.ideas_a.size() + report.ideas_b.size());
  const double height = 80.0 + kRowHeight * rows;
  Layout layout;

  // stripe centerlines, group A block above group B
  std::map<std::pair<char, int>, double> center_y;
  double y = 60.0;
  for (const auto& idea : report.ideas_a) {
    center_y[{'A', idea.idea_id}] = y;
    y += kRowHeight;
  }
  for (const auto& idea : report.ideas_b) {
    center_y[{'B', idea.idea_id}] = y;
    y += kRowHeight;
  }

  int hot_max = 1;
  for (const auto& mat : {&report.hotness_a, &report.hotness_b})
    for (const auto& row : *mat)
      for (int v : row) hot_max = std::max(hot_max, v);

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         num(kPlotWidth + 2 * kMarginX) + "\" height=\"" + num(height) +
         "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // time axis
  const double axis_y = height - 24.0;
  svg += "<line x1=\"" + num(kMarginX) + "\" y1=\"" + num(axis_y) +
         "\" x2=\"" + num(kMarginX + kPlotWidth) + "\" y2=\"" + num(axis_y) +
         "\" stroke=\"#333\"/>\n";
  for (int k = 0; k < report.t; k += std::max(1, report.t / 10)) {
    svg += "<text x=\"" + num(layout.x(k, t)) + "\" y=\"" + num(axis_y + 16) +
           "\" text-anchor=\"middle\" fill=\"#333\">" + std::to_string(k) +
           "</text>\n";
  }

  // stripes
  int color = 0;
  const auto stripe = [&](const IdeaCluster& idea,
                          const std::vector<int>& hot) {
    const double cy = center_y[{group_letter(idea.group), idea.idea_id}];
    std::string upper, lower;
    for (int k = 0; k < report.t; ++k) {
      const double w =
          kMinStripe +
          (kMaxStripe - kMinStripe) *
              (hot.empty() ? 0.0
                           : static_cast<double>(hot[k]) / hot_max);
      const std::string xs = num(layout.x(k, t));
      upper += (k == 0 ? "M" : "L") + xs + " " + num(cy - w / 2.0);
      lower = "L" + xs + " " + num(cy + w / 2.0) + lower;
    }
    svg += "<path class=\"stripe\" d=\"" + upper + lower + "Z\" fill=\"" +
           kPalette[color % kPaletteSize] + "\" fill-opacity=\"0.85\"/>\n";
    svg += "<text x=\"8\" y=\"" + num(cy + 4) + "\" fill=\"#333\">" +
           std::string(1, group_letter(idea.group)) +
           std::to_string(idea.idea_id) +
           (idea.top_words.empty() ? "" : " " + idea.top_words.front()) +
           "</text>\n";
    ++color;
  };
  for (std::size_t i = 0; i < report.ideas_a.size(); ++i)
    stripe(report.ideas_a[i],
           i < report.hotness_a.size() ? report.hotness_a[i] : std::vector<int>{});
  for (std::size_t i = 0; i < report.ideas_b.size(); ++i)
    stripe(report.ideas_b[i],
           i < report.hotness_b.size() ? report.hotness_b[i] : std::vector<int>{});

  // links between correlated segment midpoints
  for (const auto& flow : report.flows) {
    const auto ya = center_y.find({'A', flow.idea_a});
    const auto yb = center_y.find({'B', flow.idea_b});
    if (ya == center_y.end() || yb == center_y.end()) continue;
    for (const auto& seg : flow.segments) {
      if (!seg.c_bar) continue;
      const double mid = 0.5 * (seg.k_start + seg.k_end);
      const double x1 = kMarginX + kPlotWidth * mid / (t - 1);
      const double x2 =
          kMarginX + kPlotWidth * std::clamp(mid + seg.dt_bar, 0.0, t - 1.0) /
                         (t - 1);
      svg += "<path class=\"link\" d=\"M" + num(x1) + " " +
             num(ya->second + kMaxStripe / 2.0) + "C" + num(x1) + " " +
             num(0.5 * (ya->second + yb->second)) + " " + num(x2) + " " +
             num(0.5 * (ya->second + yb->second)) + " " + num(x2) + " " +
             num(yb->second - kMaxStripe / 2.0) +
             "\" fill=\"none\" stroke=\"#555\" stroke-width=\"1.2\"/>\n";
      svg += "<text x=\"" + num(0.5 * (x1 + x2)) + "\" y=\"" +
             num(0.5 * (ya->second + yb->second) - 4) +
             "\" text-anchor=\"middle\" fill=\"#555\">dt=" + num(seg.dt_bar) +
             "</text>\n";
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace ideaflow
