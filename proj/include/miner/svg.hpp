#ifndef MINER_SVG_HPP
#define MINER_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "miner/community.hpp"
#include "miner/graph.hpp"
#include "miner/textproc.hpp"
#include "miner/unicode.hpp"
#include "miner/util.hpp"

namespace miner {

inline const std::vector<std::string>& svg_palette() {
  static const std::vector<std::string> colors = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return colors;
}

namespace detail {

inline std::string svg_open(double width, double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         format_fixed(width, 0) + "\" height=\"" + format_fixed(height, 0) +
         "\" viewBox=\"0 0 " + format_fixed(width, 0) + " " +
         format_fixed(height, 0) + "\">\n";
}

}  // namespace detail

/// Horizontal bar chart of the top n rows, widths proportional to the
/// largest count.
inline std::string render_frequency_svg(const FrequencyTable& table,
                                        std::size_t n, double width = 800.0) {
  if (table.entries.empty())
    throw AnalysisError("cannot plot an empty frequency table");
  if (n < 1) throw AnalysisError("frequency plot needs n >= 1");
  auto rows = top_n(table, n).entries;

  const double row_h = 24.0;
  const double top = 12.0;
  const double label_w = 180.0;
  const double count_w = 64.0;
  const double bar_max = width - label_w - count_w - 24.0;
  double height = top * 2 + row_h * static_cast<double>(rows.size());

  std::size_t max_count = 1;
  for (const auto& [term, count] : rows) max_count = std::max(max_count, count);

  std::string out = detail::svg_open(width, height);
  out += "  <rect x=\"0\" y=\"0\" width=\"" + format_fixed(width, 0) +
         "\" height=\"" + format_fixed(height, 0) + "\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [term, count] = rows[i];
    double y = top + row_h * static_cast<double>(i);
    double bar =
        bar_max * static_cast<double>(count) / static_cast<double>(max_count);
    out += "  <text x=\"" + format_fixed(label_w - 8.0, 1) + "\" y=\"" +
           format_fixed(y + 16.0, 1) +
           "\" font-family=\"sans-serif\" font-size=\"13\" "
           "text-anchor=\"end\">" +
           xml_escape(term) + "</text>\n";
    out += "  <rect x=\"" + format_fixed(label_w, 1) + "\" y=\"" +
           format_fixed(y + 4.0, 1) + "\" width=\"" + format_fixed(bar, 1) +
           "\" height=\"" + format_fixed(row_h - 8.0, 1) + "\" fill=\"" +
           svg_palette()[0] + "\"/>\n";
    out += "  <text x=\"" + format_fixed(label_w + bar + 6.0, 1) + "\" y=\"" +
           format_fixed(y + 16.0, 1) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" +
           std::to_string(count) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

struct CloudWord {
  std::string term;
  std::size_t count = 0;
  double size = 0;  // font size; the box is 0.6*size*chars wide, size tall
  double x = 0;     // box top-left
  double y = 0;

  double box_width() const {
    return 0.6 * size * static_cast<double>(codepoint_count(term));
  }
  double box_height() const { return size; }
};

namespace detail {

inline bool cloud_boxes_overlap(const CloudWord& a, const CloudWord& b) {
  return !(a.x + a.box_width() <= b.x || b.x + b.box_width() <= a.x ||
           a.y + a.box_height() <= b.y || b.y + b.box_height() <= a.y);
}

}  // namespace detail

/// Greedy archimedean-spiral placement in descending count order. Font
/// sizes run 10..64, scaled linearly over the count range; a degenerate
/// range gets 64. The seed only rotates each word's spiral start. Words
/// that fit nowhere are dropped.
inline std::vector<CloudWord> layout_wordcloud(const FrequencyTable& table,
                                               std::size_t n, double width,
                                               double height,
                                               std::uint32_t seed = 42) {
  if (table.entries.empty())
    throw AnalysisError("cannot lay out an empty word cloud");
  if (n < 1) throw AnalysisError("word cloud needs n >= 1");
  if (width <= 0 || height <= 0)
    throw AnalysisError("word cloud canvas must have positive size");
  auto rows = top_n(table, n).entries;

  std::size_t min_count = rows.front().second;
  std::size_t max_count = rows.front().second;
  for (const auto& [term, count] : rows) {
    min_count = std::min(min_count, count);
    max_count = std::max(max_count, count);
  }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.14159265358979);

  const double lo = 10.0, hi = 64.0;
  const double cx = width / 2.0, cy = height / 2.0;
  std::vector<CloudWord> placed;
  for (const auto& [term, count] : rows) {
    CloudWord w;
    w.term = term;
    w.count = count;
    w.size = max_count == min_count
                 ? hi
                 : lo + (hi - lo) * static_cast<double>(count - min_count) /
                           static_cast<double>(max_count - min_count);

    double theta0 = phase(rng);
    bool ok = false;
    for (int step = 0; step < 8000; ++step) {
      double theta = 0.08 * static_cast<double>(step);
      double r = 1.8 * theta;
      w.x = cx + r * std::cos(theta0 + theta) - w.box_width() / 2.0;
      w.y = cy + r * std::sin(theta0 + theta) - w.box_height() / 2.0;
      if (w.x < 0 || w.y < 0 || w.x + w.box_width() > width ||
          w.y + w.box_height() > height)
        continue;
      bool clash = false;
      for (const auto& other : placed)
        if (detail::cloud_boxes_overlap(w, other)) {
          clash = true;
          break;
        }
      if (!clash) {
        ok = true;
        break;
      }
    }
    if (ok) placed.push_back(w);
  }
  return placed;
}

inline std::string render_wordcloud_svg(const FrequencyTable& table,
                                        std::size_t n, std::uint32_t seed = 42,
                                        double width = 900.0,
                                        double height = 600.0) {
  auto layout = layout_wordcloud(table, n, width, height, seed);
  std::string out = detail::svg_open(width, height);
  out += "  <rect x=\"0\" y=\"0\" width=\"" + format_fixed(width, 0) +
         "\" height=\"" + format_fixed(height, 0) + "\" fill=\"#ffffff\"/>\n";
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& w = layout[i];
    const auto& color = svg_palette()[i % svg_palette().size()];
    out += "  <text x=\"" + format_fixed(w.x + w.box_width() / 2.0, 1) +
           "\" y=\"" + format_fixed(w.y + w.size * 0.8, 1) +
           "\" font-family=\"sans-serif\" font-size=\"" +
           format_fixed(w.size, 1) + "\" fill=\"" + color +
           "\" text-anchor=\"middle\">" + xml_escape(w.term) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

struct NodePosition {
  double x = 0;
  double y = 0;
};

/// Force-directed layout: all-pairs repulsion, spring attraction per edge,
/// fixed iteration count, linear cooling. Initial positions come from a
/// seeded mt19937, so the result is reproducible per seed.
inline std::vector<NodePosition> layout_network(const CoGraph& g, double width,
                                                double height,
                                                int iterations = 300,
                                                std::uint32_t seed = 42) {
  if (g.nodes.empty()) throw AnalysisError("cannot lay out an empty graph");
  if (width <= 0 || height <= 0)
    throw AnalysisError("network canvas must have positive size");
  std::size_t n = g.nodes.size();
  std::vector<NodePosition> pos(n);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(0.0, width), uy(0.0, height);
  for (auto& p : pos) {
    p.x = ux(rng);
    p.y = uy(rng);
  }
  if (n == 1) {
    pos[0] = {width / 2.0, height / 2.0};
    return pos;
  }

  const double k = std::sqrt(width * height / static_cast<double>(n));
  double temp = width / 10.0;
  const double cool = temp / static_cast<double>(std::max(1, iterations));

  std::vector<NodePosition> disp(n);
  for (int it = 0; it < iterations; ++it) {
    for (auto& d : disp) d = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double dx = pos[i].x - pos[j].x;
        double dy = pos[i].y - pos[j].y;
        double dist = std::max(0.01, std::hypot(dx, dy));
        double f = k * k / dist;
        disp[i].x += dx / dist * f;
        disp[i].y += dy / dist * f;
        disp[j].x -= dx / dist * f;
        disp[j].y -= dy / dist * f;
      }
    for (const auto& e : g.edges) {
      double dx = pos[e.u].x - pos[e.v].x;
      double dy = pos[e.u].y - pos[e.v].y;
      double dist = std::max(0.01, std::hypot(dx, dy));
      double f = dist * dist / k;
      disp[e.u].x -= dx / dist * f;
      disp[e.u].y -= dy / dist * f;
      disp[e.v].x += dx / dist * f;
      disp[e.v].y += dy / dist * f;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double len = std::max(0.01, std::hypot(disp[i].x, disp[i].y));
      double cap = std::min(len, temp);
      pos[i].x += disp[i].x / len * cap;
      pos[i].y += disp[i].y / len * cap;
    }
    temp = std::max(0.01, temp - cool);
  }

  // rescale into the canvas with a margin for circles and labels
  const double pad = 48.0;
  double min_x = pos[0].x, max_x = pos[0].x;
  double min_y = pos[0].y, max_y = pos[0].y;
  for (const auto& p : pos) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  auto rescale = [pad](double v, double lo, double hi, double extent) {
    if (hi - lo < 1e-9) return extent / 2.0;
    return pad + (v - lo) / (hi - lo) * (extent - 2.0 * pad);
  };
  for (auto& p : pos) {
    p.x = rescale(p.x, min_x, max_x, width);
    p.y = rescale(p.y, min_y, max_y, height);
  }
  return pos;
}

/// Edges under the nodes, labels above, fill color keyed to the node's
/// community (palette cycles past ten).
inline std::string render_network_svg(const CoGraph& g,
                                      const Partition* communities = nullptr,
                                      std::uint32_t seed = 42,
                                      double width = 960.0,
                                      double height = 720.0,
                                      int iterations = 300) {
  if (g.nodes.empty()) throw AnalysisError("cannot render an empty graph");
  if (communities && communities->assignment.size() != g.nodes.size())
    throw AnalysisError("community assignment does not match the graph");
  auto pos = layout_network(g, width, height, iterations, seed);
  auto deg = g.degrees();

  std::string out = detail::svg_open(width, height);
  out += "  <rect x=\"0\" y=\"0\" width=\"" + format_fixed(width, 0) +
         "\" height=\"" + format_fixed(height, 0) + "\" fill=\"#ffffff\"/>\n";

  for (const auto& e : g.edges) {
    const auto& a = pos[e.u];
    const auto& b = pos[e.v];
    double stroke =
        std::min(5.0, 1.0 + 0.6 * static_cast<double>(e.weight - 1));
    out += "  <line x1=\"" + format_fixed(a.x, 2) + "\" y1=\"" +
           format_fixed(a.y, 2) + "\" x2=\"" + format_fixed(b.x, 2) +
           "\" y2=\"" + format_fixed(b.y, 2) +
           "\" stroke=\"#999999\" stroke-width=\"" + format_fixed(stroke, 2) +
           "\"/>\n";
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    double r = 5.0 + 2.0 * std::sqrt(static_cast<double>(deg[i]));
    std::size_t color_idx =
        communities ? static_cast<std::size_t>(communities->assignment[i]) %
                          svg_palette().size()
                    : 0;
    out += "  <circle cx=\"" + format_fixed(pos[i].x, 2) + "\" cy=\"" +
           format_fixed(pos[i].y, 2) + "\" r=\"" + format_fixed(r, 1) +
           "\" fill=\"" + svg_palette()[color_idx] +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "  <text x=\"" + format_fixed(pos[i].x, 2) + "\" y=\"" +
           format_fixed(pos[i].y - r - 4.0, 2) +
           "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">" +
           xml_escape(g.nodes[i].canonical) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

inline std::string render_network_svg(const CoGraph& g,
                                      const Partition& communities,
                                      std::uint32_t seed = 42,
                                      double width = 960.0,
                                      double height = 720.0,
                                      int iterations = 300) {
  return render_network_svg(g, &communities, seed, width, height, iterations);
}

}  // namespace miner

#endif  // MINER_SVG_HPP
