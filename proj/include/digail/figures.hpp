// Copyright 2026 The digail Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DIGAIL_FIGURES_HPP_
#define DIGAIL_FIGURES_HPP_

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "digail/evaluation.hpp"
#include "digail/four_rooms.hpp"
#include "digail/trajectory.hpp"

namespace digail {

// Fixed code colors; figures stay byte-identical across runs.
inline const char* kPalette[8] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

inline const char* code_color(int code) { return kPalette[((code % 8) + 8) % 8]; }

// All figure coordinates render through one fixed-precision formatter.
inline std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return std::string(buf);
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace detail {

inline std::string svg_open(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt3(w) +
         "\" height=\"" + fmt3(h) + "\" viewBox=\"0 0 " + fmt3(w) + " " + fmt3(h) +
         "\">\n";
}

inline std::string svg_rect(double x, double y, double w, double h,
                            const std::string& fill) {
  return "<rect x=\"" + fmt3(x) + "\" y=\"" + fmt3(y) + "\" width=\"" + fmt3(w) +
         "\" height=\"" + fmt3(h) + "\" fill=\"" + fill + "\"/>\n";
}

inline std::string svg_line(double x1, double y1, double x2, double y2,
                            const std::string& stroke, double width) {
  return "<line x1=\"" + fmt3(x1) + "\" y1=\"" + fmt3(y1) + "\" x2=\"" + fmt3(x2) +
         "\" y2=\"" + fmt3(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
         fmt3(width) + "\"/>\n";
}

inline std::string svg_circle(double cx, double cy, double r, const std::string& fill) {
  return "<circle cx=\"" + fmt3(cx) + "\" cy=\"" + fmt3(cy) + "\" r=\"" + fmt3(r) +
         "\" fill=\"" + fill + "\"/>\n";
}

inline std::string svg_text(double x, double y, const std::string& s) {
  return "<text x=\"" + fmt3(x) + "\" y=\"" + fmt3(y) +
         "\" font-family=\"monospace\" font-size=\"12\">" + s + "</text>\n";
}

// Arrow glyph centered in a cell: shaft plus two head strokes.
inline std::string svg_arrow(double cx, double cy, int action, double len,
                             const std::string& color) {
  double dx = 0.0, dy = 0.0;
  switch (action) {
    case kUp: dy = -1.0; break;
    case kDown: dy = 1.0; break;
    case kLeft: dx = -1.0; break;
    case kRight: dx = 1.0; break;
    default: throw std::invalid_argument("svg_arrow: bad action");
  }
  const double x1 = cx - dx * len / 2, y1 = cy - dy * len / 2;
  const double x2 = cx + dx * len / 2, y2 = cy + dy * len / 2;
  const double hx = -dx * len * 0.35, hy = -dy * len * 0.35;
  const double px = -dy * len * 0.25, py = dx * len * 0.25;
  std::string s = svg_line(x1, y1, x2, y2, color, 1.5);
  s += svg_line(x2, y2, x2 + hx + px, y2 + hy + py, color, 1.5);
  s += svg_line(x2, y2, x2 + hx - px, y2 + hy - py, color, 1.5);
  return s;
}

}  // namespace detail

// Greedy-action arrow map for one latent code: one arrow per non-wall cell,
// walls filled dark, the apple cell ringed.
inline std::string fourrooms_arrow_svg(const std::vector<int>& action_map, int apple,
                                       int code) {
  const double cell = 32.0;
  const double w = FourRoomsMap::kWidth * cell, h = FourRoomsMap::kHeight * cell;
  std::string svg = detail::svg_open(w, h);
  svg += detail::svg_rect(0, 0, w, h, "#ffffff");
  for (int r = 0; r < FourRoomsMap::kHeight; ++r) {
    for (int c = 0; c < FourRoomsMap::kWidth; ++c) {
      const double x = c * cell, y = r * cell;
      if (FourRoomsMap::is_wall(r, c)) {
        svg += detail::svg_rect(x, y, cell, cell, "#444444");
        continue;
      }
      const int a = action_map[FourRoomsMap::cell(r, c)];
      if (a >= 0)
        svg += detail::svg_arrow(x + cell / 2, y + cell / 2, a, cell * 0.6,
                                 code_color(code));
    }
  }
  const double ax = FourRoomsMap::col_of(apple) * cell + cell / 2;
  const double ay = FourRoomsMap::row_of(apple) * cell + cell / 2;
  svg += detail::svg_circle(ax, ay, cell * 0.3, "#d62728");
  svg += "</svg>\n";
  return svg;
}

// Planar path with per-segment code colors.
struct ColoredPath {
  std::vector<Vec> points;  // 2D
  std::vector<int> codes;   // per point; segment (t, t+1) uses codes[t]
};

// Paths overlaid in one panel, linearly fitted to a fixed canvas. Segment
// colors follow the code active at the segment start.
inline std::string paths_svg(const std::vector<ColoredPath>& paths) {
  if (paths.empty()) throw std::invalid_argument("paths_svg: no paths");
  double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
  for (const ColoredPath& p : paths) {
    if (p.points.size() != p.codes.size())
      throw std::invalid_argument("paths_svg: points/codes length mismatch");
    for (const Vec& pt : p.points) {
      lo_x = std::min(lo_x, pt[0]);
      hi_x = std::max(hi_x, pt[0]);
      lo_y = std::min(lo_y, pt[1]);
      hi_y = std::max(hi_y, pt[1]);
    }
  }
  const double span_x = hi_x - lo_x > 1e-12 ? hi_x - lo_x : 1.0;
  const double span_y = hi_y - lo_y > 1e-12 ? hi_y - lo_y : 1.0;
  const double w = 480.0, h = 480.0, pad = 20.0;
  auto sx = [&](double x) { return pad + (x - lo_x) / span_x * (w - 2 * pad); };
  auto sy = [&](double y) { return h - pad - (y - lo_y) / span_y * (h - 2 * pad); };
  std::string svg = detail::svg_open(w, h);
  svg += detail::svg_rect(0, 0, w, h, "#ffffff");
  for (const ColoredPath& p : paths) {
    for (std::size_t t = 1; t < p.points.size(); ++t)
      svg += detail::svg_line(sx(p.points[t - 1][0]), sy(p.points[t - 1][1]),
                              sx(p.points[t][0]), sy(p.points[t][1]),
                              code_color(p.codes[t - 1]), 1.5);
    if (!p.points.empty())
      svg += detail::svg_circle(sx(p.points[0][0]), sy(p.points[0][1]), 3.0, "#000000");
  }
  svg += "</svg>\n";
  return svg;
}

// Recovers (col, row) waypoints from recorded observations, including the
// final arrival cell reconstructed from the last action.
inline std::vector<Vec> fourrooms_points(const Trajectory& tr, bool compact = false) {
  std::vector<Vec> pts;
  int cell = -1;
  for (const Step& s : tr.steps) {
    if (compact) {
      cell = FourRoomsMap::cell(static_cast<int>(s.state[0]), static_cast<int>(s.state[1]));
    } else {
      cell = argmax(Vec(s.state.begin(), s.state.begin() + FourRoomsMap::kCells));
    }
    pts.push_back({static_cast<double>(FourRoomsMap::col_of(cell)),
                   static_cast<double>(-FourRoomsMap::row_of(cell))});
  }
  if (!tr.steps.empty()) {
    const int last = fourrooms_neighbor(cell, static_cast<int>(tr.steps.back().action[0]));
    pts.push_back({static_cast<double>(FourRoomsMap::col_of(last)),
                   static_cast<double>(-FourRoomsMap::row_of(last))});
  }
  return pts;
}

// Step plot of the hardened code index against time.
inline std::string code_time_svg(const std::vector<int>& codes, int k) {
  if (codes.empty()) throw std::invalid_argument("code_time_svg: empty sequence");
  const double w = 480.0, h = 160.0, pad = 20.0;
  const int T = static_cast<int>(codes.size());
  const double step_w = (w - 2 * pad) / T;
  const double lane = (h - 2 * pad) / (k > 1 ? k - 1 : 1);
  auto y_of = [&](int c) { return h - pad - c * lane; };
  std::string svg = detail::svg_open(w, h);
  svg += detail::svg_rect(0, 0, w, h, "#ffffff");
  for (int t = 0; t < T; ++t) {
    const double x0 = pad + t * step_w, x1 = pad + (t + 1) * step_w;
    svg += detail::svg_line(x0, y_of(codes[t]), x1, y_of(codes[t]),
                            code_color(codes[t]), 2.0);
    if (t > 0 && codes[t] != codes[t - 1])
      svg += detail::svg_line(x0, y_of(codes[t - 1]), x0, y_of(codes[t]), "#999999", 1.0);
  }
  svg += "</svg>\n";
  return svg;
}

// One data row per step (header excluded).
inline std::string code_time_csv(const std::vector<int>& codes) {
  std::ostringstream o;
  o << "t,code\n";
  for (std::size_t t = 0; t < codes.size(); ++t) o << t << "," << codes[t] << "\n";
  return o.str();
}

// Scatter of projected states colored by code: a (c0, c1) panel, plus a
// (c0, c2) panel when a third component exists.
inline std::string pca_scatter_svg(const PcaProjection& proj) {
  if (proj.components.size() < 2)
    throw std::invalid_argument("pca_scatter_svg: need at least 2 components");
  const int panels = proj.components.size() >= 3 ? 2 : 1;
  const double w = 480.0, h = 480.0, pad = 30.0;
  std::string svg = detail::svg_open(w * panels, h);
  svg += detail::svg_rect(0, 0, w * panels, h, "#ffffff");
  for (int panel = 0; panel < panels; ++panel) {
    const int dx = 0, dy = panel == 0 ? 1 : 2;
    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300;
    for (const Vec& p : proj.points) {
      lo_x = std::min(lo_x, p[dx]);
      hi_x = std::max(hi_x, p[dx]);
      lo_y = std::min(lo_y, p[dy]);
      hi_y = std::max(hi_y, p[dy]);
    }
    const double span_x = hi_x - lo_x > 1e-12 ? hi_x - lo_x : 1.0;
    const double span_y = hi_y - lo_y > 1e-12 ? hi_y - lo_y : 1.0;
    const double ox = panel * w;
    for (std::size_t i = 0; i < proj.points.size(); ++i) {
      const double x = ox + pad + (proj.points[i][dx] - lo_x) / span_x * (w - 2 * pad);
      const double y = h - pad - (proj.points[i][dy] - lo_y) / span_y * (h - 2 * pad);
      svg += detail::svg_circle(x, y, 2.5, code_color(proj.labels[i]));
    }
    svg += detail::svg_text(ox + pad, 16.0,
                            panel == 0 ? "components 1-2" : "components 1-3");
  }
  svg += "</svg>\n";
  return svg;
}

inline std::string pca_csv(const PcaProjection& proj) {
  std::ostringstream o;
  o << "index";
  for (std::size_t c = 0; c < proj.components.size(); ++c) o << ",c" << c;
  o << ",code\n";
  for (std::size_t i = 0; i < proj.points.size(); ++i) {
    o << i;
    for (double v : proj.points[i]) o << "," << fmt3(v);
    o << "," << proj.labels[i] << "\n";
  }
  return o.str();
}

inline std::string returns_csv_header() { return "method,env,mean,std,n_episodes\n"; }

inline std::string returns_csv_row(const std::string& method, const std::string& env,
                                   const ReturnStats& st) {
  std::ostringstream o;
  o << method << "," << env << "," << fmt3(st.mean) << "," << fmt3(st.std_dev) << ","
    << st.n_episodes << "\n";
  return o.str();
}

inline std::string segmentation_csv(const SegmentationReport& rep) {
  std::ostringstream o;
  o << "trajectory,switches,codes\n";
  for (std::size_t i = 0; i < rep.codes.size(); ++i) {
    o << i << "," << rep.switch_counts[i] << ",";
    for (std::size_t t = 0; t < rep.codes[i].size(); ++t) {
      if (t) o << " ";
      o << rep.codes[i][t];
    }
    o << "\n";
  }
  return o.str();
}

}  // namespace digail

#endif  // DIGAIL_FIGURES_HPP_
