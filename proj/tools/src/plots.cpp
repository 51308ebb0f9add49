// Copyright 2026 The clothopt Authors
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

#include "plots.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

namespace clothopt {

namespace {

constexpr double kCanvasW = 640.0;
constexpr double kCanvasH = 480.0;
constexpr double kMargin = 48.0;

const char* kPathPalette[] = {"#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                              "#17becf", "#8c564b"};

std::string fmt(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

// Maps a world-coordinate window onto the canvas with uniform scale and a
// flipped vertical axis (SVG y grows downward).
class View {
 public:
  View(double min_a, double max_a, double min_b, double max_b) {
    const double pad_a = std::max(0.05 * (max_a - min_a), 1e-3);
    const double pad_b = std::max(0.05 * (max_b - min_b), 1e-3);
    min_a_ = min_a - pad_a;
    min_b_ = min_b - pad_b;
    const double span_a = (max_a + pad_a) - min_a_;
    const double span_b = (max_b + pad_b) - min_b_;
    scale_ = std::min((kCanvasW - 2 * kMargin) / span_a,
                      (kCanvasH - 2 * kMargin) / span_b);
    offset_a_ = kMargin + 0.5 * ((kCanvasW - 2 * kMargin) - scale_ * span_a);
    offset_b_ = kMargin + 0.5 * ((kCanvasH - 2 * kMargin) - scale_ * span_b);
  }

  double x(double a) const { return offset_a_ + scale_ * (a - min_a_); }
  double y(double b) const {
    return kCanvasH - offset_b_ - scale_ * (b - min_b_);
  }
  double length(double r) const { return scale_ * r; }

 private:
  double min_a_ = 0.0, min_b_ = 0.0;
  double scale_ = 1.0;
  double offset_a_ = 0.0, offset_b_ = 0.0;
};

class SvgWriter {
 public:
  SvgWriter() {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCanvasW
          << "\" height=\"" << kCanvasH << "\" viewBox=\"0 0 " << kCanvasW
          << ' ' << kCanvasH << "\">\n"
          << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  }

  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke) {
    body_ << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\""
          << fmt(r) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
          << "\" stroke-width=\"1\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& points,
                const std::string& stroke, double width, bool closed,
                const std::string& dash = "") {
    body_ << (closed ? "<polygon points=\"" : "<polyline points=\"");
    for (const auto& [px, py] : points) {
      body_ << fmt(px) << ',' << fmt(py) << ' ';
    }
    body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt(width) << '"';
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << '"';
    body_ << "/>\n";
  }

  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, const std::string& dash = "") {
    body_ << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\""
          << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke
          << "\" stroke-width=\"1\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << '"';
    body_ << "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
          << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\"" << fill
          << "\"/>\n";
  }

  void text(double x, double y, const std::string& content,
            const std::string& anchor = "start", double size = 12.0) {
    body_ << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y)
          << "\" font-family=\"sans-serif\" font-size=\"" << fmt(size)
          << "\" text-anchor=\"" << anchor << "\">" << content << "</text>\n";
  }

  void save(const std::filesystem::path& path) {
    body_ << "</svg>\n";
    std::ofstream stream(path);
    if (!stream) {
      throw ConfigError("cannot write file: " + path.string());
    }
    stream << body_.str();
  }

 private:
  std::ostringstream body_;
};

// The counterclockwise boundary loop of the grid.
std::vector<int> boundary_indices(const ClothMesh& mesh) {
  std::vector<int> loop;
  const int rows = mesh.n_rows, cols = mesh.n_cols;
  for (int c = 0; c < cols; ++c) loop.push_back(mesh.index_of(0, c));
  for (int r = 1; r < rows; ++r) loop.push_back(mesh.index_of(r, cols - 1));
  for (int c = cols - 2; c >= 0; --c) loop.push_back(mesh.index_of(rows - 1, c));
  for (int r = rows - 2; r >= 1; --r) loop.push_back(mesh.index_of(r, 0));
  return loop;
}

struct Projection {
  const char* name_a;
  const char* name_b;
  double (*a)(const Vec3&);
  double (*b)(const Vec3&);
};

void write_one_path_plot(const std::filesystem::path& path,
                         const CompiledScene& scene,
                         const std::vector<State>& states,
                         const Projection& proj, const std::string& title) {
  double min_a = std::numeric_limits<double>::infinity(), max_a = -min_a;
  double min_b = std::numeric_limits<double>::infinity(), max_b = -min_b;
  auto grow = [&](double a, double b) {
    min_a = std::min(min_a, a);
    max_a = std::max(max_a, a);
    min_b = std::min(min_b, b);
    max_b = std::max(max_b, b);
  };
  for (const State& state : states) {
    for (const Vec3& p : state.positions) grow(proj.a(p), proj.b(p));
  }
  for (const Sphere& sphere : scene.obstacle.spheres) {
    grow(proj.a(sphere.center) - sphere.radius,
         proj.b(sphere.center) - sphere.radius);
    grow(proj.a(sphere.center) + sphere.radius,
         proj.b(sphere.center) + sphere.radius);
  }
  for (const Vec3& p : scene.target.target_positions) grow(proj.a(p), proj.b(p));

  View view(min_a, max_a, min_b, max_b);
  SvgWriter svg;
  svg.text(kCanvasW / 2, 24, title, "middle", 14);
  svg.text(kCanvasW - kMargin, kCanvasH - 12, std::string(proj.name_a) + " →",
           "end");
  svg.text(12, kMargin, std::string(proj.name_b) + " ↑");

  for (const Sphere& sphere : scene.obstacle.spheres) {
    svg.circle(view.x(proj.a(sphere.center)), view.y(proj.b(sphere.center)),
               view.length(sphere.radius), "#e0e0e0", "#9e9e9e");
  }

  const std::vector<int> loop = boundary_indices(scene.mesh);
  for (const auto& [state, color] :
       {std::pair<const State*, const char*>{&states.front(), "#9ecae1"},
        std::pair<const State*, const char*>{&states.back(), "#3182bd"}}) {
    std::vector<std::pair<double, double>> points;
    for (int index : loop) {
      const Vec3& p = state->positions[index];
      points.emplace_back(view.x(proj.a(p)), view.y(proj.b(p)));
    }
    svg.polyline(points, color, 1.5, /*closed=*/true);
  }

  for (const Vec3& p : scene.target.target_positions) {
    svg.circle(view.x(proj.a(p)), view.y(proj.b(p)), 2.5, "#000000", "none");
  }

  for (size_t k = 0; k < scene.control_indices.size(); ++k) {
    const char* color = kPathPalette[k % std::size(kPathPalette)];
    std::vector<std::pair<double, double>> points;
    for (const State& state : states) {
      const Vec3& p = state.positions[scene.control_indices[k]];
      points.emplace_back(view.x(proj.a(p)), view.y(proj.b(p)));
    }
    svg.polyline(points, color, 2.0, /*closed=*/false);
    svg.circle(points.front().first, points.front().second, 3.0, color, "none");
    svg.circle(points.back().first, points.back().second, 4.5, "none", color);
  }
  svg.save(path);
}

}  // namespace

void write_path_plots(const std::filesystem::path& plots_dir,
                      const CompiledScene& scene,
                      const std::vector<State>& states) {
  std::filesystem::create_directories(plots_dir);
  const Projection top{"x", "y", [](const Vec3& p) { return p.x(); },
                       [](const Vec3& p) { return p.y(); }};
  const Projection side{"y", "z", [](const Vec3& p) { return p.y(); },
                        [](const Vec3& p) { return p.z(); }};
  write_one_path_plot(plots_dir / "paths_top.svg", scene, states, top,
                      "control point paths, top view");
  write_one_path_plot(plots_dir / "paths_side.svg", scene, states, side,
                      "control point paths, side view");
}

void write_convergence_plot(const std::filesystem::path& plots_dir,
                            const OptimizationReport& report) {
  std::filesystem::create_directories(plots_dir);

  std::vector<double> values;
  std::vector<size_t> round_starts;
  for (const RoundRecord& round : report.rounds) {
    round_starts.push_back(values.size());
    values.insert(values.end(), round.phi_history.begin(),
                  round.phi_history.end());
  }
  if (values.empty()) values.push_back(0.0);

  // Log scale when every value is positive, which is the usual case for
  // the penalized objective.
  bool log_scale = true;
  for (double v : values) log_scale = log_scale && v > 0.0;
  auto transform = [log_scale](double v) {
    return log_scale ? std::log10(v) : v;
  };
  double lo = transform(values[0]), hi = lo;
  for (double v : values) {
    lo = std::min(lo, transform(v));
    hi = std::max(hi, transform(v));
  }
  if (hi - lo < 1e-12) hi = lo + 1.0;

  SvgWriter svg;
  svg.text(kCanvasW / 2, 24, "penalized objective per accepted step", "middle",
           14);
  const double x0 = kMargin, x1 = kCanvasW - kMargin;
  const double y0 = kCanvasH - kMargin, y1 = kMargin;
  auto px = [&](size_t i) {
    return values.size() == 1
               ? x0
               : x0 + (x1 - x0) * static_cast<double>(i) /
                         static_cast<double>(values.size() - 1);
  };
  auto py = [&](double v) {
    return y0 - (y0 - y1) * (transform(v) - lo) / (hi - lo);
  };

  svg.line(x0, y0, x1, y0, "#000000");
  svg.line(x0, y0, x0, y1, "#000000");
  svg.text(x1, y0 + 16, "step", "end");
  svg.text(x0, y1 - 8, log_scale ? "phi (log)" : "phi");
  svg.text(x0 - 4, y0, fmt(values.size() == 1 ? values[0] : std::pow(10.0, lo)),
           "end", 10);
  svg.text(x0 - 4, y1 + 4, fmt(log_scale ? std::pow(10.0, hi) : hi), "end", 10);

  for (size_t r = 1; r < round_starts.size(); ++r) {
    const double x = px(round_starts[r]);
    svg.line(x, y0, x, y1, "#bbbbbb", "4 3");
  }

  std::vector<std::pair<double, double>> points;
  for (size_t i = 0; i < values.size(); ++i) {
    points.emplace_back(px(i), py(values[i]));
  }
  svg.polyline(points, "#1f77b4", 1.5, /*closed=*/false);
  svg.save(plots_dir / "convergence.svg");
}

void write_ablation_chart(const std::filesystem::path& path,
                          const std::vector<std::string>& variant_names,
                          const std::vector<Metrics>& variant_metrics) {
  // Padded log heights keep near-zero bars visible next to O(1) ones.
  constexpr double kPad = 0.1;
  const char* metric_names[] = {"G", "T", "E"};
  const char* metric_colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};

  double max_height = 0.0;
  auto bar_height = [&](double value) {
    return std::log10((std::max(value, 0.0) + kPad) / kPad);
  };
  std::vector<std::array<double, 3>> raw(variant_metrics.size());
  for (size_t v = 0; v < variant_metrics.size(); ++v) {
    raw[v] = {variant_metrics[v].target_error, variant_metrics[v].irregularity,
              variant_metrics[v].energy};
    for (double value : raw[v]) {
      max_height = std::max(max_height, bar_height(value));
    }
  }
  if (max_height <= 0.0) max_height = 1.0;

  SvgWriter svg;
  svg.text(kCanvasW / 2, 24, "objective terms per variant (log, padded)",
           "middle", 14);
  const double y0 = kCanvasH - kMargin, y1 = kMargin + 20;
  const double group_width =
      (kCanvasW - 2 * kMargin) / static_cast<double>(variant_names.size());
  const double bar_width = group_width / 4.0;

  svg.line(kMargin, y0, kCanvasW - kMargin, y0, "#000000");
  for (size_t v = 0; v < variant_names.size(); ++v) {
    const double group_x = kMargin + group_width * static_cast<double>(v);
    for (int m = 0; m < 3; ++m) {
      const double h = (y0 - y1) * bar_height(raw[v][m]) / max_height;
      const double bx = group_x + bar_width * (0.5 + m);
      svg.rect(bx, y0 - h, bar_width * 0.9, h, metric_colors[m]);
      svg.text(bx + bar_width * 0.45, y0 - h - 4, fmt(raw[v][m]), "middle", 9);
    }
    svg.text(group_x + group_width / 2, y0 + 16, variant_names[v], "middle");
  }
  for (int m = 0; m < 3; ++m) {
    const double lx = kCanvasW - kMargin - 90 + 30 * m;
    svg.rect(lx, y1 - 14, 10, 10, metric_colors[m]);
    svg.text(lx + 14, y1 - 5, metric_names[m], "start", 11);
  }
  svg.save(path);
}

}  // namespace clothopt
