#include "cinewild/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <stdexcept>

namespace cinewild {

namespace {

// Fixed canvas; enough for a quick visual read, not publication output.
constexpr double kWidth = 860, kHeight = 420;
constexpr double kLeft = 64, kRight = 16, kTop = 34, kBottom = 44;

struct Series {
  const char* label;
  const char* color;
  std::function<double(const StepRecord&)> value;
};

struct RefLine {
  double y;
  std::string label;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// A readable tick spacing: 1/2/5 times a power of ten.
double nice_step(double span) {
  if (span <= 0) return 1;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  if (frac <= 1) return mag;
  if (frac <= 2) return 2 * mag;
  if (frac <= 5) return 5 * mag;
  return 10 * mag;
}

struct Panel {
  std::string title;
  std::string y_label;
  std::vector<Series> series;
  std::vector<RefLine> refs;
};

Panel make_panel(PlotPanel which, const PlotContext& ctx) {
  switch (which) {
    case PlotPanel::kDistance:
      return {"distance to subject",
              "m",
              {{"distance", "#1f77b4", [](const StepRecord& r) { return r.dist; }}},
              {{ctx.caution_dist, "caution"},
               {ctx.safety_dist, "safety"},
               {ctx.visibility_range, "sight range"}}};
    case PlotPanel::kFocal:
      return {"focal length",
              "mm",
              {{"focal", "#2ca02c", [](const StepRecord& r) { return r.focal_mm; }}},
              {}};
    case PlotPanel::kFraming:
      return {"framing error",
              "px",
              {{"err u", "#1f77b4",
                [](const StepRecord& r) { return r.framing_err_u; }},
               {"err v", "#d62728",
                [](const StepRecord& r) { return r.framing_err_v; }}},
              {{0.0, ""}}};
    case PlotPanel::kKinematics:
      return {"drone kinematics",
              "m/s, m/s^2",
              {{"speed", "#1f77b4", [](const StepRecord& r) { return r.speed; }},
               {"accel", "#ff7f0e",
                [](const StepRecord& r) { return r.accel_norm; }}},
              {}};
    case PlotPanel::kFovX:
      return {"drone in the animal's image (horizontal)",
              "px",
              {{"eye u", "#9467bd",
                [](const StepRecord& r) { return r.drone_in_eye_px.u; }}},
              {{0.0, "left edge"}, {ctx.eye_width_px, "right edge"}}};
  }
  throw std::invalid_argument("render_svg: unknown panel");
}

}  // namespace

PlotPanel panel_from_name(const std::string& name) {
  if (name == "distance") return PlotPanel::kDistance;
  if (name == "focal") return PlotPanel::kFocal;
  if (name == "framing") return PlotPanel::kFraming;
  if (name == "kinematics") return PlotPanel::kKinematics;
  if (name == "fovx") return PlotPanel::kFovX;
  throw std::invalid_argument("unknown plot panel: '" + name +
                              "' (expected distance, focal, framing, "
                              "kinematics or fovx)");
}

std::string panel_name(PlotPanel p) {
  switch (p) {
    case PlotPanel::kDistance: return "distance";
    case PlotPanel::kFocal: return "focal";
    case PlotPanel::kFraming: return "framing";
    case PlotPanel::kKinematics: return "kinematics";
    case PlotPanel::kFovX: return "fovx";
  }
  return "distance";
}

std::string render_svg(const std::vector<StepRecord>& records, PlotPanel which,
                       const PlotContext& ctx) {
  if (records.empty())
    throw std::invalid_argument("render_svg: no records");
  const Panel panel = make_panel(which, ctx);

  double t_min = records.front().t, t_max = records.back().t;
  if (t_max <= t_min) t_max = t_min + 1;
  double y_min = 0, y_max = 1;
  bool have_y = false;
  for (const Series& s : panel.series) {
    for (const StepRecord& r : records) {
      const double y = s.value(r);
      if (std::isnan(y)) continue;
      if (!have_y) {
        y_min = y_max = y;
        have_y = true;
      } else {
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  for (const RefLine& ref : panel.refs) {
    y_min = std::min(y_min, ref.y);
    y_max = std::max(y_max, ref.y);
  }
  if (y_max - y_min < 1e-9) {
    y_min -= 1;
    y_max += 1;
  }
  const double pad = 0.06 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const auto px = [&](double t) {
    return kLeft + (t - t_min) / (t_max - t_min) * plot_w;
  };
  const auto py = [&](double y) {
    return kTop + (y_max - y) / (y_max - y_min) * plot_h;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) +
         "\" height=\"" + fmt(kHeight) + "\" viewBox=\"0 0 " + fmt(kWidth) +
         " " + fmt(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(kLeft) + "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"14\" fill=\"#333\">" + panel.title + "</text>\n";

  // Axes box.
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" +
         fmt(plot_w) + "\" height=\"" + fmt(plot_h) +
         "\" fill=\"none\" stroke=\"#999\"/>\n";

  // Ticks.
  const double ty = nice_step(y_max - y_min);
  for (double y = std::ceil(y_min / ty) * ty; y <= y_max + 1e-9; y += ty) {
    svg += "<line x1=\"" + fmt(kLeft - 4) + "\" y1=\"" + fmt(py(y)) +
           "\" x2=\"" + fmt(kLeft) + "\" y2=\"" + fmt(py(y)) +
           "\" stroke=\"#999\"/>\n";
    svg += "<text x=\"" + fmt(kLeft - 8) + "\" y=\"" + fmt(py(y) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\" "
           "text-anchor=\"end\">" + fmt(y) + "</text>\n";
  }
  const double tx = nice_step(t_max - t_min);
  for (double t = std::ceil(t_min / tx) * tx; t <= t_max + 1e-9; t += tx) {
    svg += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(kTop + plot_h) +
           "\" x2=\"" + fmt(px(t)) + "\" y2=\"" + fmt(kTop + plot_h + 4) +
           "\" stroke=\"#999\"/>\n";
    svg += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(kTop + plot_h + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\" "
           "text-anchor=\"middle\">" + fmt(t) + "</text>\n";
  }
  svg += "<text x=\"" + fmt(kLeft + plot_w / 2) + "\" y=\"" +
         fmt(kHeight - 8) + "\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#555\" text-anchor=\"middle\">t [s]</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(kTop + plot_h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#555\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(kTop + plot_h / 2) + ")\">" + panel.y_label + "</text>\n";

  // Storyboard boundaries.
  for (double end : ctx.sequence_ends) {
    if (end <= t_min || end >= t_max) continue;
    svg += "<line x1=\"" + fmt(px(end)) + "\" y1=\"" + fmt(kTop) + "\" x2=\"" +
           fmt(px(end)) + "\" y2=\"" + fmt(kTop + plot_h) +
           "\" stroke=\"#bbb\" stroke-dasharray=\"3 4\"/>\n";
  }

  // Reference lines.
  for (const RefLine& ref : panel.refs) {
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(ref.y)) +
           "\" x2=\"" + fmt(kLeft + plot_w) + "\" y2=\"" + fmt(py(ref.y)) +
           "\" stroke=\"#888\" stroke-dasharray=\"6 4\"/>\n";
    if (!ref.label.empty())
      svg += "<text x=\"" + fmt(kLeft + plot_w - 6) + "\" y=\"" +
             fmt(py(ref.y) - 4) + "\" font-family=\"sans-serif\" "
             "font-size=\"10\" fill=\"#888\" text-anchor=\"end\">" +
             ref.label + "</text>\n";
  }

  // Data: one polyline segment per NaN-free stretch.
  for (const Series& s : panel.series) {
    std::string points;
    const auto flush = [&]() {
      if (points.empty()) return;
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(s.color) +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      points.clear();
    };
    for (const StepRecord& r : records) {
      const double y = s.value(r);
      if (std::isnan(y)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += fmt(px(r.t)) + "," + fmt(py(std::clamp(y, y_min, y_max)));
    }
    flush();
  }

  // Legend, top right.
  double lx = kLeft + plot_w - 120, ly = kTop + 14;
  for (const Series& s : panel.series) {
    svg += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(ly - 8) +
           "\" width=\"10\" height=\"10\" fill=\"" + std::string(s.color) +
           "\"/>\n";
    svg += "<text x=\"" + fmt(lx + 16) + "\" y=\"" + fmt(ly + 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">" +
           std::string(s.label) + "</text>\n";
    ly += 16;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace cinewild
