#pragma once

#include <string>
#include <vector>

#include "cinewild/harness.hpp"

namespace cinewild {

enum class PlotPanel { kDistance, kFocal, kFraming, kKinematics, kFovX };

// Panel name as used on the command line: distance, focal, framing,
// kinematics, fovx.  Throws std::invalid_argument on an unknown name.
PlotPanel panel_from_name(const std::string& name);
std::string panel_name(PlotPanel p);

struct PlotContext {
  // Horizontal reference lines (distance panel: bands; fovx: image borders).
  double caution_dist{20.0};
  double safety_dist{5.0};
  double visibility_range{12.0};
  double eye_width_px{960.0};
  // Vertical dashes at storyboard boundaries; empty = none drawn.
  std::vector<double> sequence_ends;
};

// Renders one time-series panel as a standalone SVG document.
std::string render_svg(const std::vector<StepRecord>& records, PlotPanel panel,
                       const PlotContext& ctx);

}  // namespace cinewild
