#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"

#include "cinewild/csvio.hpp"
#include "cinewild/plots.hpp"

using namespace cinewild;

namespace {

bool same_number(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::vector<StepRecord> synthetic_records(int n) {
  std::vector<StepRecord> out;
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int k = 0; k < n; ++k) {
    StepRecord r;
    r.k = k;
    r.t = 0.2 * (k + 1);
    r.drone_pos = Vec3(10 + u(rng), u(rng), 3 + u(rng) / 5);
    r.drone_vel = Vec3(u(rng), u(rng), u(rng)) / 5;
    r.gimbal = {u(rng) / 20, u(rng) / 10, u(rng)};
    r.focal_mm = 35 + k;
    r.target_pos = Vec3(0.3 * k, 0, 0.7);
    r.heading = {0, 0, u(rng) / 3};
    r.dist = 10 + 5 * std::sin(0.3 * k);
    r.subject_px = {480 + u(rng), 270 + u(rng)};
    r.drone_in_eye_px = {480 + 40 * u(rng), 270 + 20 * u(rng)};
    if (k % 7 == 3) {  // behind a lens: pixels go NaN
      r.subject_px = {std::nan(""), std::nan("")};
      r.framing_err_u = std::nan("");
      r.framing_err_v = std::nan("");
    } else {
      r.framing_err_u = r.subject_px.u - 480;
      r.framing_err_v = r.subject_px.v - 270;
    }
    if (k % 5 == 2) r.drone_in_eye_px = {std::nan(""), std::nan("")};
    r.inside_fov = k % 3 == 0;
    r.yaw_err = u(rng) / 2;
    r.accel_norm = std::abs(u(rng)) / 2;
    r.speed = std::abs(u(rng)) / 2;
    r.cost.proximity = std::abs(u(rng));
    r.cost.visibility = std::abs(u(rng));
    r.cost.smoothness = std::abs(u(rng)) / 10;
    r.cost.framing = std::abs(u(rng)) * 3;
    r.cost.pose = M_PI * std::abs(u(rng));
    out.push_back(r);
  }
  // Exercise round-trip precision on awkward values.
  out[0].dist = 1.0 / 3.0;
  out[0].yaw_err = -0.0;
  out[1].cost.framing = 1e300;
  out[1].drone_pos.x() = 1e-17;
  return out;
}

// Minimal XML well-formedness scan: declarations and comments are skipped,
// self-closing tags ignored, and every open tag must close in order.
bool xml_balanced(const std::string& doc) {
  std::vector<std::string> stack;
  size_t i = 0;
  while ((i = doc.find('<', i)) != std::string::npos) {
    const size_t end = doc.find('>', i);
    if (end == std::string::npos) return false;
    std::string tag = doc.substr(i + 1, end - i - 1);
    i = end + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?' || tag.front() == '!') continue;
    if (tag.back() == '/') continue;  // self-closing
    if (tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const size_t sp = tag.find_first_of(" \t\n");
    stack.push_back(sp == std::string::npos ? tag : tag.substr(0, sp));
  }
  return stack.empty();
}

}  // namespace

TEST_CASE("CSV round trip preserves every field bit for bit") {
  const std::vector<StepRecord> recs = synthetic_records(23);
  const std::string text = records_to_csv(recs);
  CHECK(text.rfind(kMetricsHeader, 0) == 0);  // header is the first line

  const std::vector<StepRecord> back = records_from_csv(text);
  REQUIRE(back.size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    const StepRecord& a = recs[i];
    const StepRecord& b = back[i];
    CHECK(a.k == b.k);
    CHECK(same_number(a.t, b.t));
    for (int j = 0; j < 3; ++j) {
      CHECK(same_number(a.drone_pos[j], b.drone_pos[j]));
      CHECK(same_number(a.drone_vel[j], b.drone_vel[j]));
      CHECK(same_number(a.target_pos[j], b.target_pos[j]));
    }
    CHECK(same_number(a.gimbal.roll, b.gimbal.roll));
    CHECK(same_number(a.gimbal.pitch, b.gimbal.pitch));
    CHECK(same_number(a.gimbal.yaw, b.gimbal.yaw));
    CHECK(same_number(a.heading.yaw, b.heading.yaw));
    CHECK(same_number(a.focal_mm, b.focal_mm));
    CHECK(same_number(a.dist, b.dist));
    CHECK(same_number(a.subject_px.u, b.subject_px.u));
    CHECK(same_number(a.subject_px.v, b.subject_px.v));
    CHECK(same_number(a.drone_in_eye_px.u, b.drone_in_eye_px.u));
    CHECK(same_number(a.drone_in_eye_px.v, b.drone_in_eye_px.v));
    CHECK(a.inside_fov == b.inside_fov);
    CHECK(same_number(a.framing_err_u, b.framing_err_u));
    CHECK(same_number(a.framing_err_v, b.framing_err_v));
    CHECK(same_number(a.yaw_err, b.yaw_err));
    CHECK(same_number(a.accel_norm, b.accel_norm));
    CHECK(same_number(a.speed, b.speed));
    CHECK(same_number(a.cost.proximity, b.cost.proximity));
    CHECK(same_number(a.cost.visibility, b.cost.visibility));
    CHECK(same_number(a.cost.smoothness, b.cost.smoothness));
    CHECK(same_number(a.cost.framing, b.cost.framing));
    CHECK(same_number(a.cost.pose, b.cost.pose));
  }
  // Re-serializing the parsed records reproduces the text byte for byte.
  CHECK(records_to_csv(back) == text);
}

TEST_CASE("CSV files are written and read back atomically") {
  const std::vector<StepRecord> recs = synthetic_records(9);
  const std::string path =
      (std::filesystem::temp_directory_path() / "cinewild_metrics_test.csv")
          .string();
  write_csv(recs, path);
  const std::vector<StepRecord> back = read_csv(path);
  REQUIRE(back.size() == recs.size());
  CHECK(records_to_csv(back) == records_to_csv(recs));
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_csv(path), std::runtime_error);
}

TEST_CASE("malformed CSV is rejected with a located message") {
  CHECK_THROWS_WITH_AS(records_from_csv(""), "empty file (missing header)",
                       SchemaError);
  CHECK_THROWS_WITH_AS(records_from_csv("k,t,nope\n"),
                       "line 1: header does not match the metrics schema",
                       SchemaError);

  const std::string text = records_to_csv(synthetic_records(2));
  const size_t header_end = text.find('\n');
  const std::string header = text.substr(0, header_end + 1);

  // Truncated row.
  CHECK_THROWS_AS(records_from_csv(header + "1,2,3\n"), SchemaError);

  // Non-numeric field.
  std::string bad_row = text.substr(header_end + 1);
  bad_row = bad_row.substr(0, bad_row.find('\n') + 1);
  std::string corrupted = bad_row;
  corrupted.replace(0, 1, "x");  // clobber the step index
  try {
    records_from_csv(header + corrupted);
    FAIL("expected a SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("not an integer") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }

  // Boolean column outside {0, 1}.
  std::vector<StepRecord> recs = synthetic_records(1);
  std::string flagged = records_to_csv(recs);
  // inside_fov is the 24th column; rewrite it via parse/patch of the row.
  std::vector<std::string> fields;
  std::string row = flagged.substr(flagged.find('\n') + 1);
  row.pop_back();  // trailing newline
  size_t start = 0;
  while (true) {
    const size_t comma = row.find(',', start);
    fields.push_back(row.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  fields[23] = "2";
  std::string patched;
  for (size_t i = 0; i < fields.size(); ++i)
    patched += (i ? "," : "") + fields[i];
  try {
    records_from_csv(header + patched + "\n");
    FAIL("expected a SchemaError");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("inside_fov must be 0 or 1") !=
          std::string::npos);
  }
}

TEST_CASE("every panel renders standalone well-formed SVG") {
  const std::vector<StepRecord> recs = synthetic_records(40);
  PlotContext ctx;
  ctx.sequence_ends = {2.0, 5.0};
  for (const PlotPanel panel :
       {PlotPanel::kDistance, PlotPanel::kFocal, PlotPanel::kFraming,
        PlotPanel::kKinematics, PlotPanel::kFovX}) {
    const std::string svg = render_svg(recs, panel, ctx);
    CAPTURE(panel_name(panel));
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(xml_balanced(svg));
    CHECK(svg.find("polyline") != std::string::npos);
    // NaN samples must break the line, never leak into coordinates.
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("NaN") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
  }
}

TEST_CASE("panels render even for a single record") {
  const std::vector<StepRecord> recs = synthetic_records(1);
  const std::string svg = render_svg(recs, PlotPanel::kDistance, PlotContext{});
  CHECK(xml_balanced(svg));
  CHECK(svg.find("nan") == std::string::npos);
}

TEST_CASE("panel names round trip and reject unknowns") {
  const char* names[] = {"distance", "focal", "framing", "kinematics", "fovx"};
  for (const char* n : names)
    CHECK(panel_name(panel_from_name(n)) == n);
  CHECK_THROWS_AS(panel_from_name("altitude"), std::invalid_argument);
  CHECK_THROWS_AS(panel_from_name(""), std::invalid_argument);
}
