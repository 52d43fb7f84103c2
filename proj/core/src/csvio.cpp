#include "cinewild/csvio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace cinewild {

const char* const kMetricsHeader =
    "k,t,drone_x,drone_y,drone_z,drone_vx,drone_vy,drone_vz,"
    "gimbal_roll,gimbal_pitch,gimbal_yaw,focal_mm,"
    "target_x,target_y,target_z,heading_roll,heading_pitch,heading_yaw,"
    "dist,subject_u,subject_v,eye_u,eye_v,inside_fov,"
    "frame_err_u,frame_err_v,yaw_err,accel,speed,"
    "cost_proximity,cost_visibility,cost_smoothness,cost_framing,cost_pose,"
    "cost_total";

namespace {

constexpr int kColumns = 35;

// Shortest decimal form that parses back to the same double; keeps files
// readable, round-trippable, and byte-stable.
void fmt_double(std::string& out, double x) {
  if (std::isnan(x)) {
    out += "nan";
    return;
  }
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  out += buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& field, size_t line_no, int col) {
  if (field == "nan") return std::nan("");
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw SchemaError("line " + std::to_string(line_no) + ", column " +
                      std::to_string(col + 1) + ": not a number: '" + field +
                      "'");
  return v;
}

long parse_int(const std::string& field, size_t line_no, int col) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE)
    throw SchemaError("line " + std::to_string(line_no) + ", column " +
                      std::to_string(col + 1) + ": not an integer: '" + field +
                      "'");
  return v;
}

}  // namespace

std::string records_to_csv(const std::vector<StepRecord>& records) {
  std::string out = kMetricsHeader;
  out += '\n';
  char ibuf[16];
  for (const StepRecord& r : records) {
    std::snprintf(ibuf, sizeof(ibuf), "%d", r.k);
    out += ibuf;
    const double cols[] = {r.t,
                           r.drone_pos.x(), r.drone_pos.y(), r.drone_pos.z(),
                           r.drone_vel.x(), r.drone_vel.y(), r.drone_vel.z(),
                           r.gimbal.roll, r.gimbal.pitch, r.gimbal.yaw,
                           r.focal_mm,
                           r.target_pos.x(), r.target_pos.y(), r.target_pos.z(),
                           r.heading.roll, r.heading.pitch, r.heading.yaw,
                           r.dist,
                           r.subject_px.u, r.subject_px.v,
                           r.drone_in_eye_px.u, r.drone_in_eye_px.v};
    for (double c : cols) {
      out += ',';
      fmt_double(out, c);
    }
    out += r.inside_fov ? ",1" : ",0";
    const double tail[] = {r.framing_err_u, r.framing_err_v, r.yaw_err,
                           r.accel_norm, r.speed,
                           r.cost.proximity, r.cost.visibility,
                           r.cost.smoothness, r.cost.framing, r.cost.pose,
                           r.cost.total()};
    for (double c : tail) {
      out += ',';
      fmt_double(out, c);
    }
    out += '\n';
  }
  return out;
}

std::vector<StepRecord> records_from_csv(const std::string& text) {
  std::vector<StepRecord> records;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kMetricsHeader)
        throw SchemaError("line 1: header does not match the metrics schema");
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> f = split_line(line);
    if (static_cast<int>(f.size()) != kColumns)
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(kColumns) + " columns, got " +
                        std::to_string(f.size()));
    StepRecord r;
    int c = 0;
    r.k = static_cast<int>(parse_int(f[static_cast<size_t>(c)], line_no, c)); ++c;
    const auto next = [&]() {
      const int col = c++;
      return parse_double(f[static_cast<size_t>(col)], line_no, col);
    };
    // Argument evaluation order is unspecified, so vector components must be
    // pulled one statement at a time.
    const auto next3 = [&]() {
      Vec3 v;
      v.x() = next();
      v.y() = next();
      v.z() = next();
      return v;
    };
    r.t = next();
    r.drone_pos = next3();
    r.drone_vel = next3();
    r.gimbal.roll = next();
    r.gimbal.pitch = next();
    r.gimbal.yaw = next();
    r.focal_mm = next();
    r.target_pos = next3();
    r.heading.roll = next();
    r.heading.pitch = next();
    r.heading.yaw = next();
    r.dist = next();
    r.subject_px.u = next();
    r.subject_px.v = next();
    r.drone_in_eye_px.u = next();
    r.drone_in_eye_px.v = next();
    {
      const long flag = parse_int(f[static_cast<size_t>(c)], line_no, c);
      if (flag != 0 && flag != 1)
        throw SchemaError("line " + std::to_string(line_no) + ", column " +
                          std::to_string(c + 1) + ": inside_fov must be 0 or 1");
      r.inside_fov = flag == 1;
      ++c;
    }
    r.framing_err_u = next();
    r.framing_err_v = next();
    r.yaw_err = next();
    r.accel_norm = next();
    r.speed = next();
    r.cost.proximity = next();
    r.cost.visibility = next();
    r.cost.smoothness = next();
    r.cost.framing = next();
    r.cost.pose = next();
    next();  // cost_total is derived; parsed for shape only
    records.push_back(r);
  }
  if (line_no == 0) throw SchemaError("empty file (missing header)");
  return records;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw std::runtime_error("rename failed: " + tmp + " -> " + path + ": " +
                             ec.message());
}

void write_csv(const std::vector<StepRecord>& records, const std::string& path) {
  write_file_atomic(path, records_to_csv(records));
}

std::vector<StepRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return records_from_csv(buf.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace cinewild
