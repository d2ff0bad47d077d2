#include "slungload/log.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "slungload/error.hpp"

namespace slungload {
namespace {

constexpr int kLoadColumns = 1 + 6 * 3;
constexpr int kVehicleColumns = 48;

void add3(std::vector<std::string>& cols, const std::string& name) {
  for (const char* axis : {"_x", "_y", "_z"}) cols.push_back(name + axis);
}

void add4(std::vector<std::string>& cols, const std::string& name) {
  for (const char* c : {"_0", "_1", "_2", "_3"}) cols.push_back(name + c);
}

// Flattening shared by the writer and the reader so the two cannot drift.
class Row {
 public:
  explicit Row(std::vector<double>& values) : v_(values) {}

  void put(double x) { v_.push_back(x); }
  void put(const Vec3& x) { v_.insert(v_.end(), x.data(), x.data() + 3); }
  void put(const Vec4& x) { v_.insert(v_.end(), x.data(), x.data() + 4); }

 private:
  std::vector<double>& v_;
};

class Cursor {
 public:
  explicit Cursor(const std::vector<double>& values) : v_(values) {}

  double scalar() { return v_[pos_++]; }
  Vec3 vec3() {
    Vec3 out(v_[pos_], v_[pos_ + 1], v_[pos_ + 2]);
    pos_ += 3;
    return out;
  }
  Vec4 vec4() {
    Vec4 out(v_[pos_], v_[pos_ + 1], v_[pos_ + 2], v_[pos_ + 3]);
    pos_ += 4;
    return out;
  }

 private:
  const std::vector<double>& v_;
  std::size_t pos_ = 0;
};

std::vector<double> flatten(const LogRecord& r) {
  std::vector<double> values;
  values.reserve(kLoadColumns + kVehicleColumns * r.vehicles.size());
  Row row(values);
  row.put(r.t);
  row.put(r.load_position);
  row.put(r.load_velocity);
  row.put(r.ref_position);
  row.put(r.ref_velocity);
  row.put(r.ref_acceleration);
  row.put(r.load_error);
  for (const VehicleRecord& v : r.vehicles) {
    row.put(v.position);
    row.put(v.velocity);
    row.put(v.attitude);
    row.put(v.body_rate);
    row.put(v.thrust);
    row.put(v.torque);
    row.put(v.tension);
    row.put(v.direction);
    row.put(v.tension_desired);
    row.put(v.position_desired);
    row.put(v.velocity_desired);
    row.put(v.attitude_desired);
    row.put(v.rate_desired);
    row.put(v.direction_desired);
    row.put(v.thrust_desired);
    row.put(v.zeta);
    row.put(v.zeta_L);
    row.put(v.slack ? 1.0 : 0.0);
  }
  return values;
}

LogRecord unflatten(const std::vector<double>& values, int n) {
  Cursor c(values);
  LogRecord r;
  r.t = c.scalar();
  r.load_position = c.vec3();
  r.load_velocity = c.vec3();
  r.ref_position = c.vec3();
  r.ref_velocity = c.vec3();
  r.ref_acceleration = c.vec3();
  r.load_error = c.vec3();
  r.vehicles.resize(n);
  for (VehicleRecord& v : r.vehicles) {
    v.position = c.vec3();
    v.velocity = c.vec3();
    v.attitude = c.vec4();
    v.body_rate = c.vec3();
    v.thrust = c.scalar();
    v.torque = c.vec3();
    v.tension = c.scalar();
    v.direction = c.vec3();
    v.tension_desired = c.vec3();
    v.position_desired = c.vec3();
    v.velocity_desired = c.vec3();
    v.attitude_desired = c.vec4();
    v.rate_desired = c.vec3();
    v.direction_desired = c.vec3();
    v.thrust_desired = c.scalar();
    v.zeta = c.vec3();
    v.zeta_L = c.vec3();
    v.slack = c.scalar() != 0.0;
  }
  return r;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string describe_columns(const std::vector<std::string>& cols) {
  if (cols.empty()) return "(none)";
  return cols.front() + " ... " + cols.back();
}

}  // namespace

Vec3 VehicleRecord::control_input() const {
  return thrust * (quat_to_rot(Quaternion::FromCoeffs(attitude)) * kE3);
}

double SimLog::spacing() const {
  return records.size() < 2 ? 0.0 : records[1].t - records[0].t;
}

std::vector<std::string> log_columns(int n) {
  std::vector<std::string> cols{"t"};
  add3(cols, "xL");
  add3(cols, "vL");
  add3(cols, "xLd");
  add3(cols, "vLd");
  add3(cols, "aLd");
  add3(cols, "xe");
  for (int i = 1; i <= n; ++i) {
    const std::string k = std::to_string(i);
    add3(cols, "x" + k);
    add3(cols, "v" + k);
    add4(cols, "q" + k);
    add3(cols, "w" + k);
    cols.push_back("f" + k);
    add3(cols, "tau" + k);
    cols.push_back("T" + k);
    add3(cols, "alpha" + k);
    add3(cols, "Tdalphad" + k);
    add3(cols, "xd" + k);
    add3(cols, "vd" + k);
    add4(cols, "qd" + k);
    add3(cols, "wd" + k);
    add3(cols, "alphad" + k);
    cols.push_back("fd" + k);
    add3(cols, "zeta" + k);
    add3(cols, "zetaL" + k);
    cols.push_back("slack" + k);
  }
  return cols;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_log_csv(std::ostream& out, const SimLog& log) {
  const auto cols = log_columns(log.vehicle_count);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "," : "") << cols[i];
  }
  out << '\n';
  std::string line;
  for (const LogRecord& r : log.records) {
    line.clear();
    const auto values = flatten(r);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) line += ',';
      line += format_double(values[i]);
    }
    line += '\n';
    out << line;
  }
}

void write_log_csv(const std::filesystem::path& path, const SimLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_log_csv(out, log);
}

SimLog read_log_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw LogFormatError("log is empty (no header)");
  const auto header = split(line);
  const int extra = static_cast<int>(header.size()) - kLoadColumns;
  if (extra <= 0 || extra % kVehicleColumns != 0) {
    throw LogFormatError(
        "log header has " + std::to_string(header.size()) + " columns; expected " +
        std::to_string(kLoadColumns) + " + " + std::to_string(kVehicleColumns) +
        "*n (found " + describe_columns(header) + ")");
  }
  SimLog log;
  log.vehicle_count = extra / kVehicleColumns;
  const auto expected = log_columns(log.vehicle_count);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (header[i] != expected[i]) {
      throw LogFormatError("log column " + std::to_string(i + 1) + ": expected '" +
                           expected[i] + "', found '" + header[i] + "'");
    }
  }

  std::vector<double> values;
  long row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != expected.size()) {
      throw LogFormatError("log row " + std::to_string(row) + ": expected " +
                           std::to_string(expected.size()) + " columns, found " +
                           std::to_string(cells.size()));
    }
    values.assign(cells.size(), 0.0);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      const auto res = std::from_chars(c.data(), c.data() + c.size(), values[i]);
      if (res.ec != std::errc() || res.ptr != c.data() + c.size()) {
        throw LogFormatError("log row " + std::to_string(row) + ", column '" +
                             expected[i] + "': not a number: '" + c + "'");
      }
    }
    log.records.push_back(unflatten(values, log.vehicle_count));
  }
  return log;
}

SimLog read_log_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LogFormatError("cannot open log " + path.string());
  return read_log_csv(in);
}

}  // namespace slungload
