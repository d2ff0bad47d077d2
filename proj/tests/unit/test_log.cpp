#include <gtest/gtest.h>

#include <sstream>

#include "slungload/error.hpp"
#include "slungload/log.hpp"
#include "support.hpp"

namespace slungload {
namespace {

using testing::Gen;

SimLog random_log(Gen& g, int n, int rows) {
  SimLog log;
  log.vehicle_count = n;
  for (int k = 0; k < rows; ++k) {
    LogRecord r;
    r.t = 1e-3 * k;
    r.load_position = g.vec3(1e3);
    r.load_velocity = g.vec3(1e-7);
    r.ref_position = g.vec3();
    r.ref_velocity = g.vec3();
    r.ref_acceleration = g.vec3();
    r.load_error = g.vec3(1e-300);
    for (int i = 0; i < n; ++i) {
      VehicleRecord v;
      v.position = g.vec3();
      v.velocity = g.vec3();
      v.attitude = g.quat().coeffs();
      v.body_rate = g.vec3();
      v.thrust = g.uniform(0, 20);
      v.torque = g.vec3();
      v.tension = g.uniform(-1, 2);
      v.direction = g.unit3();
      v.tension_desired = g.vec3();
      v.position_desired = g.vec3();
      v.velocity_desired = g.vec3();
      v.attitude_desired = g.quat().coeffs();
      v.rate_desired = g.vec3();
      v.direction_desired = g.unit3();
      v.thrust_desired = g.uniform(0, 20);
      v.zeta = g.vec3();
      v.zeta_L = g.vec3();
      v.slack = v.tension <= 0;
      r.vehicles.push_back(v);
    }
    log.records.push_back(r);
  }
  return log;
}

std::string to_csv(const SimLog& log) {
  std::ostringstream s;
  write_log_csv(s, log);
  return s.str();
}

void expect_equal(const SimLog& a, const SimLog& b) {
  ASSERT_EQ(a.vehicle_count, b.vehicle_count);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    const LogRecord &x = a.records[k], &y = b.records[k];
    EXPECT_EQ(x.t, y.t);
    EXPECT_EQ(x.load_position, y.load_position);
    EXPECT_EQ(x.load_velocity, y.load_velocity);
    EXPECT_EQ(x.load_error, y.load_error);
    EXPECT_EQ(x.ref_acceleration, y.ref_acceleration);
    for (std::size_t i = 0; i < x.vehicles.size(); ++i) {
      const VehicleRecord &u = x.vehicles[i], &v = y.vehicles[i];
      EXPECT_EQ(u.attitude, v.attitude);
      EXPECT_EQ(u.thrust, v.thrust);
      EXPECT_EQ(u.tension, v.tension);
      EXPECT_EQ(u.attitude_desired, v.attitude_desired);
      EXPECT_EQ(u.zeta_L, v.zeta_L);
      EXPECT_EQ(u.thrust_desired, v.thrust_desired);
      EXPECT_EQ(u.slack, v.slack);
    }
  }
}

TEST(LogColumns, Layout) {
  const auto cols = log_columns(3);
  EXPECT_EQ(cols.size(), 19u + 3 * 48u);
  EXPECT_EQ(cols.front(), "t");
  EXPECT_EQ(cols[1], "xL_x");
  EXPECT_EQ(cols[18], "xe_z");
  EXPECT_EQ(cols[19], "x1_x");
  EXPECT_EQ(cols[19 + 48], "x2_x");
  EXPECT_EQ(cols.back(), "slack3");
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.33333333333333331");
}

TEST(FormatDoubleProperty, ParsesBackBitIdentical) {
  Gen g(71);
  for (int k = 0; k < 10000; ++k) {
    const double x = g.uniform(-1, 1) * std::pow(10.0, g.uniform(-300, 300));
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(LogCsv, RoundTrip) {
  Gen g(72);
  for (int n : {1, 3, 5}) {
    const SimLog log = random_log(g, n, 25);
    std::istringstream in(to_csv(log));
    const SimLog back = read_log_csv(in);
    expect_equal(log, back);
    EXPECT_EQ(to_csv(back), to_csv(log));
  }
}

TEST(LogCsv, HeaderOnlyIsEmptyLog) {
  SimLog log;
  log.vehicle_count = 2;
  std::istringstream in(to_csv(log));
  const SimLog back = read_log_csv(in);
  EXPECT_EQ(back.vehicle_count, 2);
  EXPECT_TRUE(back.records.empty());
  EXPECT_EQ(back.spacing(), 0.0);
}

TEST(LogCsv, TruncatedHeaderNamesExpectedAndFound) {
  Gen g(73);
  std::string csv = to_csv(random_log(g, 3, 2));
  const auto eol = csv.find('\n');
  const auto last_comma = csv.rfind(',', eol);
  csv.erase(last_comma, eol - last_comma);
  std::istringstream in(csv);
  try {
    read_log_csv(in);
    FAIL() << "expected LogFormatError";
  } catch (const LogFormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("162 columns"), std::string::npos) << msg;
    EXPECT_NE(msg.find("expected 19 + 48*n"), std::string::npos) << msg;
  }
}

TEST(LogCsv, RaggedRowAndBadCell) {
  Gen g(74);
  const std::string csv = to_csv(random_log(g, 1, 3));
  std::string ragged = csv.substr(0, csv.size() - 1);
  ragged.erase(ragged.rfind(','));
  std::istringstream a(ragged + "\n");
  EXPECT_THROW(read_log_csv(a), LogFormatError);

  std::string bad = csv;
  bad.replace(bad.rfind(',') + 1, 1, "x");
  std::istringstream b(bad);
  try {
    read_log_csv(b);
    FAIL();
  } catch (const LogFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("slack1"), std::string::npos) << e.what();
  }

  std::string renamed = csv;
  renamed.replace(0, 1, "s");
  std::istringstream c(renamed);
  EXPECT_THROW(read_log_csv(c), LogFormatError);

  std::istringstream empty("");
  EXPECT_THROW(read_log_csv(empty), LogFormatError);
}

TEST(VehicleRecord, ControlInput) {
  VehicleRecord v;
  v.thrust = 3.0;
  EXPECT_LT((v.control_input() - Vec3(0, 0, 3)).norm(), 1e-15);
}

}  // namespace
}  // namespace slungload
