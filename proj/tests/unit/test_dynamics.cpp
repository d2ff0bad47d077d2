#include <gtest/gtest.h>

#include <numbers>

#include "../common/oracles.hpp"
#include "slungload/controller.hpp"
#include "slungload/dynamics.hpp"
#include "slungload/error.hpp"
#include "slungload/scenario.hpp"
#include "support.hpp"

namespace slungload {
namespace {

using std::numbers::pi;
using testing::Gen;

SystemParams three_vehicles() {
  SystemParams p;
  p.vehicles.assign(3, VehicleParams{});
  return p;
}

SystemState single(const Vec3& vehicle, const Vec3& load = Vec3::Zero()) {
  SystemState s;
  s.load_position = load;
  VehicleState v;
  v.position = vehicle;
  s.vehicles = {v};
  return s;
}

SystemParams one_vehicle() {
  SystemParams p;
  p.vehicles = {VehicleParams{}};
  return p;
}

TEST(CableDirections, Examples) {
  const SystemParams p = one_vehicle();
  EXPECT_LT((cable_directions(single(kE3), p)[0] + kE3).norm(), 1e-15);
  EXPECT_LT((cable_directions(single(Vec3(1, 0, 0)), p)[0] - Vec3(-1, 0, 0)).norm(), 1e-15);

  const SystemParams p3 = three_vehicles();
  const SystemState s = paper_initial_conditions(p3);
  const Mat3 R = basic_rotation(Axis::kZ, -pi / 4) * basic_rotation(Axis::kY, -pi / 6);
  EXPECT_LT((cable_directions(s, p3)[0] + R * kE3).norm(), 1e-15);
}

TEST(CableDirections, CoincidentVehicleThrows) {
  EXPECT_THROW(cable_directions(single(Vec3::Zero()), one_vehicle()), DynamicsError);
}

TEST(SolveTensions, SingleVehicleStaticHover) {
  const SystemParams p = one_vehicle();
  const double f = (p.vehicles[0].mass + p.load_mass) * p.gravity;
  const TensionSolution t = solve_tensions(single(kE3), {f * kE3}, p);
  EXPECT_NEAR(t.tensions[0], p.load_mass * p.gravity, 1e-12);
  EXPECT_FALSE(t.slack);
}

TEST(SolveTensions, FreeFallHasZeroTension) {
  const SystemParams p = three_vehicles();
  const SystemState s = paper_initial_conditions(p);
  const TensionSolution t = solve_tensions(s, std::vector<Vec3>(3, Vec3::Zero()), p);
  for (double T : t.tensions) EXPECT_NEAR(T, 0.0, 1e-12);
}

TEST(SolveTensions, SymmetricHoverTension) {
  const SystemParams p = three_vehicles();
  const HoverEquilibrium eq = symmetric_hover_equilibrium(p, pi / 6);
  std::vector<Vec3> thrust;
  for (int i = 0; i < 3; ++i) {
    thrust.push_back(p.vehicles[i].mass * p.gravity * kE3 - eq.tension_vectors[i]);
  }
  const TensionSolution t = solve_tensions(eq.state, thrust, p);
  const double oracle = oracles::symmetric_tension(0.225, 9.81, 3, pi / 6);
  for (double T : t.tensions) {
    EXPECT_NEAR(T, oracle, 1e-12);
    EXPECT_NEAR(T, 0.8497, 5e-4);
  }
}

TEST(SolveTensions, NegativeTensionIsFlaggedSlack) {
  const SystemParams p = one_vehicle();
  // thrust pulling the vehicle up harder than the load can follow in free
  // fall would need compression: push the vehicle down instead
  const TensionSolution t = solve_tensions(single(kE3), {-10.0 * kE3}, p);
  EXPECT_LT(t.tensions[0], 0.0);
  EXPECT_TRUE(t.slack);
}

TEST(SolveTensions, IllConditionedSystemThrows) {
  SystemParams p;
  p.load_mass = 1e-14;
  p.vehicles.assign(2, VehicleParams{});
  SystemState s;
  VehicleState v;
  v.position = kE3;
  s.vehicles = {v, v};
  EXPECT_THROW(solve_tensions(s, {Vec3::Zero(), Vec3::Zero()}, p), DynamicsError);
}

TEST(SolveTensionsProperty, ConstraintMatrixPositiveDefinite) {
  Gen g(21);
  for (int k = 0; k < 300; ++k) {
    SystemParams p;
    p.load_mass = g.uniform(0.05, 2.0);
    const int n = 1 + k % 5;
    SystemState s;
    for (int i = 0; i < n; ++i) {
      VehicleParams vp;
      vp.mass = g.uniform(0.2, 3.0);
      vp.cable_length = g.uniform(0.5, 2.0);
      p.vehicles.push_back(vp);
      VehicleState v;
      Vec3 up = g.unit3();
      up.z() = std::abs(up.z()) + 0.2;
      v.position = vp.cable_length * up.normalized();
      v.velocity = g.vec3();
      s.vehicles.push_back(v);
    }
    std::vector<Vec3> thrust;
    for (int i = 0; i < n; ++i) thrust.push_back(g.vec3(20.0));
    const TensionSolution t = solve_tensions(s, thrust, p);
    EXPECT_GT(t.min_eigenvalue, 0.0);
  }
}

TEST(SystemDerivative, ZeroThrustFreeFall) {
  const SystemParams p = three_vehicles();
  const SystemState s = paper_initial_conditions(p);
  const SystemStateDerivative d = system_derivative(s, PlantInputs::Zero(3), p);
  EXPECT_LT((d.load_acceleration + p.gravity * kE3).norm(), 1e-12);
  for (const VehicleDerivative& v : d.vehicles) {
    EXPECT_LT((v.acceleration + p.gravity * kE3).norm(), 1e-12);
  }
}

TEST(SystemDerivative, SpinAboutPrincipalAxis) {
  const SystemParams p = one_vehicle();
  SystemState s = single(kE3);
  s.vehicles[0].body_rate = Vec3(0, 0, 5.0);
  const SystemStateDerivative d = system_derivative(s, PlantInputs::Zero(1), p);
  EXPECT_LT(d.vehicles[0].angular_acceleration.norm(), 1e-12);
}

TEST(SystemDerivative, HoverEquilibriumIsStatic) {
  const SystemParams p = three_vehicles();
  const HoverEquilibrium eq = symmetric_hover_equilibrium(p, pi / 6);
  PlantInputs in = PlantInputs::Zero(3);
  for (int i = 0; i < 3; ++i) {
    in.thrust[i] = (p.vehicles[i].mass * p.gravity * kE3 - eq.tension_vectors[i]).norm();
  }
  const SystemStateDerivative d = system_derivative(eq.state, in, p);
  EXPECT_LT(d.load_acceleration.norm(), 1e-9);
  for (const VehicleDerivative& v : d.vehicles) {
    EXPECT_LT(v.acceleration.norm(), 1e-9);
    EXPECT_LT(v.angular_acceleration.norm(), 1e-9);
  }
}

TEST(Rk4, EquilibriumIsFixedPoint) {
  const SystemParams p = three_vehicles();
  const HoverEquilibrium eq = symmetric_hover_equilibrium(p, pi / 6);
  PlantInputs in = PlantInputs::Zero(3);
  for (int i = 0; i < 3; ++i) {
    in.thrust[i] = (p.vehicles[i].mass * p.gravity * kE3 - eq.tension_vectors[i]).norm();
  }
  for (double dt : {1e-4, 5e-4, 1e-3}) {
    const SystemState next = rk4_step(eq.state, in, dt, p);
    EXPECT_LT((oracles::flatten(next) - oracles::flatten(eq.state)).norm(), 1e-12) << dt;
  }
}

TEST(Rk4, FreeFallMatchesClosedForm) {
  const SystemParams p = one_vehicle();
  const SystemState end = oracles::integrate(single(kE3), p, 1e-3, 1.0);
  EXPECT_NEAR(end.load_position.z(), -0.5 * p.gravity, 1e-9);
  EXPECT_NEAR(end.vehicles[0].position.z(), 1.0 - 0.5 * p.gravity, 1e-9);
}

TEST(Rk4, FourthOrderConvergence) {
  const double t_end = 1.0;
  const SystemState ref = oracles::integrate(oracles::ballistic_state(),
                                             oracles::ballistic_params(), 1e-5, t_end);
  const double e1 = oracles::ballistic_error(0.01, ref, t_end);
  const double e2 = oracles::ballistic_error(0.005, ref, t_end);
  EXPECT_GT(e1 / e2, 14.0);
  EXPECT_LT(e1 / e2, 18.0);
}

TEST(Rk4, ConstraintViolationIsDivergence) {
  const SystemParams p = one_vehicle();
  EXPECT_THROW(rk4_step(single(1.01 * kE3), PlantInputs::Zero(1), 1e-3, p), DynamicsError);
}

TEST(Rk4, RejectsNonPositiveStep) {
  const SystemParams p = one_vehicle();
  EXPECT_ANY_THROW(rk4_step(single(kE3), PlantInputs::Zero(1), 0.0, p));
}

// Zero thrust: cable forces are internal, so the centre of mass falls freely
// and horizontal momentum is conserved. Random initial swings.
TEST(DynamicsProperty, CentreOfMassFallsFreely) {
  Gen g(31);
  for (int trial = 0; trial < 10; ++trial) {
    SystemParams p = three_vehicles();
    SystemState s = symmetric_initial_conditions(p, g.uniform(0.1, 1.0), g.uniform(0, 6.28));
    s.load_velocity = g.vec3(0.5);
    const auto alpha = cable_directions(s, p);
    for (int i = 0; i < 3; ++i) {
      Vec3 rel = g.vec3(0.5);
      rel -= rel.dot(alpha[i]) * alpha[i];  // keep the constraint rate at zero
      s.vehicles[i].velocity = s.load_velocity + rel;
      s.vehicles[i].body_rate = g.vec3(2.0);
    }
    const Vec3 c0 = center_of_mass(s, p);
    const Vec3 m0 = linear_momentum(s, p);
    double total = p.load_mass;
    for (const auto& v : p.vehicles) total += v.mass;
    const Vec3 v0 = m0 / total;
    const SystemState end = oracles::integrate(s, p, 1e-3, 1.0);
    const Vec3 expected = c0 + v0 - 0.5 * p.gravity * kE3;
    EXPECT_LT((center_of_mass(end, p) - expected).norm(), 1e-9);
    const Vec3 m1 = linear_momentum(end, p);
    EXPECT_LT((m1 - m0).head<2>().norm(), 1e-9);
    for (const auto& v : end.vehicles) EXPECT_NEAR(v.attitude.coeffs().norm(), 1.0, 1e-9);
    EXPECT_LT(constraint_residual(end, p), 1e-6);
  }
}

TEST(SystemParams, Validation) {
  SystemParams p = three_vehicles();
  EXPECT_NO_THROW(p.validate());
  p.vehicles[1].mass = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = three_vehicles();
  p.vehicles[2].inertia(0, 1) = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
}

}  // namespace
}  // namespace slungload
