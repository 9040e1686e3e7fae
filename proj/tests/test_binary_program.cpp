#include <catch2/catch_amalgamated.hpp>

#include "cachecast/binary_program.hpp"

using namespace cachecast;

namespace {

// Three sets over three elements; each element is covered by exactly two sets.
LinearProgram cover_program(double cost_a, double cost_b, double cost_c) {
  LinearProgram lp;
  const int a = lp.add_variable(0.0, 1.0, "a");
  const int b = lp.add_variable(0.0, 1.0, "b");
  const int c = lp.add_variable(0.0, 1.0, "c");
  lp.set_objective({{a, cost_a}, {b, cost_b}, {c, cost_c}});
  lp.add_constraint({{a, 1.0}, {c, 1.0}}, LinearProgram::Sense::GE, 1.0);
  lp.add_constraint({{a, 1.0}, {b, 1.0}}, LinearProgram::Sense::GE, 1.0);
  lp.add_constraint({{b, 1.0}, {c, 1.0}}, LinearProgram::Sense::GE, 1.0);
  return lp;
}

}  // namespace

TEST_CASE("binary search closes the gap left by a fractional relaxation") {
  LinearProgram lp;
  const int x1 = lp.add_variable(0.0, 1.0);
  const int x2 = lp.add_variable(0.0, 1.0);
  lp.set_objective({{x1, 1.0}, {x2, 1.0}});
  lp.add_constraint({{x1, 2.0}, {x2, 2.0}}, LinearProgram::Sense::GE, 3.0);

  const LpSolution relaxed = optimize(lp);
  REQUIRE(relaxed.status == LpSolution::Status::Optimal);
  CHECK(relaxed.objective == Catch::Approx(1.5).margin(1e-6));

  const BinarySolution sol = solve_binary_min(lp, {x1, x2});
  REQUIRE(sol.status == BinarySolution::Status::Optimal);
  CHECK(sol.objective == Catch::Approx(2.0).margin(1e-5));
  CHECK(sol.x[x1] == Catch::Approx(1.0).margin(1e-6));
  CHECK(sol.x[x2] == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("weighted covering picks the unique cheapest pair") {
  const LinearProgram lp = cover_program(1.0, 2.0, 3.0);
  const BinarySolution sol = solve_binary_min(lp, {0, 1, 2});
  REQUIRE(sol.status == BinarySolution::Status::Optimal);
  CHECK(sol.objective == Catch::Approx(3.0).margin(1e-5));
  CHECK(sol.x[0] == Catch::Approx(1.0).margin(1e-6));
  CHECK(sol.x[1] == Catch::Approx(1.0).margin(1e-6));
  CHECK(sol.x[2] == Catch::Approx(0.0).margin(1e-6));
  CHECK(sol.nodes >= 1);
}

TEST_CASE("uniform covering still needs two sets") {
  const LinearProgram lp = cover_program(1.0, 1.0, 1.0);
  const BinarySolution sol = solve_binary_min(lp, {0, 1, 2});
  REQUIRE(sol.status == BinarySolution::Status::Optimal);
  CHECK(sol.objective == Catch::Approx(2.0).margin(1e-5));
  double picked = sol.x[0] + sol.x[1] + sol.x[2];
  CHECK(picked == Catch::Approx(2.0).margin(1e-5));
}

TEST_CASE("an unsatisfiable demand is reported infeasible") {
  LinearProgram lp;
  const int x1 = lp.add_variable(0.0, 1.0);
  const int x2 = lp.add_variable(0.0, 1.0);
  lp.set_objective({{x1, 1.0}, {x2, 1.0}});
  lp.add_constraint({{x1, 1.0}, {x2, 1.0}}, LinearProgram::Sense::GE, 3.0);
  const BinarySolution sol = solve_binary_min(lp, {x1, x2});
  CHECK(sol.status == BinarySolution::Status::Infeasible);
}

TEST_CASE("a tiny node budget abandons the search") {
  LinearProgram lp;
  const int x1 = lp.add_variable(0.0, 1.0);
  const int x2 = lp.add_variable(0.0, 1.0);
  lp.set_objective({{x1, 1.0}, {x2, 1.0}});
  lp.add_constraint({{x1, 2.0}, {x2, 2.0}}, LinearProgram::Sense::GE, 3.0);
  BinarySolveConfig cfg;
  cfg.node_budget = 1;
  const BinarySolution sol = solve_binary_min(lp, {x1, x2}, cfg);
  CHECK(sol.status == BinarySolution::Status::Abandoned);
}

TEST_CASE("continuous variables ride along with the binaries") {
  LinearProgram lp;
  const int pick = lp.add_variable(0.0, 1.0);
  const int flow = lp.add_variable();
  lp.set_objective({{pick, 10.0}, {flow, 1.0}});
  // flow >= 5 - 4*pick: paying for the binary reduces the required flow.
  lp.add_constraint({{flow, 1.0}, {pick, 4.0}}, LinearProgram::Sense::GE, 5.0);
  const BinarySolution sol = solve_binary_min(lp, {pick});
  REQUIRE(sol.status == BinarySolution::Status::Optimal);
  // pick=0 costs 5, pick=1 costs 10+1=11.
  CHECK(sol.objective == Catch::Approx(5.0).margin(1e-5));
  CHECK(sol.x[pick] == Catch::Approx(0.0).margin(1e-6));
  CHECK(sol.x[flow] == Catch::Approx(5.0).margin(1e-5));
}

TEST_CASE("already integral relaxations return without branching") {
  LinearProgram lp;
  const int x = lp.add_variable(0.0, 1.0);
  lp.set_objective({{x, 1.0}});
  lp.add_constraint({{x, 1.0}}, LinearProgram::Sense::GE, 1.0);
  const BinarySolution sol = solve_binary_min(lp, {x});
  REQUIRE(sol.status == BinarySolution::Status::Optimal);
  CHECK(sol.objective == Catch::Approx(1.0).margin(1e-6));
  CHECK(sol.nodes == 1);
}

