#include <catch2/catch_amalgamated.hpp>

#include "drayplan/brute_force.hpp"
#include "drayplan/milp.hpp"
#include "drayplan/model_ir.hpp"
#include "drayplan/simplex.hpp"
#include "drayplan/solution_check.hpp"
#include "test_util.hpp"

using namespace drayplan;

TEST_CASE("solve_lp: max x+y subject to x+y <= 1") {
  ModelIR ir;
  const int x = ir.add_var("x", VarKind::Continuous, 0.0, kInf);
  const int y = ir.add_var("y", VarKind::Continuous, 0.0, kInf);
  LinExpr row;
  row.add(x, 1.0);
  row.add(y, 1.0);
  ir.add_constraint("cap", row, Sense::LE, 1.0);
  LinExpr obj;
  obj.add(x, 1.0);
  obj.add(y, 1.0);
  ir.set_objective(ObjSense::Maximize, obj);

  const LPSolution sol = solve_lp(ir);
  REQUIRE(sol.status == LPStatus::Optimal);
  CHECK(sol.objective == Catch::Approx(1.0).margin(1e-9));
  CHECK(sol.values[0] + sol.values[1] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("solve_lp: infeasible pair x <= 0, x >= 1") {
  ModelIR ir;
  const int x = ir.add_var("x", VarKind::Continuous, -kInf, kInf);
  LinExpr a, b;
  a.add(x, 1.0);
  b.add(x, 1.0);
  ir.add_constraint("le0", a, Sense::LE, 0.0);
  ir.add_constraint("ge1", b, Sense::GE, 1.0);
  LinExpr obj;
  obj.add(x, 1.0);
  ir.set_objective(ObjSense::Minimize, obj);

  const LPSolution sol = solve_lp(ir);
  REQUIRE(sol.status == LPStatus::Infeasible);
  CHECK(sol.infeasibility > 0.5);
}

TEST_CASE("solve_lp: unbounded direction is reported") {
  ModelIR ir;
  const int x = ir.add_var("x", VarKind::Continuous, 0.0, kInf);
  LinExpr obj;
  obj.add(x, 1.0);
  ir.set_objective(ObjSense::Maximize, obj);
  const LPSolution sol = solve_lp(ir);
  REQUIRE(sol.status == LPStatus::Unbounded);
}

TEST_CASE("solve_lp matches the vertex-enumeration oracle on random dense LPs") {
  std::mt19937_64 rng(20240917);
  int solved = 0;
  for (int trial = 0; trial < 40 && solved < 20; ++trial) {
    const int n = testutil::uniform_int(rng, 2, 4);
    const int m = testutil::uniform_int(rng, 2, 6);
    ModelIR ir = testutil::random_lp(rng, n, m, (trial & 1) != 0);

    double oracle = 0.0;
    const bool oracle_feasible = testutil::vertex_enum_optimum(ir, oracle);
    const LPSolution sol = solve_lp(ir);
    if (!oracle_feasible) {
      CHECK(sol.status == LPStatus::Infeasible);
      continue;
    }
    REQUIRE(sol.status == LPStatus::Optimal);
    CHECK(sol.objective == Catch::Approx(oracle).margin(1e-8));
    ++solved;
  }
  REQUIRE(solved >= 20);
}

TEST_CASE("solve_lp: weak duality holds at the optimum") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    ModelIR ir = testutil::random_lp(rng, 3, 4, trial % 2 == 0);
    const LPSolution sol = solve_lp(ir);
    if (sol.status != LPStatus::Optimal) continue;
    if (ir.objective.sense == ObjSense::Maximize) {
      CHECK(sol.dual_objective >= sol.objective - 1e-6);
    } else {
      CHECK(sol.dual_objective <= sol.objective + 1e-6);
    }
    CHECK(sol.dual_objective == Catch::Approx(sol.objective).margin(1e-6));
  }
}

TEST_CASE("solve_milp: all binaries fixed by bounds reduces to solve_lp") {
  ModelIR ir;
  const int x = ir.add_var("x", VarKind::Binary, 1.0, 1.0);
  const int y = ir.add_var("y", VarKind::Continuous, 0.0, 10.0);
  LinExpr row;
  row.add(x, 3.0);
  row.add(y, 1.0);
  ir.add_constraint("r", row, Sense::LE, 7.0);
  LinExpr obj;
  obj.add(x, 1.0);
  obj.add(y, 1.0);
  ir.set_objective(ObjSense::Maximize, obj);

  const Solution milp = solve_milp(ir);
  const LPSolution lp = solve_lp(ir);
  REQUIRE(milp.status == SolveStatus::Optimal);
  REQUIRE(lp.status == LPStatus::Optimal);
  CHECK(milp.objective == Catch::Approx(lp.objective).margin(1e-9));
}

TEST_CASE("brute_force_oracle: one binary picks the best of two LPs") {
  ModelIR ir;
  const int z = ir.add_var("z", VarKind::Binary, 0.0, 1.0);
  const int y = ir.add_var("y", VarKind::Continuous, 0.0, 4.0);
  LinExpr row;
  row.add(z, 2.0);
  row.add(y, 1.0);
  ir.add_constraint("r", row, Sense::LE, 5.0);
  LinExpr obj;
  obj.add(z, 3.0);
  obj.add(y, 1.0);
  ir.set_objective(ObjSense::Maximize, obj);

  const Solution oracle = brute_force_oracle(ir);
  REQUIRE(oracle.status == SolveStatus::Optimal);
  // z=1: obj 3 + min(4, 3) = 6; z=0: obj 4.
  CHECK(oracle.objective == Catch::Approx(6.0).margin(1e-9));
  CHECK(oracle.node_count == 2);
}

TEST_CASE("brute_force_oracle: zero binaries reduces to solve_lp") {
  std::mt19937_64 rng(99);
  ModelIR ir = testutil::random_lp(rng, 3, 3, false);
  const Solution oracle = brute_force_oracle(ir);
  const LPSolution lp = solve_lp(ir);
  REQUIRE(oracle.status == SolveStatus::Optimal);
  CHECK(oracle.objective == Catch::Approx(lp.objective).margin(1e-9));
  CHECK(oracle.node_count == 1);
}

TEST_CASE("brute_force_oracle: guard on variable count") {
  ModelIR ir;
  for (int i = 0; i < 25; ++i) ir.add_var("b" + std::to_string(i), VarKind::Binary, 0.0, 1.0);
  LinExpr obj;
  obj.add(0, 1.0);
  ir.set_objective(ObjSense::Minimize, obj);
  CHECK_THROWS_AS(brute_force_oracle(ir), std::invalid_argument);
}

TEST_CASE("solve_milp agrees with the oracle on random MILPs") {
  std::mt19937_64 rng(411);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = testutil::uniform_int(rng, 2, 5);
    const int m = testutil::uniform_int(rng, 2, 5);
    const int k = testutil::uniform_int(rng, 1, std::min(n, 3));
    ModelIR ir = testutil::random_lp(rng, n, m, (trial % 2) == 0, k);

    const Solution oracle = brute_force_oracle(ir);
    const Solution milp = solve_milp(ir);
    REQUIRE(milp.status != SolveStatus::NumericalFailure);
    if (oracle.status == SolveStatus::Infeasible) {
      CHECK(milp.status == SolveStatus::Infeasible);
      continue;
    }
    REQUIRE(milp.status == SolveStatus::Optimal);
    CHECK(milp.objective == Catch::Approx(oracle.objective).margin(1e-6));
    CHECK(check_solution(ir, milp).feasible());
    ++compared;
  }
  REQUIRE(compared >= 10);
}

TEST_CASE("solve_milp determinism: identical objective, status, and values") {
  std::mt19937_64 rng(2025);
  ModelIR ir = testutil::random_lp(rng, 4, 4, true, 2);
  const Solution a = solve_milp(ir);
  const Solution b = solve_milp(ir);
  REQUIRE(a.status == b.status);
  CHECK(a.objective == b.objective);
  CHECK(a.values == b.values);
  CHECK(a.node_count == b.node_count);
}

TEST_CASE("solve_milp: incumbent bound is consistent when optimal") {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 8; ++trial) {
    ModelIR ir = testutil::random_lp(rng, 4, 4, false, 2);
    const Solution s = solve_milp(ir);
    if (s.status != SolveStatus::Optimal) continue;
    CHECK(s.gap <= 1e-6);
    CHECK(s.bound <= s.objective + 1e-7);
  }
}

TEST_CASE("check_solution finds the violated rows after a perturbation") {
  ModelIR ir;
  const int x = ir.add_var("x", VarKind::Continuous, 0.0, 10.0);
  const int y = ir.add_var("y", VarKind::Continuous, 0.0, 10.0);
  LinExpr r1, r2;
  r1.add(x, 1.0);
  r1.add(y, 1.0);
  r2.add(x, 1.0);
  ir.add_constraint("sum", r1, Sense::EQ, 5.0);
  ir.add_constraint("xcap", r2, Sense::LE, 3.0);
  LinExpr obj;
  obj.add(x, -1.0);
  ir.set_objective(ObjSense::Minimize, obj);

  std::vector<double> good{3.0, 2.0};
  CHECK(check_solution(ir, good).feasible());

  std::vector<double> bad{4.0, 1.0};  // violates only xcap
  const CheckReport rep = check_solution(ir, bad);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].tag == "xcap");
  CHECK(rep.violations[0].residual == Catch::Approx(1.0));
}

TEST_CASE("solve_milp node limit reports a flagged partial result") {
  std::mt19937_64 rng(31337);
  ModelIR ir = testutil::random_lp(rng, 6, 6, false, 4);
  SolverParams p;
  p.node_limit = 1;
  const Solution s = solve_milp(ir, p);
  CHECK((s.status == SolveStatus::NodeLimit || s.status == SolveStatus::Optimal ||
         s.status == SolveStatus::Infeasible));
}

TEST_CASE("pseudo-cost branching agrees with the oracle too") {
  std::mt19937_64 rng(909);
  SolverParams params;
  params.branching = BranchRule::PseudoCost;
  int compared = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const int n = testutil::uniform_int(rng, 3, 5);
    const int m = testutil::uniform_int(rng, 2, 5);
    ModelIR ir = testutil::random_lp(rng, n, m, (trial % 2) == 0, 2);
    const Solution oracle = brute_force_oracle(ir);
    const Solution milp = solve_milp(ir, params);
    REQUIRE(oracle.status == milp.status);
    if (oracle.status == SolveStatus::Optimal) {
      CHECK(milp.objective == Catch::Approx(oracle.objective).margin(1e-6));
      ++compared;
    }
  }
  REQUIRE(compared >= 6);
}
