#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "drayplan/milp.hpp"
#include "drayplan/model_ir.hpp"
#include "drayplan/simplex.hpp"

namespace drayplan {

/// Exhaustive verification oracle: enumerates every assignment of the
/// integral variables and solves the continuous restriction for each,
/// keeping the best feasible one. Deterministic: assignments are visited
/// in odometer order over the variable index order, and the first best
/// objective wins ties.
///
/// Guarded: at most 24 integral variables and at most 2^24 assignments.
/// Assignments that already violate a constraint involving only integral
/// variables are discarded without an LP solve.
inline Solution brute_force_oracle(const ModelIR& ir, double feas_tol = 1e-7) {
  const bool maximize = ir.objective.sense == ObjSense::Maximize;
  auto canonical = [&](double obj) { return maximize ? -obj : obj; };

  struct Dim {
    int var;
    double lo;
    int count;  // domain size
  };
  std::vector<Dim> dims;
  double total = 1.0;
  for (const auto& v : ir.variables) {
    if (!v.is_integral() || v.lower >= v.upper) continue;
    const double lo = std::ceil(v.lower - 1e-9);
    const double hi = std::floor(v.upper + 1e-9);
    if (lo > hi) continue;  // empty integral domain; the restriction is infeasible
    dims.push_back({v.index, lo, static_cast<int>(hi - lo) + 1});
    total *= dims.back().count;
  }
  if (dims.size() > 24) {
    throw std::invalid_argument("brute_force_oracle: more than 24 integral variables");
  }
  if (total > double(1 << 24)) {
    throw std::invalid_argument("brute_force_oracle: more than 2^24 assignments");
  }

  // Constraints whose variables are all enumerated can be checked without
  // the LP. Fixed integral variables contribute a constant.
  std::vector<int> var_dim(ir.variables.size(), -1);
  for (size_t d = 0; d < dims.size(); ++d) var_dim[static_cast<size_t>(dims[d].var)] = static_cast<int>(d);
  struct IntRow {
    const LinConstraint* c;
    double fixed = 0.0;  // contribution of fixed variables
  };
  std::vector<IntRow> int_rows;
  for (const auto& c : ir.constraints) {
    bool pure = true;
    double fixed = 0.0;
    for (const auto& t : c.terms) {
      const auto& v = ir.variables[static_cast<size_t>(t.var)];
      if (var_dim[static_cast<size_t>(t.var)] >= 0) continue;
      if (v.is_fixed()) {
        fixed += t.coeff * v.lower;
        continue;
      }
      pure = false;
      break;
    }
    if (pure) int_rows.push_back({&c, fixed});
  }

  Solution best;
  best.status = SolveStatus::Infeasible;
  double best_canon = kInf;

  SimplexOptions lp_opt;
  lp_opt.feas_tol = feas_tol;

  std::vector<int> odometer(dims.size(), 0);
  std::vector<double> assignment(dims.size(), 0.0);
  std::vector<BoundOverride> fix(dims.size());

  long count = 0;
  while (true) {
    ++count;
    for (size_t d = 0; d < dims.size(); ++d) {
      assignment[d] = dims[d].lo + odometer[d];
      fix[d] = {dims[d].var, assignment[d], assignment[d]};
    }

    bool logic_ok = true;
    for (const auto& row : int_rows) {
      double a = row.fixed;
      for (const auto& t : row.c->terms) {
        const int d = var_dim[static_cast<size_t>(t.var)];
        if (d >= 0) a += t.coeff * assignment[static_cast<size_t>(d)];
      }
      switch (row.c->sense) {
        case Sense::LE: logic_ok = a <= row.c->rhs + feas_tol; break;
        case Sense::GE: logic_ok = a >= row.c->rhs - feas_tol; break;
        case Sense::EQ: logic_ok = std::abs(a - row.c->rhs) <= feas_tol; break;
      }
      if (!logic_ok) break;
    }

    if (logic_ok) {
      LPSolution lp = solve_lp(ir, lp_opt, fix.empty() ? nullptr : &fix);
      if (lp.status == LPStatus::Optimal) {
        const double canon = canonical(lp.objective);
        if (canon < best_canon - 1e-12) {
          best_canon = canon;
          best.status = SolveStatus::Optimal;
          best.values = lp.values;
          for (size_t d = 0; d < dims.size(); ++d) {
            best.values[static_cast<size_t>(dims[d].var)] = assignment[d];
          }
          best.objective = lp.objective;
        }
      }
    }

    // Advance the odometer; a full carry means every assignment was visited.
    size_t d = 0;
    for (; d < dims.size(); ++d) {
      if (++odometer[d] < dims[d].count) break;
      odometer[d] = 0;
    }
    if (d == dims.size()) break;
  }

  best.node_count = count;
  if (best.status == SolveStatus::Optimal) {
    best.bound = best.objective;
    best.gap = 0.0;
  }
  return best;
}

}  // namespace drayplan
