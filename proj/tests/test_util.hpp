#pragma once

// Shared test-only helpers: deterministic RNG draws, a vertex-enumeration
// LP oracle, and random model generators. The oracle is independent of the
// simplex implementation it checks.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "drayplan/model_ir.hpp"

namespace testutil {

// Platform-stable uniform double in [lo, hi): avoids the implementation-
// defined std::uniform_real_distribution.
inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  const double u = (rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

// Enumerates every candidate vertex of the LP's feasible region by choosing
// n active hyperplanes among {constraint rows as equalities, variable bounds}
// and solving the square system. Returns true when any feasible point exists;
// best holds the optimal objective among feasible candidate points.
inline bool vertex_enum_optimum(const drayplan::ModelIR& ir, double& best) {
  using drayplan::Sense;
  const int n = ir.num_vars();
  struct Plane {
    std::vector<double> a;
    double b;
  };
  std::vector<Plane> planes;
  for (const auto& c : ir.constraints) {
    Plane p{std::vector<double>(static_cast<size_t>(n), 0.0), c.rhs};
    for (const auto& t : c.terms) p.a[static_cast<size_t>(t.var)] = t.coeff;
    planes.push_back(std::move(p));
  }
  for (const auto& v : ir.variables) {
    if (std::isfinite(v.lower)) {
      Plane p{std::vector<double>(static_cast<size_t>(n), 0.0), v.lower};
      p.a[static_cast<size_t>(v.index)] = 1.0;
      planes.push_back(std::move(p));
    }
    if (std::isfinite(v.upper) && v.upper != v.lower) {
      Plane p{std::vector<double>(static_cast<size_t>(n), 0.0), v.upper};
      p.a[static_cast<size_t>(v.index)] = 1.0;
      planes.push_back(std::move(p));
    }
  }

  const int np = static_cast<int>(planes.size());
  std::vector<int> pick(static_cast<size_t>(n), 0);
  bool found = false;
  const bool maximize = ir.objective.sense == drayplan::ObjSense::Maximize;
  best = maximize ? -drayplan::kInf : drayplan::kInf;

  auto feasible = [&](const std::vector<double>& x) {
    for (const auto& v : ir.variables) {
      const double xv = x[static_cast<size_t>(v.index)];
      if (xv < v.lower - 1e-7 || xv > v.upper + 1e-7) return false;
    }
    for (const auto& c : ir.constraints) {
      const double a = ir.constraint_activity(c, x);
      if (c.sense == Sense::LE && a > c.rhs + 1e-7) return false;
      if (c.sense == Sense::GE && a < c.rhs - 1e-7) return false;
      if (c.sense == Sense::EQ && std::abs(a - c.rhs) > 1e-7) return false;
    }
    return true;
  };

  // Iterate over all n-subsets of planes.
  std::vector<int> idx(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<size_t>(i)] = i;
  if (np < n) return false;
  while (true) {
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (int r = 0; r < n; ++r) {
      const Plane& p = planes[static_cast<size_t>(idx[static_cast<size_t>(r)])];
      for (int c2 = 0; c2 < n; ++c2) A(r, c2) = p.a[static_cast<size_t>(c2)];
      b(r) = p.b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(b);
      std::vector<double> xv(static_cast<size_t>(n));
      for (int c2 = 0; c2 < n; ++c2) xv[static_cast<size_t>(c2)] = x(c2);
      if (feasible(xv)) {
        found = true;
        const double obj = ir.objective_value(xv);
        if (maximize ? obj > best : obj < best) best = obj;
      }
    }
    // next combination
    int i = n - 1;
    while (i >= 0 && idx[static_cast<size_t>(i)] == np - n + i) --i;
    if (i < 0) break;
    ++idx[static_cast<size_t>(i)];
    for (int k = i + 1; k < n; ++k) idx[static_cast<size_t>(k)] = idx[static_cast<size_t>(k - 1)] + 1;
  }
  return found;
}

// Random bounded LP that is feasible by construction: a random interior
// point seeds the right-hand sides.
inline drayplan::ModelIR random_lp(std::mt19937_64& rng, int n, int m, bool maximize,
                                   int integer_vars = 0) {
  using namespace drayplan;
  ModelIR ir;
  std::vector<double> x0(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double ub = uniform(rng, 2.0, 10.0);
    const VarKind kind = j < integer_vars ? VarKind::Integer : VarKind::Continuous;
    ir.add_var("v" + std::to_string(j), kind, 0.0, ub);
    x0[static_cast<size_t>(j)] = uniform(rng, 0.0, ub);
  }
  for (int i = 0; i < m; ++i) {
    LinExpr e;
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = uniform(rng, -5.0, 5.0);
      e.add(j, a);
      act += a * x0[static_cast<size_t>(j)];
    }
    const bool le = (rng() & 1) != 0;
    if (le) {
      ir.add_constraint("r" + std::to_string(i), e, Sense::LE, act + uniform(rng, 0.1, 4.0));
    } else {
      ir.add_constraint("r" + std::to_string(i), e, Sense::GE, act - uniform(rng, 0.1, 4.0));
    }
  }
  LinExpr obj;
  for (int j = 0; j < n; ++j) obj.add(j, uniform(rng, -10.0, 10.0));
  obj.constant = uniform(rng, -5.0, 5.0);
  ir.set_objective(maximize ? ObjSense::Maximize : ObjSense::Minimize, obj);
  return ir;
}

}  // namespace testutil
