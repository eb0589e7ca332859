#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "drayplan/model_ir.hpp"
#include "drayplan/simplex.hpp"

namespace drayplan {

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, NodeLimit, TimeLimit, NumericalFailure };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NodeLimit: return "node-limit";
    case SolveStatus::TimeLimit: return "time-limit";
    case SolveStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

enum class BranchRule { MostFractional, PseudoCost };

struct SolverParams {
  double feas_tol = 1e-6;
  double int_tol = 1e-6;
  double rel_gap = 1e-6;
  double abs_gap = 0.0;  // absolute counterpart; a node within either gap is pruned
  long node_limit = 1'000'000;
  double time_limit_s = 0.0;  // 0: no limit
  BranchRule branching = BranchRule::MostFractional;
  int heuristic_every = 64;  // rounding-heuristic cadence in nodes; 0 disables
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  std::vector<double> values;
  double objective = 0.0;
  double bound = 0.0;     // proven bound in the model's own sense
  double gap = 0.0;       // |objective - bound| / max(1, |objective|)
  long node_count = 0;
  double wall_time_s = 0.0;

  bool has_incumbent() const {
    return status == SolveStatus::Optimal || status == SolveStatus::Feasible ||
           status == SolveStatus::NodeLimit || status == SolveStatus::TimeLimit;
  }
};

namespace detail {

struct BBNode {
  long id = 0;
  double bound = 0.0;  // canonical (minimization) LP bound of this node
  std::vector<BoundOverride> overrides;
  std::vector<double> lp_values;
};

struct NodeOrder {
  bool operator()(const BBNode& a, const BBNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // best bound first
    return a.id > b.id;                                // ties by node id
  }
};

inline double frac_distance(double v) { return std::abs(v - std::round(v)); }

}  // namespace detail

/// Best-bound branch and bound over the LP relaxation. Deterministic for a
/// given model and parameter set: node ids break every tie. Each node's LP
/// is solved once, when the node is created.
inline Solution solve_milp(const ModelIR& ir, const SolverParams& params = {}) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

  const bool maximize = ir.objective.sense == ObjSense::Maximize;
  auto canonical = [&](double obj) { return maximize ? -obj : obj; };

  Solution out;
  SimplexOptions lp_opt;
  lp_opt.feas_tol = std::min(params.feas_tol, 1e-7);

  std::vector<int> int_vars;
  for (const auto& v : ir.variables) {
    if (v.is_integral() && v.lower < v.upper) int_vars.push_back(v.index);
  }

  std::vector<double> pc_up(ir.variables.size(), 0.0), pc_down(ir.variables.size(), 0.0);
  std::vector<int> pc_up_n(ir.variables.size(), 0), pc_down_n(ir.variables.size(), 0);

  bool have_incumbent = false;
  double incumbent_canon = kInf;
  std::vector<double> incumbent_values;
  bool numerical_trouble = false;

  auto is_integral = [&](const std::vector<double>& x) {
    for (int v : int_vars) {
      if (detail::frac_distance(x[static_cast<size_t>(v)]) > params.int_tol) return false;
    }
    return true;
  };

  auto offer_incumbent = [&](double canon, const std::vector<double>& x) {
    if (have_incumbent && canon >= incumbent_canon - 1e-12) return;
    std::vector<double> snapped = x;
    for (int v : int_vars) {
      double& xv = snapped[static_cast<size_t>(v)];
      xv = std::round(xv);
      // Snapping past a fractional bound would fabricate an infeasible point.
      if (xv < ir.variables[static_cast<size_t>(v)].lower - 1e-9 ||
          xv > ir.variables[static_cast<size_t>(v)].upper + 1e-9) {
        return;
      }
    }
    have_incumbent = true;
    incumbent_canon = canon;
    incumbent_values = std::move(snapped);
  };

  auto within_gap = [&](double bound_canon) {
    if (!have_incumbent) return false;
    const double diff = incumbent_canon - bound_canon;
    return diff <= params.rel_gap * std::max(1.0, std::abs(incumbent_canon)) ||
           diff <= params.abs_gap;
  };

  // Rounding heuristic: fix every integral variable at the nearest integer
  // of an LP point and solve the continuous rest. Cheap incumbents prune the
  // best-bound search early.
  auto try_rounding = [&](const std::vector<double>& lp_values) {
    if (int_vars.empty()) return;
    std::vector<BoundOverride> fix;
    fix.reserve(int_vars.size());
    for (int v : int_vars) {
      // Clamp into the integer lattice of the bounds, not the raw bounds.
      const double int_lo = std::ceil(ir.variables[static_cast<size_t>(v)].lower - 1e-9);
      const double int_hi = std::floor(ir.variables[static_cast<size_t>(v)].upper + 1e-9);
      if (int_lo > int_hi) return;  // no integer point at all
      const double r =
          std::min(std::max(std::round(lp_values[static_cast<size_t>(v)]), int_lo), int_hi);
      fix.push_back({v, r, r});
    }
    const LPSolution lp = solve_lp(ir, lp_opt, &fix);
    if (lp.status == LPStatus::Optimal) offer_incumbent(canonical(lp.objective), lp.values);
  };

  std::priority_queue<detail::BBNode, std::vector<detail::BBNode>, detail::NodeOrder> queue;
  long next_id = 0;

  // Evaluates a node: solves the LP, classifies, pushes it if it must branch.
  // Returns false when the whole solve must abort on a numerical failure.
  auto evaluate_and_enqueue = [&](std::vector<BoundOverride>&& overrides) {
    out.node_count++;
    LPSolution lp = solve_lp(ir, lp_opt, overrides.empty() ? nullptr : &overrides);
    if (lp.status == LPStatus::Infeasible) return true;
    if (lp.status == LPStatus::Unbounded) {
      // Only possible at the root of a bounded-variable model family.
      out.status = SolveStatus::Unbounded;
      return false;
    }
    if (lp.status != LPStatus::Optimal) {
      numerical_trouble = true;
      return false;
    }
    const double canon = canonical(lp.objective);
    if (is_integral(lp.values)) {
      offer_incumbent(canon, lp.values);
      return true;
    }
    if (params.heuristic_every > 0 &&
        (out.node_count == 1 || out.node_count % params.heuristic_every == 0)) {
      try_rounding(lp.values);
    }
    if (within_gap(canon)) return true;  // pruned
    detail::BBNode node;
    node.id = next_id++;
    node.bound = canon;
    node.overrides = std::move(overrides);
    node.lp_values = std::move(lp.values);
    queue.push(std::move(node));
    return true;
  };

  auto select_branch_var = [&](const std::vector<double>& x) {
    int best = -1;
    double best_score = -1.0;
    for (int v : int_vars) {
      const double frac = detail::frac_distance(x[static_cast<size_t>(v)]);
      if (frac <= params.int_tol) continue;
      double score;
      if (params.branching == BranchRule::PseudoCost &&
          (pc_up_n[static_cast<size_t>(v)] > 0 || pc_down_n[static_cast<size_t>(v)] > 0)) {
        const double up = pc_up_n[static_cast<size_t>(v)] > 0
                              ? pc_up[static_cast<size_t>(v)] / pc_up_n[static_cast<size_t>(v)]
                              : 1e-6;
        const double dn = pc_down_n[static_cast<size_t>(v)] > 0
                              ? pc_down[static_cast<size_t>(v)] / pc_down_n[static_cast<size_t>(v)]
                              : 1e-6;
        const double xv = x[static_cast<size_t>(v)];
        const double f = xv - std::floor(xv);
        score = std::max(up * (1.0 - f), 1e-9) * std::max(dn * f, 1e-9);
      } else {
        score = std::min(frac, 1.0 - frac);
      }
      if (score > best_score + 1e-15) {
        best_score = score;
        best = v;
      }
    }
    return best;
  };

  SolveStatus exit_status = SolveStatus::Optimal;
  double best_open_bound = kInf;
  double proven_bound = kInf;  // set when the loop stops on a proven gap

  if (!evaluate_and_enqueue({})) {
    out.wall_time_s = elapsed();
    if (out.status == SolveStatus::Unbounded) return out;
    out.status = SolveStatus::NumericalFailure;
    return out;
  }

  while (!queue.empty()) {
    if (params.node_limit > 0 && out.node_count >= params.node_limit) {
      exit_status = SolveStatus::NodeLimit;
      break;
    }
    if (params.time_limit_s > 0.0 && elapsed() > params.time_limit_s) {
      exit_status = SolveStatus::TimeLimit;
      break;
    }
    detail::BBNode node = std::move(const_cast<detail::BBNode&>(queue.top()));
    queue.pop();
    if (within_gap(node.bound)) {
      // Best-bound order: every remaining node is proven within the gap.
      proven_bound = node.bound;
      while (!queue.empty()) queue.pop();
      break;
    }

    const int bv = select_branch_var(node.lp_values);
    if (bv < 0) {
      offer_incumbent(node.bound, node.lp_values);
      continue;
    }
    const double x = node.lp_values[static_cast<size_t>(bv)];
    const double fl = std::floor(x);
    const double f = x - fl;

    double lo = ir.variables[static_cast<size_t>(bv)].lower;
    double hi = ir.variables[static_cast<size_t>(bv)].upper;
    for (const auto& o : node.overrides) {
      if (o.var == bv) {
        lo = o.lower;
        hi = o.upper;
      }
    }

    const long nodes_before = out.node_count;
    bool ok = true;
    for (int side = 0; side < 2 && ok; ++side) {
      const double new_lo = side == 0 ? lo : fl + 1.0;
      const double new_hi = side == 0 ? fl : hi;
      if (new_lo > new_hi) continue;
      std::vector<BoundOverride> child = node.overrides;
      bool replaced = false;
      for (auto& o : child) {
        if (o.var == bv) {
          o.lower = new_lo;
          o.upper = new_hi;
          replaced = true;
        }
      }
      if (!replaced) child.push_back({bv, new_lo, new_hi});
      ok = evaluate_and_enqueue(std::move(child));
      // Pseudo-cost bookkeeping from the freshest queue entry when it exists.
      if (ok && out.node_count > nodes_before && !queue.empty()) {
        const detail::BBNode& top = queue.top();
        if (top.id == next_id - 1) {
          const double degrade = top.bound - node.bound;
          if (side == 0) {
            pc_down[static_cast<size_t>(bv)] += degrade / std::max(f, 1e-9);
            pc_down_n[static_cast<size_t>(bv)]++;
          } else {
            pc_up[static_cast<size_t>(bv)] += degrade / std::max(1.0 - f, 1e-9);
            pc_up_n[static_cast<size_t>(bv)]++;
          }
        }
      }
    }
    if (!ok) {
      if (out.status == SolveStatus::Unbounded) {
        out.wall_time_s = elapsed();
        return out;
      }
      exit_status = SolveStatus::NumericalFailure;
      break;
    }
  }

  if (!queue.empty()) {
    best_open_bound = queue.top().bound;
  } else if (std::isfinite(proven_bound)) {
    best_open_bound = proven_bound;
  } else if (have_incumbent) {
    best_open_bound = incumbent_canon;
  }
  if (numerical_trouble && exit_status == SolveStatus::Optimal) {
    exit_status = SolveStatus::NumericalFailure;
  }

  out.wall_time_s = elapsed();
  if (have_incumbent) {
    // Re-solve the restriction at the incumbent's integer assignment so the
    // reported objective comes from one clean LP.
    std::vector<BoundOverride> fix;
    fix.reserve(int_vars.size());
    for (int v : int_vars) {
      const double val = incumbent_values[static_cast<size_t>(v)];
      fix.push_back({v, val, val});
    }
    LPSolution polished = solve_lp(ir, lp_opt, &fix);
    if (polished.status == LPStatus::Optimal) {
      incumbent_values = polished.values;
      for (int v : int_vars) {
        incumbent_values[static_cast<size_t>(v)] =
            std::round(incumbent_values[static_cast<size_t>(v)]);
      }
      incumbent_canon = std::min(incumbent_canon, canonical(polished.objective));
    }
    const double bound_canon = std::min(best_open_bound, incumbent_canon);
    out.values = incumbent_values;
    out.objective = maximize ? -incumbent_canon : incumbent_canon;
    out.bound = maximize ? -bound_canon : bound_canon;
    out.gap = std::abs(incumbent_canon - bound_canon) / std::max(1.0, std::abs(incumbent_canon));
    out.status = exit_status == SolveStatus::Optimal ? SolveStatus::Optimal : exit_status;
  } else {
    if (exit_status == SolveStatus::Optimal) {
      out.status = SolveStatus::Infeasible;  // queue exhausted, nothing feasible
    } else {
      out.status = exit_status;
      out.bound = maximize ? -best_open_bound : best_open_bound;
      out.gap = kInf;
    }
  }
  return out;
}

}  // namespace drayplan
