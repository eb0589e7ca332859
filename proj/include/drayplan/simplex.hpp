#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "drayplan/model_ir.hpp"

namespace drayplan {

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit, NumericalFailure };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
    case LPStatus::IterationLimit: return "iteration-limit";
    case LPStatus::NumericalFailure: return "numerical-failure";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::NumericalFailure;
  std::vector<double> values;   // structural variables, model order
  double objective = 0.0;       // in the model's own sense, constant included
  double dual_objective = 0.0;  // equals objective at a clean optimum
  std::vector<double> duals;    // one multiplier per constraint row
  double infeasibility = 0.0;   // phase-1 residual when infeasible
  int iterations = 0;
  std::string note;  // certificate hint (violated row set / unbounded ray var)
};

struct BoundOverride {
  int var = -1;
  double lower = 0.0;
  double upper = 0.0;
};

struct SimplexOptions {
  double feas_tol = 1e-7;
  double pivot_tol = 1e-9;
  int max_iterations = 0;           // 0: derived from model size
  int degenerate_limit = 1000;      // switch to Bland's rule after this many
  int refactor_every = 100;
};

namespace detail {

// Bounded-variable two-phase revised simplex with a dense basis inverse.
// Columns 0..n-1 are structural, n..n+m-1 slacks, n+m.. artificials.
class SimplexSolver {
 public:
  SimplexSolver(const ModelIR& ir, const SimplexOptions& opt,
                const std::vector<BoundOverride>* overrides)
      : ir_(ir), opt_(opt) {
    n_ = ir.num_vars();
    m_ = ir.num_constraints();
    build(overrides);
  }

  LPSolution solve() {
    LPSolution out;
    // Phase 1: minimize the artificial total.
    active_cost_ = &phase1_cost_;
    skip_artificials_ = false;
    LPStatus st = iterate();
    if (st != LPStatus::Optimal) {
      out.status = st == LPStatus::Unbounded ? LPStatus::NumericalFailure : st;
      out.iterations = iterations_;
      return out;
    }
    refactor();
    double art_total = 0.0;
    for (int r = 0; r < m_; ++r) {
      if (basis_[r] >= n_ + m_) art_total += std::abs(xval_[basis_[r]]);
    }
    for (int j = n_ + m_; j < total_; ++j) {
      if (!in_basis_[j]) art_total += std::abs(xval_[j]);
    }
    if (art_total > phase1_tol_) {
      // An infeasibility verdict is only trustworthy from a bound-feasible
      // basis; otherwise the run degraded numerically.
      if (max_bound_violation() > 1e-6 * (1.0 + rhs_norm_)) {
        out.status = LPStatus::NumericalFailure;
        out.iterations = iterations_;
        out.note = "phase-1 ended with out-of-bound basics";
        return out;
      }
      out.status = LPStatus::Infeasible;
      out.infeasibility = art_total;
      out.iterations = iterations_;
      out.note = "phase-1 residual " + std::to_string(art_total);
      return out;
    }
    // Pin artificials at zero and optimize the real objective.
    for (int j = n_ + m_; j < total_; ++j) {
      lb_[j] = 0.0;
      ub_[j] = 0.0;
      if (!in_basis_[j]) xval_[j] = 0.0;
    }
    active_cost_ = &cost_;
    skip_artificials_ = true;
    st = iterate();
    out.iterations = iterations_;
    if (st == LPStatus::Unbounded) {
      out.status = LPStatus::Unbounded;
      out.note = unbounded_var_ >= 0 && unbounded_var_ < n_
                     ? "unbounded ray on " + ir_.variables[static_cast<size_t>(unbounded_var_)].name
                     : "unbounded ray on slack";
      return out;
    }
    if (st != LPStatus::Optimal) {
      out.status = st;
      return out;
    }
    refactor();
    // Final accuracy check on the row residuals.
    double max_resid = 0.0;
    for (int r = 0; r < m_; ++r) {
      double act = 0.0;
      for (const auto& t : ir_.constraints[static_cast<size_t>(r)].terms) {
        act += t.coeff * xval_[t.var];
      }
      act += xval_[n_ + r];  // slack
      max_resid = std::max(max_resid, std::abs(act - rhs_[static_cast<size_t>(r)]));
    }
    const double scale = 1.0 + rhs_norm_;
    if (max_resid > 1e-5 * scale) {
      out.status = LPStatus::NumericalFailure;
      out.note = "row residual " + std::to_string(max_resid);
      return out;
    }
    if (max_bound_violation() > 1e-6 * scale) {
      out.status = LPStatus::NumericalFailure;
      out.note = "optimum has out-of-bound basics";
      return out;
    }

    out.status = LPStatus::Optimal;
    out.values.assign(xval_.begin(), xval_.begin() + n_);
    double raw = 0.0;
    for (int j = 0; j < n_; ++j) raw += cost_[static_cast<size_t>(j)] * xval_[j];
    out.objective = (ir_.objective.sense == ObjSense::Maximize ? -raw : raw) +
                    ir_.objective.constant;

    // Duals and the bound-adjusted dual objective.
    Eigen::VectorXd cb(m_);
    for (int r = 0; r < m_; ++r) cb(r) = cost_[static_cast<size_t>(basis_[r])];
    Eigen::VectorXd y = binv_.transpose() * cb;
    out.duals.resize(static_cast<size_t>(m_));
    double dual_obj = 0.0;
    for (int r = 0; r < m_; ++r) {
      out.duals[static_cast<size_t>(r)] =
          ir_.objective.sense == ObjSense::Maximize ? -y(r) : y(r);
      dual_obj += y(r) * rhs_[static_cast<size_t>(r)];
    }
    for (int j = 0; j < total_; ++j) {
      if (in_basis_[j] || lb_[j] == ub_[j]) {
        if (!in_basis_[j]) dual_obj += reduced_cost(y, j) * xval_[j];
        continue;
      }
      const double d = reduced_cost(y, j);
      if (std::isfinite(xval_[j]) && xval_[j] != 0.0) {
        dual_obj += d * xval_[j];
      }
    }
    out.dual_objective = (ir_.objective.sense == ObjSense::Maximize ? -dual_obj : dual_obj) +
                         ir_.objective.constant;
    return out;
  }

 private:
  enum class NB { AtLower, AtUpper, Free };

  void build(const std::vector<BoundOverride>* overrides) {
    total_ = n_ + 2 * m_;
    lb_.resize(static_cast<size_t>(total_));
    ub_.resize(static_cast<size_t>(total_));
    xval_.assign(static_cast<size_t>(total_), 0.0);
    nb_state_.assign(static_cast<size_t>(total_), NB::AtLower);
    in_basis_.assign(static_cast<size_t>(total_), false);
    cols_.resize(static_cast<size_t>(total_));
    cost_.assign(static_cast<size_t>(total_), 0.0);
    phase1_cost_.assign(static_cast<size_t>(total_), 0.0);
    rhs_.resize(static_cast<size_t>(m_));

    for (int j = 0; j < n_; ++j) {
      const auto& v = ir_.variables[static_cast<size_t>(j)];
      lb_[static_cast<size_t>(j)] = v.lower;
      ub_[static_cast<size_t>(j)] = v.upper;
    }
    if (overrides != nullptr) {
      for (const auto& o : *overrides) {
        lb_[static_cast<size_t>(o.var)] = o.lower;
        ub_[static_cast<size_t>(o.var)] = o.upper;
      }
    }
    const double sign = ir_.objective.sense == ObjSense::Maximize ? -1.0 : 1.0;
    for (const auto& t : ir_.objective.terms) {
      cost_[static_cast<size_t>(t.var)] += sign * t.coeff;
    }

    rhs_norm_ = 0.0;
    for (int i = 0; i < m_; ++i) {
      const auto& c = ir_.constraints[static_cast<size_t>(i)];
      for (const auto& t : c.terms) {
        cols_[static_cast<size_t>(t.var)].push_back({i, t.coeff});
      }
      const int slack = n_ + i;
      cols_[static_cast<size_t>(slack)].push_back({i, 1.0});
      switch (c.sense) {
        case Sense::LE: lb_[static_cast<size_t>(slack)] = 0.0; ub_[static_cast<size_t>(slack)] = kInf; break;
        case Sense::GE: lb_[static_cast<size_t>(slack)] = -kInf; ub_[static_cast<size_t>(slack)] = 0.0; break;
        case Sense::EQ: lb_[static_cast<size_t>(slack)] = 0.0; ub_[static_cast<size_t>(slack)] = 0.0; break;
      }
      rhs_[static_cast<size_t>(i)] = c.rhs;
      rhs_norm_ = std::max(rhs_norm_, std::abs(c.rhs));
    }
    phase1_tol_ = std::max(opt_.feas_tol, 1e-9 * (1.0 + rhs_norm_));

    // Nonbasic start: nearest finite bound, zero for free columns.
    for (int j = 0; j < n_ + m_; ++j) {
      const size_t sj = static_cast<size_t>(j);
      if (std::isfinite(lb_[sj])) {
        xval_[sj] = lb_[sj];
        nb_state_[sj] = NB::AtLower;
      } else if (std::isfinite(ub_[sj])) {
        xval_[sj] = ub_[sj];
        nb_state_[sj] = NB::AtUpper;
      } else {
        xval_[sj] = 0.0;
        nb_state_[sj] = NB::Free;
      }
    }

    // Artificial columns form the starting basis. Their signs absorb the
    // residual of the nonbasic starting point so the basis starts feasible.
    basis_.resize(static_cast<size_t>(m_));
    binv_ = Eigen::MatrixXd::Zero(m_, m_);
    residual_scratch_.assign(rhs_.begin(), rhs_.end());
    for (int j = 0; j < n_ + m_; ++j) {
      const double xv = xval_[static_cast<size_t>(j)];
      if (xv == 0.0) continue;
      for (const auto& e : cols_[static_cast<size_t>(j)]) {
        residual_scratch_[static_cast<size_t>(e.row)] -= e.coeff * xv;
      }
    }
    for (int i = 0; i < m_; ++i) {
      const int art = n_ + m_ + i;
      const double resid = residual_scratch_[static_cast<size_t>(i)];
      const double sigma = resid >= 0.0 ? 1.0 : -1.0;
      cols_[static_cast<size_t>(art)].push_back({i, sigma});
      lb_[static_cast<size_t>(art)] = 0.0;
      ub_[static_cast<size_t>(art)] = kInf;
      phase1_cost_[static_cast<size_t>(art)] = 1.0;
      basis_[static_cast<size_t>(i)] = art;
      in_basis_[static_cast<size_t>(art)] = true;
      xval_[static_cast<size_t>(art)] = std::abs(resid);
      binv_(i, i) = sigma;
    }
  }

  double reduced_cost(const Eigen::VectorXd& y, int j) const {
    double d = (*active_cost_)[static_cast<size_t>(j)];
    for (const auto& e : cols_[static_cast<size_t>(j)]) d -= y(e.row) * e.coeff;
    return d;
  }

  double max_bound_violation() const {
    double worst = 0.0;
    for (int j = 0; j < total_; ++j) {
      const size_t sj = static_cast<size_t>(j);
      worst = std::max(worst, lb_[sj] - xval_[sj]);
      worst = std::max(worst, xval_[sj] - ub_[sj]);
    }
    return worst;
  }

  void refactor() {
    if (m_ == 0) return;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m_, m_);
    for (int r = 0; r < m_; ++r) {
      for (const auto& e : cols_[static_cast<size_t>(basis_[static_cast<size_t>(r)])]) {
        B(e.row, r) = e.coeff;
      }
    }
    binv_ = B.partialPivLu().inverse();
    // Recompute basic values from the nonbasic point.
    Eigen::VectorXd rhs(m_);
    for (int i = 0; i < m_; ++i) rhs(i) = rhs_[static_cast<size_t>(i)];
    for (int j = 0; j < total_; ++j) {
      if (in_basis_[static_cast<size_t>(j)]) continue;
      const double xv = xval_[static_cast<size_t>(j)];
      if (xv == 0.0) continue;
      for (const auto& e : cols_[static_cast<size_t>(j)]) rhs(e.row) -= e.coeff * xv;
    }
    Eigen::VectorXd xb = binv_ * rhs;
    for (int r = 0; r < m_; ++r) xval_[static_cast<size_t>(basis_[static_cast<size_t>(r)])] = xb(r);
    pivots_since_refactor_ = 0;
  }

  LPStatus iterate() {
    const int iter_cap = opt_.max_iterations > 0
                             ? opt_.max_iterations
                             : 20000 + 200 * (m_ + n_);
    // Pricing tolerance scaled to the active cost vector, so the unit-cost
    // feasibility phase is not priced with the real objective's magnitude.
    double cmax = 0.0;
    for (double c : *active_cost_) cmax = std::max(cmax, std::abs(c));
    dj_tol_ = 1e-9 * (1.0 + cmax);
    bool bland = false;
    int degenerate_streak = 0;
    std::vector<bool> banned(static_cast<size_t>(total_), false);
    int banned_count = 0;

    while (true) {
      if (iterations_++ > iter_cap) return LPStatus::IterationLimit;

      Eigen::VectorXd cb(m_);
      for (int r = 0; r < m_; ++r) {
        cb(r) = (*active_cost_)[static_cast<size_t>(basis_[static_cast<size_t>(r)])];
      }
      Eigen::VectorXd y = m_ > 0 ? Eigen::VectorXd(binv_.transpose() * cb) : Eigen::VectorXd(0);

      // Pricing.
      int enter = -1;
      double enter_dir = 0.0;
      double best_viol = dj_tol_;
      const int limit = skip_artificials_ ? n_ + m_ : total_;
      for (int j = 0; j < limit; ++j) {
        const size_t sj = static_cast<size_t>(j);
        if (in_basis_[sj] || lb_[sj] == ub_[sj] || banned[sj]) continue;
        const double d = reduced_cost(y, j);
        double viol = 0.0;
        double dir = 0.0;
        switch (nb_state_[sj]) {
          case NB::AtLower:
            if (d < -dj_tol_) { viol = -d; dir = +1.0; }
            break;
          case NB::AtUpper:
            if (d > dj_tol_) { viol = d; dir = -1.0; }
            break;
          case NB::Free:
            if (std::abs(d) > dj_tol_) { viol = std::abs(d); dir = d > 0 ? -1.0 : +1.0; }
            break;
        }
        if (dir == 0.0) continue;
        if (bland) { enter = j; enter_dir = dir; break; }
        if (viol > best_viol) { best_viol = viol; enter = j; enter_dir = dir; }
      }
      if (enter < 0) {
        // Claiming optimality with improving-but-banned columns outstanding
        // would silently accept a wrong basis.
        return banned_count == 0 ? LPStatus::Optimal : LPStatus::NumericalFailure;
      }

      // FTRAN: w = B^-1 A_enter, accumulated over the sparse column.
      Eigen::VectorXd w = Eigen::VectorXd::Zero(m_);
      for (const auto& e : cols_[static_cast<size_t>(enter)]) {
        w += e.coeff * binv_.col(e.row);
      }

      // Harris two-pass ratio test. Pass 1 computes the step limit with
      // bounds relaxed by a feasibility tolerance; pass 2 takes the largest
      // pivot whose exact blocking step fits under that limit. Every moving
      // row participates, so a long step can never silently push a skipped
      // basic through its bound; the tolerance caps the per-pivot drift.
      const double participate_tol = 1e-11;
      const double slack_tol = 1e-9;
      double t_limit = kInf;
      for (int r = 0; r < m_; ++r) {
        const double delta = enter_dir * w(r);
        const size_t sb = static_cast<size_t>(basis_[static_cast<size_t>(r)]);
        double t = kInf;
        if (delta > participate_tol) {
          if (!std::isfinite(lb_[sb])) continue;
          const double relax = slack_tol * (1.0 + std::abs(lb_[sb]));
          t = (xval_[sb] - lb_[sb] + relax) / delta;
        } else if (delta < -participate_tol) {
          if (!std::isfinite(ub_[sb])) continue;
          const double relax = slack_tol * (1.0 + std::abs(ub_[sb]));
          t = (xval_[sb] - ub_[sb] - relax) / delta;
        } else {
          continue;
        }
        t_limit = std::min(t_limit, std::max(0.0, t));
      }

      int leave_pos = -1;
      double leave_bound = 0.0;
      double best_pivot_mag = 0.0;
      double t_max = kInf;
      if (std::isfinite(t_limit)) {
        for (int r = 0; r < m_; ++r) {
          const double delta = enter_dir * w(r);
          const int bcol = basis_[static_cast<size_t>(r)];
          const size_t sb = static_cast<size_t>(bcol);
          double t = kInf;
          double bound = 0.0;
          if (delta > participate_tol) {
            if (!std::isfinite(lb_[sb])) continue;
            t = std::max(0.0, (xval_[sb] - lb_[sb]) / delta);
            bound = lb_[sb];
          } else if (delta < -participate_tol) {
            if (!std::isfinite(ub_[sb])) continue;
            t = std::max(0.0, (xval_[sb] - ub_[sb]) / delta);
            bound = ub_[sb];
          } else {
            continue;
          }
          if (t > t_limit) continue;
          const double mag = std::abs(w(r));
          const bool better =
              leave_pos < 0 ||
              (bland ? bcol < basis_[static_cast<size_t>(leave_pos)] : mag > best_pivot_mag);
          if (better) {
            leave_pos = r;
            leave_bound = bound;
            best_pivot_mag = mag;
            t_max = t;
          }
        }
        // Quasi-zero pivots would corrupt the basis inverse; drop the
        // entering candidate and re-price without it.
        if (leave_pos >= 0 && best_pivot_mag < 1e-9) {
          banned[static_cast<size_t>(enter)] = true;
          ++banned_count;
          continue;
        }
      }

      const size_t se = static_cast<size_t>(enter);
      double t_flip = kInf;
      if (std::isfinite(lb_[se]) && std::isfinite(ub_[se])) t_flip = ub_[se] - lb_[se];

      if (!std::isfinite(t_max) && !std::isfinite(t_flip)) {
        unbounded_var_ = enter;
        return LPStatus::Unbounded;
      }

      if (t_flip <= t_max) {
        // Bound flip, no basis change.
        for (int r = 0; r < m_; ++r) {
          xval_[static_cast<size_t>(basis_[static_cast<size_t>(r)])] -= t_flip * enter_dir * w(r);
        }
        xval_[se] += enter_dir * t_flip;
        nb_state_[se] = nb_state_[se] == NB::AtLower ? NB::AtUpper : NB::AtLower;
        if (banned_count > 0) {
          banned.assign(static_cast<size_t>(total_), false);
          banned_count = 0;
        }
        continue;
      }

      if (t_max < 1e-10) {
        if (++degenerate_streak >= opt_.degenerate_limit) bland = true;
      } else {
        degenerate_streak = 0;
      }

      // Pivot.
      for (int r = 0; r < m_; ++r) {
        xval_[static_cast<size_t>(basis_[static_cast<size_t>(r)])] -= t_max * enter_dir * w(r);
      }
      const int leave_col = basis_[static_cast<size_t>(leave_pos)];
      xval_[static_cast<size_t>(leave_col)] = leave_bound;
      in_basis_[static_cast<size_t>(leave_col)] = false;
      nb_state_[static_cast<size_t>(leave_col)] =
          leave_bound == lb_[static_cast<size_t>(leave_col)] ? NB::AtLower : NB::AtUpper;
      xval_[se] += enter_dir * t_max;
      in_basis_[se] = true;
      basis_[static_cast<size_t>(leave_pos)] = enter;

      const double piv = w(leave_pos);
      binv_.row(leave_pos) /= piv;
      for (int i = 0; i < m_; ++i) {
        if (i == leave_pos) continue;
        const double f = w(i);
        if (f != 0.0) binv_.row(i) -= f * binv_.row(leave_pos);
      }
      if (banned_count > 0) {
        banned.assign(static_cast<size_t>(total_), false);
        banned_count = 0;
      }

      if (++pivots_since_refactor_ >= opt_.refactor_every) refactor();
    }
  }

  const ModelIR& ir_;
  SimplexOptions opt_;
  int n_ = 0, m_ = 0, total_ = 0;

  struct ColEntry {
    int row;
    double coeff;
  };
  std::vector<std::vector<ColEntry>> cols_;
  std::vector<double> lb_, ub_, xval_, cost_, phase1_cost_, rhs_;
  std::vector<double> residual_scratch_;
  std::vector<NB> nb_state_;
  std::vector<bool> in_basis_;
  std::vector<int> basis_;
  Eigen::MatrixXd binv_;
  const std::vector<double>* active_cost_ = nullptr;
  bool skip_artificials_ = false;
  double dj_tol_ = 1e-9;
  double phase1_tol_ = 1e-7;
  double rhs_norm_ = 0.0;
  int iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int unbounded_var_ = -1;
};

}  // namespace detail

namespace detail {

// Bound-propagation presolve: fixed variables fold into the right-hand
// sides, rows left with no free variable become direct checks, and rows
// left with one free variable tighten that variable's bounds. Returns false
// with `infeasible_row` set when a row or a bound pair is impossible.
struct Presolve {
  ModelIR reduced;
  std::vector<int> row_map;       // reduced row -> original row index
  std::vector<double> fixed_lb;   // effective bounds after propagation
  std::vector<double> fixed_ub;
  bool infeasible = false;
  std::string infeasible_row;

  Presolve(const ModelIR& ir, const std::vector<BoundOverride>* overrides, double tol) {
    const int n = ir.num_vars();
    fixed_lb.resize(static_cast<size_t>(n));
    fixed_ub.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      fixed_lb[static_cast<size_t>(j)] = ir.variables[static_cast<size_t>(j)].lower;
      fixed_ub[static_cast<size_t>(j)] = ir.variables[static_cast<size_t>(j)].upper;
    }
    if (overrides != nullptr) {
      for (const auto& o : *overrides) {
        fixed_lb[static_cast<size_t>(o.var)] = o.lower;
        fixed_ub[static_cast<size_t>(o.var)] = o.upper;
      }
    }

    auto tighten_le = [&](int v, double bound) {  // x_v <= bound
      if (bound < fixed_ub[static_cast<size_t>(v)]) fixed_ub[static_cast<size_t>(v)] = bound;
    };
    auto tighten_ge = [&](int v, double bound) {
      if (bound > fixed_lb[static_cast<size_t>(v)]) fixed_lb[static_cast<size_t>(v)] = bound;
    };

    struct Kept {
      const LinConstraint* c;
      int row;
    };
    std::vector<Kept> kept;
    for (int r = 0; r < ir.num_constraints(); ++r) {
      const auto& c = ir.constraints[static_cast<size_t>(r)];
      double fixed = 0.0;
      int free_var = -1;
      double free_coeff = 0.0;
      int free_count = 0;
      for (const auto& t : c.terms) {
        const size_t sv = static_cast<size_t>(t.var);
        if (fixed_lb[sv] == fixed_ub[sv]) {
          fixed += t.coeff * fixed_lb[sv];
        } else {
          ++free_count;
          free_var = t.var;
          free_coeff = t.coeff;
        }
      }
      const double rhs = c.rhs - fixed;
      if (free_count == 0) {
        const bool ok = c.sense == Sense::LE   ? 0.0 <= rhs + tol
                        : c.sense == Sense::GE ? 0.0 >= rhs - tol
                                               : std::abs(rhs) <= tol;
        if (!ok) {
          infeasible = true;
          infeasible_row = c.tag;
          return;
        }
        continue;
      }
      if (free_count == 1) {
        const double bound = rhs / free_coeff;
        switch (c.sense) {
          case Sense::LE:
            if (free_coeff > 0) tighten_le(free_var, bound);
            else tighten_ge(free_var, bound);
            break;
          case Sense::GE:
            if (free_coeff > 0) tighten_ge(free_var, bound);
            else tighten_le(free_var, bound);
            break;
          case Sense::EQ:
            tighten_le(free_var, bound);
            tighten_ge(free_var, bound);
            break;
        }
        continue;
      }
      kept.push_back({&c, r});
    }

    for (int j = 0; j < n; ++j) {
      double& lo = fixed_lb[static_cast<size_t>(j)];
      double& hi = fixed_ub[static_cast<size_t>(j)];
      if (lo > hi) {
        if (lo <= hi + tol * (1.0 + std::abs(hi))) {
          lo = hi = 0.5 * (lo + hi);
        } else {
          infeasible = true;
          infeasible_row = "bounds of " + ir.variables[static_cast<size_t>(j)].name;
          return;
        }
      }
    }

    // Assemble the reduced model over the same variable indexing so the
    // solution maps back one-to-one.
    for (int j = 0; j < n; ++j) {
      reduced.add_var(ir.variables[static_cast<size_t>(j)].name,
                      ir.variables[static_cast<size_t>(j)].kind, fixed_lb[static_cast<size_t>(j)],
                      fixed_ub[static_cast<size_t>(j)]);
    }
    for (const auto& [c, row] : kept) {
      LinExpr e;
      double fixed = 0.0;
      for (const auto& t : c->terms) {
        const size_t sv = static_cast<size_t>(t.var);
        if (fixed_lb[sv] == fixed_ub[sv]) {
          fixed += t.coeff * fixed_lb[sv];
        } else {
          e.add(t.var, t.coeff);
        }
      }
      if (e.coeffs.empty()) {
        const double rhs = c->rhs - fixed;
        const bool ok = c->sense == Sense::LE   ? 0.0 <= rhs + tol
                        : c->sense == Sense::GE ? 0.0 >= rhs - tol
                                                : std::abs(rhs) <= tol;
        if (!ok) {
          infeasible = true;
          infeasible_row = c->tag;
          return;
        }
        continue;
      }
      reduced.add_constraint(c->tag, e, c->sense, c->rhs - fixed);
      row_map.push_back(row);
    }
    reduced.objective = ir.objective;
  }
};

}  // namespace detail

/// Solves the LP relaxation of a model (integrality ignored). Optional bound
/// overrides replace variable bounds without mutating the model. A bound-
/// propagation presolve folds fixed variables into the rows first, so
/// heavily restricted models (oracle enumeration, deep branch-and-bound
/// nodes) solve on a much smaller core.
inline LPSolution solve_lp(const ModelIR& ir, const SimplexOptions& opt = {},
                           const std::vector<BoundOverride>* overrides = nullptr) {
  detail::Presolve pre(ir, overrides, opt.feas_tol);
  if (pre.infeasible) {
    LPSolution out;
    out.status = LPStatus::Infeasible;
    out.infeasibility = 1.0;
    out.note = "presolve: " + pre.infeasible_row;
    return out;
  }
  detail::SimplexSolver solver(pre.reduced, opt, nullptr);
  LPSolution sol = solver.solve();
  if (sol.status == LPStatus::Optimal) {
    // Objective already includes the constant; values are index-aligned.
    std::vector<double> duals(static_cast<size_t>(ir.num_constraints()), 0.0);
    for (size_t k = 0; k < pre.row_map.size(); ++k) {
      duals[static_cast<size_t>(pre.row_map[k])] = sol.duals[k];
    }
    sol.duals = std::move(duals);
  }
  return sol;
}

}  // namespace drayplan
