#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "drayplan/milp.hpp"
#include "drayplan/model_ir.hpp"

namespace drayplan {

struct SolutionViolation {
  enum class Kind { Constraint, Bound, Integrality };
  Kind kind = Kind::Constraint;
  std::string tag;       // constraint tag or variable name
  double residual = 0.0; // amount by which the requirement is missed
};

struct CheckReport {
  std::vector<SolutionViolation> violations;
  double max_residual = 0.0;

  bool feasible() const { return violations.empty(); }

  std::string to_string() const {
    std::ostringstream os;
    for (const auto& v : violations) {
      const char* kind = v.kind == SolutionViolation::Kind::Constraint ? "constraint"
                         : v.kind == SolutionViolation::Kind::Bound    ? "bound"
                                                                       : "integrality";
      os << kind << " " << v.tag << " violated by " << v.residual << "\n";
    }
    return os.str();
  }
};

/// Evaluates every constraint, bound, and integrality requirement of a
/// model at the given point. Empty report iff feasible within tol.
inline CheckReport check_solution(const ModelIR& ir, const std::vector<double>& values,
                                  double tol = 1e-6) {
  CheckReport rep;
  auto note = [&](SolutionViolation::Kind kind, const std::string& tag, double resid) {
    if (resid > tol) {
      rep.violations.push_back({kind, tag, resid});
      rep.max_residual = std::max(rep.max_residual, resid);
    }
  };

  for (const auto& v : ir.variables) {
    const double x = values[static_cast<size_t>(v.index)];
    note(SolutionViolation::Kind::Bound, v.name,
         std::max(v.lower - x, x - v.upper));
    if (v.is_integral()) {
      note(SolutionViolation::Kind::Integrality, v.name, std::abs(x - std::round(x)));
    }
  }

  for (const auto& c : ir.constraints) {
    const double a = ir.constraint_activity(c, values);
    double resid = 0.0;
    switch (c.sense) {
      case Sense::LE: resid = a - c.rhs; break;
      case Sense::GE: resid = c.rhs - a; break;
      case Sense::EQ: resid = std::abs(a - c.rhs); break;
    }
    note(SolutionViolation::Kind::Constraint, c.tag, resid);
  }
  return rep;
}

inline CheckReport check_solution(const ModelIR& ir, const Solution& sol, double tol = 1e-6) {
  return check_solution(ir, sol.values, tol);
}

}  // namespace drayplan
