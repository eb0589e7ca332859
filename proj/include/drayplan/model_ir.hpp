#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace drayplan {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary, Integer };
enum class Sense { LE, EQ, GE };
enum class ObjSense { Minimize, Maximize };

inline const char* to_string(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::EQ: return "=";
    case Sense::GE: return ">=";
  }
  return "?";
}

struct VarRef {
  int index = -1;
  std::string name;  // structured tag, e.g. "ptrk[2,0,7]"
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;

  bool is_integral() const { return kind != VarKind::Continuous; }
  bool is_fixed() const { return lower == upper; }
};

struct LinTerm {
  int var = -1;
  double coeff = 0.0;
};

struct LinConstraint {
  std::string tag;  // family + indices, e.g. "energy[3,17]"
  Sense sense = Sense::LE;
  double rhs = 0.0;
  std::vector<LinTerm> terms;
};

/// Linear expression with a constant offset; duplicate variables are merged.
struct LinExpr {
  std::map<int, double> coeffs;
  double constant = 0.0;

  void add(int var, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = coeffs.emplace(var, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0.0) coeffs.erase(it);
    }
  }
  void add(const LinExpr& other, double scale = 1.0) {
    for (const auto& [v, c] : other.coeffs) add(v, scale * c);
    constant += scale * other.constant;
  }
  std::vector<LinTerm> terms() const {
    std::vector<LinTerm> out;
    out.reserve(coeffs.size());
    for (const auto& [v, c] : coeffs) out.push_back({v, c});
    return out;
  }
};

struct Objective {
  ObjSense sense = ObjSense::Minimize;
  std::vector<LinTerm> terms;
  double constant = 0.0;
};

/// Solver-agnostic MILP: variables with bounds and integrality, linear
/// constraints, one linear objective. Names and tags are unique.
class ModelIR {
 public:
  std::vector<VarRef> variables;
  std::vector<LinConstraint> constraints;
  Objective objective;

  int add_var(const std::string& name, VarKind kind, double lower, double upper) {
    if (!(lower <= upper)) {
      throw std::invalid_argument("variable " + name + ": lower > upper");
    }
    if (kind == VarKind::Binary && (lower < 0.0 || upper > 1.0)) {
      throw std::invalid_argument("binary variable " + name + ": bounds outside [0,1]");
    }
    if (name_to_index_.count(name)) {
      throw std::invalid_argument("duplicate variable name: " + name);
    }
    const int idx = static_cast<int>(variables.size());
    variables.push_back({idx, name, kind, lower, upper});
    name_to_index_.emplace(name, idx);
    return idx;
  }

  void add_constraint(const std::string& tag, const LinExpr& lhs, Sense sense, double rhs) {
    if (tag_to_index_.count(tag)) {
      throw std::invalid_argument("duplicate constraint tag: " + tag);
    }
    LinConstraint c;
    c.tag = tag;
    c.sense = sense;
    c.rhs = rhs - lhs.constant;
    c.terms = lhs.terms();
    for (const auto& t : c.terms) {
      check_var(t.var);
      if (!std::isfinite(t.coeff)) {
        throw std::invalid_argument("constraint " + tag + ": non-finite coefficient");
      }
    }
    tag_to_index_.emplace(tag, static_cast<int>(constraints.size()));
    constraints.push_back(std::move(c));
  }

  void set_objective(ObjSense sense, const LinExpr& expr) {
    objective.sense = sense;
    objective.terms = expr.terms();
    objective.constant = expr.constant;
    for (const auto& t : objective.terms) check_var(t.var);
  }

  void set_bounds(int var, double lower, double upper) {
    check_var(var);
    if (!(lower <= upper)) {
      throw std::invalid_argument("set_bounds on " + variables[static_cast<size_t>(var)].name +
                                  ": lower > upper");
    }
    variables[static_cast<size_t>(var)].lower = lower;
    variables[static_cast<size_t>(var)].upper = upper;
  }

  void fix_var(int var, double value) { set_bounds(var, value, value); }

  int var_index(const std::string& name) const {
    auto it = name_to_index_.find(name);
    return it == name_to_index_.end() ? -1 : it->second;
  }

  int constraint_index(const std::string& tag) const {
    auto it = tag_to_index_.find(tag);
    return it == tag_to_index_.end() ? -1 : it->second;
  }

  int num_vars() const { return static_cast<int>(variables.size()); }
  int num_constraints() const { return static_cast<int>(constraints.size()); }

  int num_integral_vars() const {
    int n = 0;
    for (const auto& v : variables) {
      if (v.is_integral()) ++n;
    }
    return n;
  }

  /// Objective value of an assignment, in the model's own sense.
  double objective_value(const std::vector<double>& x) const {
    double v = objective.constant;
    for (const auto& t : objective.terms) v += t.coeff * x[static_cast<size_t>(t.var)];
    return v;
  }

  double constraint_activity(const LinConstraint& c, const std::vector<double>& x) const {
    double a = 0.0;
    for (const auto& t : c.terms) a += t.coeff * x[static_cast<size_t>(t.var)];
    return a;
  }

 private:
  void check_var(int var) const {
    if (var < 0 || var >= num_vars()) {
      throw std::invalid_argument("variable index out of range: " + std::to_string(var));
    }
  }

  std::unordered_map<std::string, int> name_to_index_;
  std::unordered_map<std::string, int> tag_to_index_;
};

}  // namespace drayplan
