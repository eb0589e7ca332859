#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "drayplan/milp.hpp"
#include "drayplan/model_ir.hpp"
#include "drayplan/solution_check.hpp"

namespace drayplan {

enum class ModelFormat { MPS, LPText };

namespace detail {

inline std::string fmt_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string pad(const std::string& s, size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

inline std::string mangle_var(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "X%07d", index + 1);
  return buf;
}

inline std::string mangle_row(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "R%07d", index + 1);
  return buf;
}

// LP-format names cannot contain brackets; parentheses are legal.
inline std::string lp_name(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '[') c = '(';
    if (c == ']') c = ')';
  }
  return out;
}

}  // namespace detail

/// Writes fixed-layout MPS. The objective is always emitted in minimization
/// form; a maximization model has its coefficients negated and the flip is
/// recorded in the sidecar name map (`<path>.names.json`). One (row, value)
/// pair per COLUMNS line; values carry 12 significant digits. The objective
/// constant is stored as a negative RHS entry on the OBJ row.
inline void export_mps(const ModelIR& ir, const std::string& path,
                       const std::string& model_name = "DRAYPLAN") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const bool negate = ir.objective.sense == ObjSense::Maximize;
  const double sign = negate ? -1.0 : 1.0;

  out << "NAME          " << model_name << "\n";
  out << "ROWS\n";
  out << " N  OBJ\n";
  for (int r = 0; r < ir.num_constraints(); ++r) {
    const char* s = ir.constraints[static_cast<size_t>(r)].sense == Sense::LE   ? "L"
                    : ir.constraints[static_cast<size_t>(r)].sense == Sense::GE ? "G"
                                                                                : "E";
    out << " " << s << "  " << detail::mangle_row(r) << "\n";
  }

  // Column-major assembly: objective entry first, then rows in order. Every
  // variable gets at least one entry so parsers register it.
  std::vector<std::vector<std::pair<int, double>>> col_rows(
      static_cast<size_t>(ir.num_vars()));
  for (int r = 0; r < ir.num_constraints(); ++r) {
    for (const auto& t : ir.constraints[static_cast<size_t>(r)].terms) {
      col_rows[static_cast<size_t>(t.var)].push_back({r, t.coeff});
    }
  }
  std::vector<double> obj_coeff(static_cast<size_t>(ir.num_vars()), 0.0);
  for (const auto& t : ir.objective.terms) obj_coeff[static_cast<size_t>(t.var)] += sign * t.coeff;

  out << "COLUMNS\n";
  bool in_integer = false;
  int marker = 0;
  for (int v = 0; v < ir.num_vars(); ++v) {
    const bool integral = ir.variables[static_cast<size_t>(v)].is_integral();
    if (integral && !in_integer) {
      char mk[16];
      std::snprintf(mk, sizeof(mk), "M%07d", ++marker);
      out << "    " << detail::pad(mk, 8) << "  'MARKER'                 'INTORG'\n";
      in_integer = true;
    } else if (!integral && in_integer) {
      char mk[16];
      std::snprintf(mk, sizeof(mk), "M%07d", ++marker);
      out << "    " << detail::pad(mk, 8) << "  'MARKER'                 'INTEND'\n";
      in_integer = false;
    }
    const std::string col = detail::mangle_var(v);
    bool wrote = false;
    if (obj_coeff[static_cast<size_t>(v)] != 0.0) {
      out << "    " << detail::pad(col, 8) << "  " << detail::pad("OBJ", 8) << "  "
          << detail::fmt_num(obj_coeff[static_cast<size_t>(v)]) << "\n";
      wrote = true;
    }
    for (const auto& [r, c] : col_rows[static_cast<size_t>(v)]) {
      out << "    " << detail::pad(col, 8) << "  " << detail::pad(detail::mangle_row(r), 8) << "  "
          << detail::fmt_num(c) << "\n";
      wrote = true;
    }
    if (!wrote) {
      out << "    " << detail::pad(col, 8) << "  " << detail::pad("OBJ", 8) << "  0\n";
    }
  }
  if (in_integer) {
    char mk[16];
    std::snprintf(mk, sizeof(mk), "M%07d", ++marker);
    out << "    " << detail::pad(mk, 8) << "  'MARKER'                 'INTEND'\n";
  }

  out << "RHS\n";
  for (int r = 0; r < ir.num_constraints(); ++r) {
    const double rhs = ir.constraints[static_cast<size_t>(r)].rhs;
    if (rhs != 0.0) {
      out << "    " << detail::pad("RHS", 8) << "  " << detail::pad(detail::mangle_row(r), 8)
          << "  " << detail::fmt_num(rhs) << "\n";
    }
  }
  const double constant = sign * ir.objective.constant;
  if (constant != 0.0) {
    out << "    " << detail::pad("RHS", 8) << "  " << detail::pad("OBJ", 8) << "  "
        << detail::fmt_num(-constant) << "\n";
  }

  out << "BOUNDS\n";
  for (int v = 0; v < ir.num_vars(); ++v) {
    const auto& var = ir.variables[static_cast<size_t>(v)];
    const std::string col = detail::pad(detail::mangle_var(v), 8);
    auto line = [&](const char* type, bool with_value, double value = 0.0) {
      out << " " << type << " " << detail::pad("BND", 8) << "  " << col;
      if (with_value) out << "  " << detail::fmt_num(value);
      out << "\n";
    };
    if (var.lower == var.upper) {
      line("FX", true, var.lower);
      continue;
    }
    const bool lo_f = std::isfinite(var.lower);
    const bool up_f = std::isfinite(var.upper);
    if (!lo_f && !up_f) {
      line("FR", false);
      continue;
    }
    if (!lo_f) {
      line("MI", false);
    } else if (var.lower != 0.0 || var.is_integral()) {
      line("LO", true, var.lower);
    }
    if (up_f) {
      line("UP", true, var.upper);
    } else if (var.is_integral()) {
      line("PL", false);
    }
  }
  out << "ENDATA\n";

  // Sidecar name map.
  nlohmann::json side;
  side["schema"] = 1;
  side["sense"] = ir.objective.sense == ObjSense::Maximize ? "max" : "min";
  side["objective_negated"] = negate;
  nlohmann::json vars = nlohmann::json::object();
  for (int v = 0; v < ir.num_vars(); ++v) {
    vars[detail::mangle_var(v)] = ir.variables[static_cast<size_t>(v)].name;
  }
  nlohmann::json rows = nlohmann::json::object();
  for (int r = 0; r < ir.num_constraints(); ++r) {
    rows[detail::mangle_row(r)] = ir.constraints[static_cast<size_t>(r)].tag;
  }
  side["vars"] = vars;
  side["rows"] = rows;
  std::ofstream sideout(path + ".names.json");
  if (!sideout) throw std::runtime_error("cannot open for write: " + path + ".names.json");
  sideout << side.dump(2) << "\n";
}

/// CPLEX-style LP text with readable names (brackets become parentheses).
inline void export_lp_text(const ModelIR& ir, const std::string& path,
                           const std::string& model_name = "DRAYPLAN") {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << "\\ " << model_name << "\n";
  out << (ir.objective.sense == ObjSense::Maximize ? "Maximize\n" : "Minimize\n");
  out << " obj:";
  for (const auto& t : ir.objective.terms) {
    const double c = t.coeff;
    out << (c < 0 ? " - " : " + ") << detail::fmt_num(std::abs(c)) << " "
        << detail::lp_name(ir.variables[static_cast<size_t>(t.var)].name);
  }
  if (ir.objective.constant != 0.0) {
    out << (ir.objective.constant < 0 ? " - " : " + ")
        << detail::fmt_num(std::abs(ir.objective.constant));
  }
  out << "\nSubject To\n";
  for (const auto& c : ir.constraints) {
    out << " " << detail::lp_name(c.tag) << ":";
    for (const auto& t : c.terms) {
      out << (t.coeff < 0 ? " - " : " + ") << detail::fmt_num(std::abs(t.coeff)) << " "
          << detail::lp_name(ir.variables[static_cast<size_t>(t.var)].name);
    }
    out << " " << to_string(c.sense) << " " << detail::fmt_num(c.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : ir.variables) {
    const std::string name = detail::lp_name(v.name);
    if (v.lower == v.upper) {
      out << " " << name << " = " << detail::fmt_num(v.lower) << "\n";
    } else if (!std::isfinite(v.lower) && !std::isfinite(v.upper)) {
      out << " " << name << " free\n";
    } else if (!std::isfinite(v.upper)) {
      if (v.lower != 0.0) out << " " << name << " >= " << detail::fmt_num(v.lower) << "\n";
    } else if (!std::isfinite(v.lower)) {
      out << " -inf <= " << name << " <= " << detail::fmt_num(v.upper) << "\n";
    } else {
      out << " " << detail::fmt_num(v.lower) << " <= " << name << " <= "
          << detail::fmt_num(v.upper) << "\n";
    }
  }
  std::vector<const VarRef*> bins, gens;
  for (const auto& v : ir.variables) {
    if (v.kind == VarKind::Binary) bins.push_back(&v);
    if (v.kind == VarKind::Integer) gens.push_back(&v);
  }
  if (!bins.empty()) {
    out << "Binaries\n";
    for (const auto* v : bins) out << " " << detail::lp_name(v->name) << "\n";
  }
  if (!gens.empty()) {
    out << "Generals\n";
    for (const auto* v : gens) out << " " << detail::lp_name(v->name) << "\n";
  }
  out << "End\n";
}

inline void export_model(const ModelIR& ir, ModelFormat format, const std::string& path,
                         const std::string& model_name = "DRAYPLAN") {
  if (format == ModelFormat::MPS) {
    export_mps(ir, path, model_name);
  } else {
    export_lp_text(ir, path, model_name);
  }
}

/// Reads MPS written by export_mps (whitespace-tokenized). When the sidecar
/// name map exists next to the file, original names, the objective sense,
/// and the negation flip are restored.
inline ModelIR import_mps(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);

  nlohmann::json side;
  bool have_side = false;
  {
    std::ifstream sidein(path + ".names.json");
    if (sidein) {
      sidein >> side;
      have_side = true;
    }
  }

  struct RawCol {
    std::string name;
    bool integral = false;
    double obj = 0.0;
    std::vector<std::pair<std::string, double>> entries;
    double lower = 0.0;
    double upper = kInf;
    bool lower_set = false, upper_set = false, fixed = false, free_var = false, minf = false;
  };
  std::vector<std::string> row_order;
  std::map<std::string, Sense> row_sense;
  std::map<std::string, double> row_rhs;
  std::vector<RawCol> cols;
  std::map<std::string, size_t> col_index;
  double obj_rhs = 0.0;

  auto get_col = [&](const std::string& name) -> RawCol& {
    auto it = col_index.find(name);
    if (it == col_index.end()) {
      col_index.emplace(name, cols.size());
      RawCol col;
      col.name = name;
      cols.push_back(std::move(col));
      return cols.back();
    }
    return cols[it->second];
  };

  enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds };
  Section section = Section::None;
  bool integer_mode = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::string& head = tok[0];
      if (head == "NAME") section = Section::None;
      else if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "RANGES") section = Section::Ranges;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "ENDATA") break;
      else throw std::runtime_error("MPS: unknown section " + head);
      continue;
    }
    switch (section) {
      case Section::Rows: {
        if (tok.size() < 2) throw std::runtime_error("MPS: bad ROWS line: " + line);
        if (tok[0] == "N") {
          // objective row; only the first N row is used
        } else if (tok[0] == "L") {
          row_sense[tok[1]] = Sense::LE;
          row_order.push_back(tok[1]);
        } else if (tok[0] == "G") {
          row_sense[tok[1]] = Sense::GE;
          row_order.push_back(tok[1]);
        } else if (tok[0] == "E") {
          row_sense[tok[1]] = Sense::EQ;
          row_order.push_back(tok[1]);
        } else {
          throw std::runtime_error("MPS: bad row sense: " + line);
        }
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") integer_mode = true;
          else if (tok[2] == "'INTEND'") integer_mode = false;
          break;
        }
        if (tok.size() >= 2 && tok[0] == "'MARKER'") {  // markerless-name variant
          break;
        }
        if (tok.size() < 3 || tok.size() % 2 == 0) {
          throw std::runtime_error("MPS: bad COLUMNS line: " + line);
        }
        RawCol& col = get_col(tok[0]);
        col.integral = col.integral || integer_mode;
        for (size_t f = 1; f + 1 < tok.size(); f += 2) {
          const double v = std::stod(tok[f + 1]);
          if (tok[f] == "OBJ") col.obj += v;
          else col.entries.push_back({tok[f], v});
        }
        break;
      }
      case Section::Rhs: {
        if (tok.size() < 3) throw std::runtime_error("MPS: bad RHS line: " + line);
        for (size_t f = 1; f + 1 < tok.size(); f += 2) {
          if (tok[f] == "OBJ") obj_rhs = std::stod(tok[f + 1]);
          else row_rhs[tok[f]] = std::stod(tok[f + 1]);
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) throw std::runtime_error("MPS: bad BOUNDS line: " + line);
        RawCol& col = get_col(tok[2]);
        const std::string& type = tok[0];
        const double v = tok.size() >= 4 ? std::stod(tok[3]) : 0.0;
        if (type == "UP") { col.upper = v; col.upper_set = true; }
        else if (type == "LO") { col.lower = v; col.lower_set = true; }
        else if (type == "FX") { col.lower = col.upper = v; col.fixed = true; }
        else if (type == "FR") { col.free_var = true; }
        else if (type == "MI") { col.minf = true; }
        else if (type == "PL") { col.upper = kInf; }
        else if (type == "BV") { col.lower = 0.0; col.upper = 1.0; col.integral = true; }
        else throw std::runtime_error("MPS: unsupported bound type " + type);
        break;
      }
      case Section::Ranges:
        throw std::runtime_error("MPS: RANGES section is not supported");
      case Section::None:
        break;
    }
  }

  const bool negated = have_side && side.value("objective_negated", false);
  const bool maximize = have_side && side.value("sense", "min") == std::string("max");
  auto original_var = [&](const std::string& mangled) {
    if (have_side && side["vars"].contains(mangled)) {
      return side["vars"][mangled].get<std::string>();
    }
    return mangled;
  };
  auto original_row = [&](const std::string& mangled) {
    if (have_side && side["rows"].contains(mangled)) {
      return side["rows"][mangled].get<std::string>();
    }
    return mangled;
  };

  ModelIR ir;
  for (auto& col : cols) {
    double lo = col.lower, up = col.upper;
    if (col.free_var) { lo = -kInf; up = kInf; }
    if (col.minf) lo = -kInf;
    VarKind kind = VarKind::Continuous;
    if (col.integral) {
      kind = (lo == 0.0 && up == 1.0) ? VarKind::Binary : VarKind::Integer;
    }
    ir.add_var(original_var(col.name), kind, lo, up);
  }
  for (const auto& row : row_order) {
    LinExpr e;
    for (size_t v = 0; v < cols.size(); ++v) {
      for (const auto& [r, c] : cols[v].entries) {
        if (r == row) e.add(static_cast<int>(v), c);
      }
    }
    ir.add_constraint(original_row(row), e, row_sense.at(row),
                      row_rhs.count(row) ? row_rhs.at(row) : 0.0);
  }
  LinExpr obj;
  const double sign = negated ? -1.0 : 1.0;
  for (size_t v = 0; v < cols.size(); ++v) {
    if (cols[v].obj != 0.0) obj.add(static_cast<int>(v), sign * cols[v].obj);
  }
  obj.constant = sign * (-obj_rhs);
  ir.set_objective(maximize ? ObjSense::Maximize : ObjSense::Minimize, obj);
  return ir;
}

/// Solution file: `# comment` lines and one `name value` pair per line.
inline void write_solution_file(const ModelIR& ir, const Solution& sol, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << "# status " << to_string(sol.status) << "\n";
  out << "# objective " << detail::fmt_num(sol.objective) << "\n";
  for (const auto& v : ir.variables) {
    out << v.name << " " << detail::fmt_num(sol.values[static_cast<size_t>(v.index)]) << "\n";
  }
}

/// Reads a `name value` solution file against a model. Names may be the
/// model's own or the mangled MPS names when a sidecar map is supplied.
/// check_solution runs automatically; the report lands in `check` when the
/// caller wants it.
inline Solution import_solution(const std::string& path, const ModelIR& ir,
                                const std::string& sidecar_path = "", CheckReport* check = nullptr,
                                double tol = 1e-6) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);

  std::map<std::string, std::string> mangled_to_name;
  if (!sidecar_path.empty()) {
    std::ifstream sidein(sidecar_path);
    if (!sidein) throw std::runtime_error("cannot open: " + sidecar_path);
    nlohmann::json side;
    sidein >> side;
    for (auto it = side["vars"].begin(); it != side["vars"].end(); ++it) {
      mangled_to_name[it.key()] = it.value().get<std::string>();
    }
  }

  std::vector<double> values(static_cast<size_t>(ir.num_vars()), 0.0);
  std::vector<bool> seen(static_cast<size_t>(ir.num_vars()), false);
  std::vector<std::string> unknown;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string name;
    double value;
    if (!(ls >> name >> value)) continue;
    auto mapped = mangled_to_name.find(name);
    const std::string& resolved = mapped != mangled_to_name.end() ? mapped->second : name;
    const int idx = ir.var_index(resolved);
    if (idx < 0) {
      unknown.push_back(name);
      continue;
    }
    values[static_cast<size_t>(idx)] = value;
    seen[static_cast<size_t>(idx)] = true;
  }
  if (!unknown.empty()) {
    std::string msg = "solution file has unknown variables:";
    for (const auto& u : unknown) msg += " " + u;
    throw std::runtime_error(msg);
  }
  std::vector<std::string> missing;
  for (const auto& v : ir.variables) {
    if (!seen[static_cast<size_t>(v.index)]) missing.push_back(v.name);
  }
  if (!missing.empty()) {
    std::string msg = "solution file is missing variables:";
    for (const auto& m : missing) msg += " " + m;
    throw std::runtime_error(msg);
  }

  Solution sol;
  sol.values = std::move(values);
  sol.objective = ir.objective_value(sol.values);
  const CheckReport rep = check_solution(ir, sol.values, tol);
  sol.status = rep.feasible() ? SolveStatus::Feasible : SolveStatus::Infeasible;
  sol.bound = sol.objective;
  if (check != nullptr) *check = rep;
  return sol;
}

}  // namespace drayplan
