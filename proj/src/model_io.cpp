#include "vne/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace vne::model_io {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool safe_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::string sanitize(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) out.push_back(safe_char(c) ? c : '_');
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) ||
      out[0] == '.') {
    out.insert(0, "x_");
  }
  if (out.size() > 255) out.resize(255);
  return out;
}

std::vector<std::string> sanitize_all(const std::vector<std::string>& names,
                                      const std::string& what) {
  std::vector<std::string> out;
  out.reserve(names.size());
  std::map<std::string, std::string> seen;
  std::vector<std::string> collisions;
  for (const auto& name : names) {
    std::string s = sanitize(name);
    auto [it, inserted] = seen.emplace(s, name);
    if (!inserted) {
      collisions.push_back(it->second + " / " + name + " -> " + s);
    }
    out.push_back(std::move(s));
  }
  if (!collisions.empty()) {
    std::string msg = "export: " + what + " name collisions after sanitization:";
    for (const auto& c : collisions) msg += "\n  " + c;
    throw Error(msg);
  }
  return out;
}

std::vector<std::string> row_names(const mip::MipModel& model) {
  std::vector<std::string> names;
  names.reserve(model.constraints.size());
  for (const auto& row : model.constraints) names.push_back(row.name);
  return sanitize_all(names, "constraint");
}

std::string write_lp(const mip::MipModel& model) {
  std::vector<std::string> vars = export_names(model);
  std::vector<std::string> rows = row_names(model);
  std::ostringstream os;
  os << "\\ exported model: " << model.variables.size() << " variables, "
     << model.constraints.size() << " constraints\n";
  os << "Minimize\n obj:";
  if (model.objective.empty()) os << " 0 " << vars.at(0);
  for (const auto& [idx, coeff] : model.objective) {
    os << (coeff < 0 ? " - " : " + ") << fmt(std::fabs(coeff)) << " " << vars[idx];
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const auto& row = model.constraints[i];
    if (row.terms.empty()) {
      throw Error("export: constraint '" + row.name + "' has no terms");
    }
    os << " " << rows[i] << ":";
    for (const auto& [idx, coeff] : row.terms) {
      os << (coeff < 0 ? " - " : " + ") << fmt(std::fabs(coeff)) << " " << vars[idx];
    }
    os << " " << mip::to_string(row.relation) << " " << fmt(row.rhs) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const auto& v = model.variables[j];
    if (v.lower == -kUnbounded && is_unbounded(v.upper)) {
      os << " " << vars[j] << " free\n";
    } else if (v.lower == v.upper) {
      os << " " << vars[j] << " = " << fmt(v.lower) << "\n";
    } else if (is_unbounded(v.upper)) {
      os << " " << vars[j] << " >= " << fmt(v.lower) << "\n";
    } else {
      os << " " << fmt(v.lower) << " <= " << vars[j] << " <= " << fmt(v.upper) << "\n";
    }
  }
  bool any_binary = false;
  for (const auto& v : model.variables) {
    if (v.integrality == mip::Integrality::Binary) { any_binary = true; break; }
  }
  if (any_binary) {
    os << "Binaries\n";
    for (std::size_t j = 0; j < model.variables.size(); ++j) {
      if (model.variables[j].integrality == mip::Integrality::Binary) {
        os << " " << vars[j] << "\n";
      }
    }
  }
  os << "End\n";
  return os.str();
}

std::string write_mps(const mip::MipModel& model) {
  std::vector<std::string> vars = export_names(model);
  std::vector<std::string> rows = row_names(model);
  std::ostringstream os;
  os << "NAME exported_model\nROWS\n N obj\n";
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    char type = 'L';
    switch (model.constraints[i].relation) {
      case mip::Relation::LessEqual: type = 'L'; break;
      case mip::Relation::GreaterEqual: type = 'G'; break;
      case mip::Relation::Equal: type = 'E'; break;
    }
    os << " " << type << " " << rows[i] << "\n";
  }

  // Column-major view of the matrix plus objective.
  std::vector<std::vector<std::pair<std::string, double>>> cols(model.variables.size());
  for (const auto& [idx, coeff] : model.objective) {
    cols[idx].emplace_back("obj", coeff);
  }
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    for (const auto& [idx, coeff] : model.constraints[i].terms) {
      cols[idx].emplace_back(rows[i], coeff);
    }
  }
  os << "COLUMNS\n";
  bool in_integer = false;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    bool integer = model.variables[j].integrality == mip::Integrality::Binary;
    if (integer != in_integer) {
      os << "    M" << j << " 'MARKER' " << (integer ? "'INTORG'" : "'INTEND'")
         << "\n";
      in_integer = integer;
    }
    if (cols[j].empty()) {
      os << "    " << vars[j] << " obj 0\n";
      continue;
    }
    for (const auto& [row, coeff] : cols[j]) {
      os << "    " << vars[j] << " " << row << " " << fmt(coeff) << "\n";
    }
  }
  if (in_integer) os << "    MEND 'MARKER' 'INTEND'\n";

  os << "RHS\n";
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    if (model.constraints[i].rhs != 0) {
      os << "    rhs " << rows[i] << " " << fmt(model.constraints[i].rhs) << "\n";
    }
  }
  os << "BOUNDS\n";
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const auto& v = model.variables[j];
    if (v.lower == -kUnbounded && is_unbounded(v.upper)) {
      os << " FR bnd " << vars[j] << "\n";
      continue;
    }
    if (v.lower == v.upper) {
      os << " FX bnd " << vars[j] << " " << fmt(v.lower) << "\n";
      continue;
    }
    if (v.lower == -kUnbounded) {
      os << " MI bnd " << vars[j] << "\n";
    } else if (v.lower != 0) {
      os << " LO bnd " << vars[j] << " " << fmt(v.lower) << "\n";
    }
    if (!is_unbounded(v.upper)) {
      os << " UP bnd " << vars[j] << " " << fmt(v.upper) << "\n";
    }
  }
  os << "ENDATA\n";
  return os.str();
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string token;
  while (is >> token) tokens.push_back(token);
  return tokens;
}

double parse_number(const std::string& token, int line_no) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    throw Error("parse error at line " + std::to_string(line_no) +
                ": expected number, got '" + token + "'");
  }
  if (pos != token.size()) {
    throw Error("parse error at line " + std::to_string(line_no) +
                ": trailing characters in number '" + token + "'");
  }
  return v;
}

struct ModelAssembler {
  mip::MipModel model;
  std::map<std::string, int> var_index;
  std::map<std::string, int> row_index;

  int var(const std::string& name) {
    auto it = var_index.find(name);
    if (it != var_index.end()) return it->second;
    int idx = static_cast<int>(model.variables.size());
    mip::Variable v;
    v.name = name;
    v.lower = 0;
    v.upper = kUnbounded;
    model.variables.push_back(std::move(v));
    var_index[name] = idx;
    return idx;
  }

  mip::MipModel take() {
    model.variable_index = var_index;
    // Canonicalize term order within rows and the objective.
    for (auto& row : model.constraints) {
      std::sort(row.terms.begin(), row.terms.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
    }
    std::sort(model.objective.begin(), model.objective.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return std::move(model);
  }
};

// --- LP text reader (the subset write_lp emits) ------------------------

enum class LpSection { None, Objective, Constraints, Bounds, Binaries, Generals, End };

LpSection classify_section(const std::string& lower) {
  if (lower == "minimize" || lower == "min" || lower == "minimise") return LpSection::Objective;
  if (lower == "subject" || lower == "st" || lower == "s.t." || lower == "such") return LpSection::Constraints;
  if (lower == "bounds" || lower == "bound") return LpSection::Bounds;
  if (lower == "binaries" || lower == "binary" || lower == "bin") return LpSection::Binaries;
  if (lower == "generals" || lower == "general" || lower == "gen") return LpSection::Generals;
  if (lower == "end") return LpSection::End;
  return LpSection::None;
}

std::string lower_copy(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool is_relation(const std::string& t) {
  return t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">";
}

mip::Relation to_relation(const std::string& t) {
  if (t == "<=" || t == "<") return mip::Relation::LessEqual;
  if (t == ">=" || t == ">") return mip::Relation::GreaterEqual;
  return mip::Relation::Equal;
}

// Splits relation operators and ':' glued to other tokens. A '+'/'-' right
// after an exponent marker stays part of the number.
std::vector<std::string> lp_tokens(const std::string& line, int line_no) {
  std::string spaced;
  char prev = ' ';
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '<' || c == '>' || c == '=') {
      spaced += ' ';
      spaced += c;
      if (i + 1 < line.size() && line[i + 1] == '=') {
        spaced += '=';
        ++i;
      }
      spaced += ' ';
      prev = '=';
    } else if (c == ':') {
      spaced += " : ";
      prev = ':';
    } else if ((c == '+' || c == '-') && !(prev == 'e' || prev == 'E')) {
      spaced += ' ';
      spaced += c;
      spaced += ' ';
      prev = c;
    } else {
      spaced += c;
      prev = c;
    }
  }
  (void)line_no;
  return tokenize(spaced);
}

// Re-merges standalone sign tokens with the numeric token that follows.
std::vector<std::string> merge_signs(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if ((tokens[i] == "-" || tokens[i] == "+") && i + 1 < tokens.size()) {
      out.push_back(tokens[i] + tokens[i + 1]);
      ++i;
    } else {
      out.push_back(tokens[i]);
    }
  }
  return out;
}

mip::MipModel read_lp(const std::string& text) {
  ModelAssembler assembler;
  LpSection section = LpSection::None;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;

  // Constraint/objective accumulation can span lines until a relation is
  // seen; the writer emits one row per line, so keep it simple per line.
  while (std::getline(is, line)) {
    ++line_no;
    if (auto pos = line.find('\\'); pos != std::string::npos) line = line.substr(0, pos);
    std::vector<std::string> raw = tokenize(line);
    if (raw.empty()) continue;
    LpSection next = classify_section(lower_copy(raw[0]));
    if (next != LpSection::None &&
        !(next == LpSection::Constraints && raw.size() > 2)) {
      section = next;
      if (section == LpSection::End) break;
      continue;
    }

    std::vector<std::string> tokens = lp_tokens(line, line_no);
    if (tokens.empty()) continue;

    switch (section) {
      case LpSection::Objective:
      case LpSection::Constraints: {
        std::string name;
        std::size_t at = 0;
        if (tokens.size() >= 2 && tokens[1] == ":") {
          name = tokens[0];
          at = 2;
        }
        std::vector<std::pair<int, double>> terms;
        double sign = 1;
        double coeff = 1;
        bool have_coeff = false;
        mip::Relation rel = mip::Relation::Equal;
        bool have_rel = false;
        double rhs = 0;
        while (at < tokens.size()) {
          const std::string& t = tokens[at];
          if (t == "+") { if (!have_coeff) sign = 1; ++at; continue; }
          if (t == "-") { sign = have_coeff ? sign : -1; if (have_coeff) coeff = -coeff; ++at; continue; }
          if (is_relation(t)) {
            rel = to_relation(t);
            have_rel = true;
            ++at;
            continue;
          }
          char c0 = t[0];
          if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.') {
            double v = parse_number(t, line_no);
            if (have_rel) {
              rhs = sign * v;
              sign = 1;
            } else {
              coeff = sign * v;
              have_coeff = true;
              sign = 1;
            }
            ++at;
            continue;
          }
          // variable name
          double c = have_coeff ? coeff : sign;
          terms.emplace_back(assembler.var(t), c);
          sign = 1;
          coeff = 1;
          have_coeff = false;
          ++at;
        }
        if (section == LpSection::Objective) {
          for (const auto& [idx, c] : terms) {
            if (c != 0) assembler.model.objective.emplace_back(idx, c);
          }
        } else {
          if (!have_rel) {
            throw Error("parse error at line " + std::to_string(line_no) +
                        ": constraint without relation");
          }
          mip::LinearConstraint row;
          row.name = name.empty()
                         ? "c" + std::to_string(assembler.model.constraints.size())
                         : name;
          row.terms = terms;
          row.relation = rel;
          row.rhs = rhs;
          row.family = "imported";
          assembler.model.constraints.push_back(std::move(row));
        }
        break;
      }
      case LpSection::Bounds: {
        // Forms: "lo <= x <= hi", "x >= lo", "x <= hi", "x = v", "x free"
        tokens = merge_signs(tokens);
        if (tokens.size() == 2 && lower_copy(tokens[1]) == "free") {
          int j = assembler.var(tokens[0]);
          assembler.model.variables[j].lower = -kUnbounded;
          assembler.model.variables[j].upper = kUnbounded;
        } else if (tokens.size() == 3) {
          int j = assembler.var(tokens[0]);
          double v = parse_number(tokens[2], line_no);
          if (tokens[1] == ">=" || tokens[1] == ">") {
            assembler.model.variables[j].lower = v;
          } else if (tokens[1] == "<=" || tokens[1] == "<") {
            assembler.model.variables[j].upper = v;
          } else if (tokens[1] == "=") {
            assembler.model.variables[j].lower = v;
            assembler.model.variables[j].upper = v;
          } else {
            throw Error("parse error at line " + std::to_string(line_no));
          }
        } else if (tokens.size() == 5) {
          double lo = parse_number(tokens[0], line_no);
          double hi = parse_number(tokens[4], line_no);
          int j = assembler.var(tokens[2]);
          assembler.model.variables[j].lower = lo;
          assembler.model.variables[j].upper = hi;
        } else {
          throw Error("parse error at line " + std::to_string(line_no) +
                      ": malformed bound");
        }
        break;
      }
      case LpSection::Binaries: {
        for (const auto& t : tokens) {
          int j = assembler.var(t);
          assembler.model.variables[j].integrality = mip::Integrality::Binary;
          assembler.model.variables[j].lower = 0;
          assembler.model.variables[j].upper = 1;
        }
        break;
      }
      case LpSection::Generals:
        break;  // accepted, no-op
      case LpSection::None:
        throw Error("parse error at line " + std::to_string(line_no) +
                    ": content before any section");
      case LpSection::End:
        break;
    }
  }
  return assembler.take();
}

// --- MPS reader (free format, subset write_mps emits) ------------------

mip::MipModel read_mps(const std::string& text) {
  ModelAssembler assembler;
  std::map<std::string, std::size_t> row_pos;
  std::string section;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  bool in_integer = false;
  std::string objective_row = "obj";

  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '*') continue;
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      section = lower_copy(tokens[0]);
      if (section == "endata") break;
      if (section == "ranges") {
        throw Error("parse error at line " + std::to_string(line_no) +
                    ": RANGES section not supported");
      }
      continue;
    }
    if (section == "rows") {
      if (tokens.size() != 2) {
        throw Error("parse error at line " + std::to_string(line_no));
      }
      std::string type = lower_copy(tokens[0]);
      if (type == "n") {
        objective_row = tokens[1];
        continue;
      }
      mip::LinearConstraint row;
      row.name = tokens[1];
      row.relation = type == "l"   ? mip::Relation::LessEqual
                     : type == "g" ? mip::Relation::GreaterEqual
                                   : mip::Relation::Equal;
      row.family = "imported";
      row_pos[row.name] = assembler.model.constraints.size();
      assembler.model.constraints.push_back(std::move(row));
    } else if (section == "columns") {
      if (tokens.size() >= 3 && tokens[1] == "'MARKER'") {
        in_integer = tokens[2] == "'INTORG'";
        continue;
      }
      if (tokens.size() < 3 || tokens.size() % 2 == 0) {
        throw Error("parse error at line " + std::to_string(line_no) +
                    ": malformed COLUMNS entry");
      }
      int j = assembler.var(tokens[0]);
      if (in_integer) {
        assembler.model.variables[j].integrality = mip::Integrality::Binary;
        assembler.model.variables[j].upper = 1;
      }
      for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
        double coeff = parse_number(tokens[k + 1], line_no);
        if (tokens[k] == objective_row) {
          if (coeff != 0) assembler.model.objective.emplace_back(j, coeff);
          continue;
        }
        auto it = row_pos.find(tokens[k]);
        if (it == row_pos.end()) {
          throw Error("parse error at line " + std::to_string(line_no) +
                      ": unknown row '" + tokens[k] + "'");
        }
        assembler.model.constraints[it->second].terms.emplace_back(j, coeff);
      }
    } else if (section == "rhs") {
      for (std::size_t k = 1; k + 1 < tokens.size(); k += 2) {
        auto it = row_pos.find(tokens[k]);
        if (it == row_pos.end()) {
          throw Error("parse error at line " + std::to_string(line_no) +
                      ": unknown row '" + tokens[k] + "'");
        }
        assembler.model.constraints[it->second].rhs = parse_number(tokens[k + 1], line_no);
      }
    } else if (section == "bounds") {
      if (tokens.size() < 3) {
        throw Error("parse error at line " + std::to_string(line_no));
      }
      std::string type = lower_copy(tokens[0]);
      int j = assembler.var(tokens[2]);
      auto& v = assembler.model.variables[j];
      double value = tokens.size() > 3 ? parse_number(tokens[3], line_no) : 0;
      if (type == "up") v.upper = value;
      else if (type == "lo") v.lower = value;
      else if (type == "fx") { v.lower = value; v.upper = value; }
      else if (type == "fr") { v.lower = -kUnbounded; v.upper = kUnbounded; }
      else if (type == "mi") v.lower = -kUnbounded;
      else if (type == "pl") v.upper = kUnbounded;
      else if (type == "bv") { v.integrality = mip::Integrality::Binary; v.lower = 0; v.upper = 1; }
      else throw Error("parse error at line " + std::to_string(line_no) +
                       ": unknown bound type '" + tokens[0] + "'");
    } else if (section == "name") {
      // ignore
    }
  }
  return assembler.take();
}

}  // namespace

std::vector<std::string> export_names(const mip::MipModel& model) {
  std::vector<std::string> names;
  names.reserve(model.variables.size());
  for (const auto& v : model.variables) names.push_back(v.name);
  return sanitize_all(names, "variable");
}

std::string export_model(const mip::MipModel& model, ModelFormat format) {
  if (model.variables.empty()) throw Error("export: model has no variables");
  return format == ModelFormat::LpText ? write_lp(model) : write_mps(model);
}

mip::MipModel import_model(const std::string& text, ModelFormat format) {
  return format == ModelFormat::LpText ? read_lp(text) : read_mps(text);
}

ImportedSolution import_solution(const mip::MipModel& model, const std::string& text) {
  std::vector<std::string> exported = export_names(model);
  std::map<std::string, int> lookup;
  for (std::size_t j = 0; j < exported.size(); ++j) {
    lookup[exported[j]] = static_cast<int>(j);
    lookup[model.variables[j].name] = static_cast<int>(j);
  }

  std::vector<double> x(model.variables.size(), 0.0);
  std::vector<bool> seen(model.variables.size(), false);
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;
    char c0 = tokens[0][0];
    if (c0 == '#' || c0 == '*' || c0 == '\\' || tokens[0] == "//") continue;
    std::string head = lower_copy(tokens[0]);
    if (head == "objective" || head == "solution" || head == "status" ||
        head == "problem" || head == "=obj=" || head == "name" ||
        head.back() == ':') {
      continue;
    }
    auto it = lookup.find(tokens[0]);
    if (it == lookup.end()) {
      throw Error("solution line " + std::to_string(line_no) +
                  ": unknown variable '" + tokens[0] + "'");
    }
    if (tokens.size() < 2) {
      throw Error("solution line " + std::to_string(line_no) + ": missing value");
    }
    x[it->second] = parse_number(tokens[1], line_no);
    seen[it->second] = true;
  }

  ImportedSolution out;
  out.solution.status = milp::Status::Feasible;
  out.solution.raw = x;
  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    if (!seen[j]) out.missing.push_back(model.variables[j].name);
    double v = x[j];
    if (model.variables[j].integrality == mip::Integrality::Binary) {
      v = std::round(v);
      out.solution.raw[j] = v;
    }
    out.solution.values[model.variables[j].name] = v;
  }
  out.solution.objective = model.objective_value(out.solution.raw);
  out.solution.bound = -kUnbounded;
  return out;
}

}  // namespace vne::model_io
