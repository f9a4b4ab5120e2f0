#include "quadnet/scenario.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "quadnet/error.hpp"

namespace quadnet {

namespace {

namespace fs = std::filesystem;

struct SourceLine {
  std::string text;
  std::string origin;  // file name for messages, empty for inline text
  std::size_t number = 0;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t skip_space(std::string_view s, std::size_t pos) {
  while (pos < s.size() && is_space(s[pos])) ++pos;
  return pos;
}

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return s.substr(b, e - b);
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
  return true;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void flatten(std::string_view text, const fs::path& base, const std::string& origin, std::set<fs::path>& active,
             std::vector<SourceLine>& out) {
  std::size_t number = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++number;
    pos = nl + 1;

    std::string_view body = trim(std::string_view(line).substr(0, line.find('#')));
    if (body.rfind("include", 0) == 0 && (body.size() == 7 || is_space(body[7]))) {
      const std::string_view file = trim(body.substr(7));
      if (file.empty()) throw ParseError(origin + "include needs a file name", number, line.find("include") + 1);
      const fs::path target = fs::weakly_canonical(base / fs::path(std::string(file)));
      if (active.count(target)) throw ParseError(origin + "include cycle through " + target.string(), number, 1);
      if (!fs::exists(target))
        throw ParseError(origin + "included file not found: " + target.string(), number, line.find(file) + 1);
      active.insert(target);
      flatten(read_file(target), target.parent_path(), target.filename().string() + ": ", active, out);
      active.erase(target);
      continue;
    }
    out.push_back({std::move(line), origin, number});
  }
}

class Parser {
 public:
  explicit Parser(Scenario& s) : s_(s) {}

  void run(const std::vector<SourceLine>& lines) {
    bool any = false;
    for (const auto& l : lines) {
      cur_ = &l;
      std::string_view line = l.text;
      line = line.substr(0, line.find('#'));
      const std::size_t start = skip_space(line, 0);
      if (trim(line).empty()) continue;
      any = true;
      std::size_t kw_end = start;
      while (kw_end < line.size() && !is_space(line[kw_end]) && line[kw_end] != '(') ++kw_end;
      const std::string_view kw = line.substr(start, kw_end - start);
      const std::size_t rest = skip_space(line, kw_end);
      if (chart_) {
        chart_line(line, kw, start, rest);
      } else {
        top_line(line, kw, start, rest);
      }
    }
    if (chart_) fail("chart '" + chart_->name + "' is missing 'end'", 1);
    if (!any) throw ParseError("no declarations", 1, 1);
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t column) const {
    throw ParseError(cur_->origin + what, cur_->number, column);
  }

  const VarTablePtr& vars(std::size_t column) {
    if (!s_.vars) {
      if (mu_.empty() && x_.empty()) fail("variables must be declared with 'vars' first", column);
      s_.vars = make_var_table(mu_, x_);
    }
    return s_.vars;
  }

  Polynomial expr(std::string_view line, std::size_t pos, std::size_t end) {
    const std::string_view text = line.substr(pos, end - pos);
    if (trim(text).empty()) fail("expected an expression", pos + 1);
    return parse_polynomial(text, vars(pos + 1), Field::rationals(), cur_->number, pos, &s_.defs);
  }
  Polynomial expr(std::string_view line, std::size_t pos) { return expr(line, pos, line.size()); }

  std::vector<Polynomial> expr_list(std::string_view line, std::size_t pos) {
    std::vector<std::size_t> cols;
    const auto pieces = split_top_level(line.substr(pos), &cols);
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::size_t p = pos + cols[i];
      out.push_back(expr(line, p, p + pieces[i].size()));
    }
    return out;
  }

  std::size_t expect(std::string_view line, std::size_t pos, char c) {
    pos = skip_space(line, pos);
    if (pos >= line.size() || line[pos] != c) fail(std::string("expected '") + c + "'", pos + 1);
    return skip_space(line, pos + 1);
  }

  // Identifier at pos; returns the position just past it.
  std::size_t identifier(std::string_view line, std::size_t pos, std::string& out) {
    pos = skip_space(line, pos);
    std::size_t e = pos;
    while (e < line.size() && (std::isalnum(static_cast<unsigned char>(line[e])) || line[e] == '_' || line[e] == '\''))
      ++e;
    out = std::string(line.substr(pos, e - pos));
    if (!is_identifier(out)) fail("expected a name", pos + 1);
    return e;
  }

  void check_new(const std::string& name, std::size_t column) {
    if (!names_.insert(name).second) fail("duplicate name '" + name + "'", column);
  }

  std::size_t variable(const std::string& name, std::size_t column) {
    auto idx = vars(column)->find(name);
    if (!idx) fail("unknown variable '" + name + "'", column);
    return *idx;
  }

  // "v = expr, w = expr" into an assignment map.
  void assignments(std::string_view line, std::size_t pos, std::map<std::size_t, Polynomial>& out) {
    std::vector<std::size_t> cols;
    const auto pieces = split_top_level(line.substr(pos), &cols);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const std::size_t p = pos + cols[i];
      const std::string_view piece = line.substr(p, pieces[i].size());
      const std::size_t eq = piece.find('=');
      if (eq == std::string_view::npos) fail("expected 'variable = expression'", p + 1);
      const std::string name(trim(piece.substr(0, eq)));
      const std::size_t v = variable(name, p + 1);
      if (out.count(v)) fail("variable '" + name + "' assigned twice", p + 1);
      out.emplace(v, expr(line, p + eq + 1, p + piece.size()));
    }
  }

  void var_names(std::string_view text, std::size_t pos, std::vector<std::string>& out) {
    std::size_t i = 0;
    while (true) {
      i = skip_space(text, i);
      if (i >= text.size()) break;
      std::size_t e = i;
      while (e < text.size() && !is_space(text[e])) ++e;
      std::string name(text.substr(i, e - i));
      if (!is_identifier(name)) fail("invalid variable name '" + name + "'", pos + i + 1);
      if (!declared_.insert(name).second) fail("variable '" + name + "' declared twice", pos + i + 1);
      out.push_back(std::move(name));
      i = e;
    }
  }

  void top_line(std::string_view line, std::string_view kw, std::size_t start, std::size_t rest) {
    if (kw == "scenario") {
      if (!s_.name.empty()) fail("scenario name already set", start + 1);
      s_.name = std::string(trim(line.substr(rest)));
      if (s_.name.empty()) fail("scenario needs a name", rest + 1);
    } else if (kw == "vars") {
      if (s_.vars) fail("'vars' after the variable table is in use", start + 1);
      std::size_t colon = line.find(':', rest);
      if (colon == std::string_view::npos) fail("expected 'vars mu:' or 'vars x:'", rest + 1);
      const std::string_view block = trim(line.substr(rest, colon - rest));
      if (block == "mu")
        var_names(line.substr(colon + 1), colon + 1, mu_);
      else if (block == "x")
        var_names(line.substr(colon + 1), colon + 1, x_);
      else
        fail("unknown variable block '" + std::string(block) + "'", rest + 1);
    } else if (kw == "poly") {
      std::string name;
      std::size_t p = identifier(line, rest, name);
      check_new(name, rest + 1);
      if (vars(rest + 1)->find(name)) fail("'" + name + "' is a variable", rest + 1);
      p = expect(line, p, '=');
      s_.defs.emplace(name, Definition{{}, expr(line, p)});
    } else if (kw == "func") {
      std::string name;
      std::size_t p = identifier(line, rest, name);
      check_new(name, rest + 1);
      p = expect(line, p, '(');
      const std::size_t close = line.find(')', p);
      if (close == std::string_view::npos) fail("expected ')'", line.size() + 1);
      Definition def{{}, Polynomial(vars(p), Field::rationals())};
      std::vector<std::size_t> cols;
      const auto params = split_top_level(line.substr(p, close - p), &cols);
      for (std::size_t i = 0; i < params.size(); ++i) {
        const std::size_t v = variable(params[i], p + cols[i] + 1);
        for (std::size_t q : def.params)
          if (q == v) fail("repeated parameter '" + params[i] + "'", p + cols[i] + 1);
        def.params.push_back(v);
      }
      if (def.params.empty()) fail("function needs at least one parameter", p + 1);
      p = expect(line, close + 1, '=');
      def.body = expr(line, p);
      s_.defs.emplace(name, std::move(def));
    } else if (kw == "map") {
      std::string name;
      std::size_t p = identifier(line, rest, name);
      check_new(name, rest + 1);
      p = expect(line, p, ':');
      const std::size_t eq = line.find('=', p);
      if (eq == std::string_view::npos) fail("expected '='", line.size() + 1);
      PolyMap m;
      std::vector<std::string> targets;
      std::set<std::string> seen;
      std::size_t i = p;
      while ((i = skip_space(line, i)) < eq) {
        std::size_t e = i;
        while (e < eq && !is_space(line[e])) ++e;
        const std::string t(line.substr(i, e - i));
        if (!seen.insert(t).second) fail("repeated target '" + t + "'", i + 1);
        m.targets.push_back(variable(t, i + 1));
        i = e;
      }
      m.components = expr_list(line, eq + 1);
      if (m.components.size() != m.targets.size())
        fail("map has " + std::to_string(m.targets.size()) + " targets but " + std::to_string(m.components.size()) +
                 " components",
             eq + 2);
      try {
        m.validate();
      } catch (const DomainError& e) {
        fail(e.what(), eq + 2);
      }
      s_.maps.emplace(name, std::move(m));
    } else if (kw == "locus") {
      std::string name;
      std::size_t p = identifier(line, rest, name);
      check_new(name, rest + 1);
      p = expect(line, p, '=');
      s_.loci.push_back({name, expr_list(line, p)});
    } else if (kw == "chart") {
      std::string name;
      const std::size_t p = identifier(line, rest, name);
      if (!trim(line.substr(p)).empty()) fail("unexpected text after chart name", p + 1);
      check_new(name, rest + 1);
      vars(rest + 1);
      s_.charts.push_back(ChartSpec{});
      chart_ = &s_.charts.back();
      chart_->name = name;
    } else if (kw == "chow") {
      chow_line(line, rest);
    } else if (kw == "table") {
      table_line(line, rest);
    } else if (kw == "check") {
      check_line(line, rest);
    } else if (kw == "end") {
      fail("'end' outside a chart block", start + 1);
    } else {
      fail("unknown declaration '" + std::string(kw) + "'", start + 1);
    }
  }

  void chart_line(std::string_view line, std::string_view kw, std::size_t start, std::size_t rest) {
    ChartSpec& c = *chart_;
    auto single = [&](std::optional<Polynomial>& slot) {
      if (slot) fail("'" + std::string(kw) + "' given twice", start + 1);
      slot = expr(line, expect(line, rest, '='));
    };
    auto list = [&](std::vector<Polynomial>& slot) {
      if (!slot.empty()) fail("'" + std::string(kw) + "' given twice", start + 1);
      slot = expr_list(line, expect(line, rest, '='));
    };
    if (kw == "end") {
      if (!trim(line.substr(rest)).empty()) fail("unexpected text after 'end'", rest + 1);
      if (c.extension.empty()) fail("chart '" + c.name + "' has no extension", start + 1);
      chart_ = nullptr;
    } else if (kw == "parent") {
      std::string name;
      identifier(line, rest, name);
      bool found = false;
      for (const auto& other : s_.charts) found = found || (&other != &c && other.name == name);
      if (!found) fail("unknown parent chart '" + name + "'", rest + 1);
      c.parent = name;
    } else if (kw == "subst") {
      assignments(line, rest, c.substitution);
    } else if (kw == "specialize") {
      assignments(line, rest, c.specialization);
    } else if (kw == "dehomogenize") {
      assignments(line, rest, c.dehomogenize);
    } else if (kw == "exceptional") {
      single(c.exceptional);
    } else if (kw == "equation") {
      single(c.equation);
    } else if (kw == "exceptional_locus") {
      single(c.exceptional_locus);
    } else if (kw == "extension") {
      list(c.extension);
    } else if (kw == "image") {
      list(c.image);
    } else if (kw == "undefined") {
      list(c.undefined_locus);
    } else if (kw == "erratum") {
      erratum_line(line, rest);
    } else {
      fail("unknown chart field '" + std::string(kw) + "'", start + 1);
    }
  }

  void erratum_line(std::string_view line, std::size_t rest) {
    const std::size_t eq = line.find('=', rest);
    if (eq == std::string_view::npos) fail("expected '='", line.size() + 1);
    const std::string target(trim(line.substr(rest, eq - rest)));
    Erratum::Field kind = Erratum::Field::Equation;
    std::size_t index = 0;
    std::string field = target;
    const std::size_t dot = target.find('.');
    if (dot != std::string::npos) {
      field = target.substr(0, dot);
      const std::string idx = target.substr(dot + 1);
      if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos || std::stoul(idx) == 0)
        fail("erratum position must be a positive integer", rest + dot + 2);
      index = std::stoul(idx) - 1;
    }
    if (field == "equation")
      kind = Erratum::Field::Equation;
    else if (field == "exceptional_locus")
      kind = Erratum::Field::ExceptionalLocus;
    else if (field == "extension")
      kind = Erratum::Field::Extension;
    else if (field == "image")
      kind = Erratum::Field::Image;
    else
      fail("unknown erratum field '" + field + "'", rest + 1);
    const bool positional = kind == Erratum::Field::Extension || kind == Erratum::Field::Image;
    if (positional != (dot != std::string::npos))
      fail(positional ? "erratum on '" + field + "' needs a position" : "'" + field + "' takes no position",
           rest + 1);
    const std::size_t bar = line.find('|', eq);
    Erratum e{kind, index, expr(line, eq + 1, bar == std::string_view::npos ? line.size() : bar), {}};
    if (bar != std::string_view::npos) e.note = std::string(trim(line.substr(bar + 1)));
    chart_->errata.push_back(std::move(e));
  }

  void chow_line(std::string_view line, std::size_t rest) {
    std::string name;
    std::size_t p = identifier(line, rest, name);
    check_new(name, rest + 1);
    p = skip_space(line, p);
    if (line.substr(p, 2) != "in") fail("expected 'in P<a>xP<b>'", p + 1);
    p = skip_space(line, p + 2);
    const std::size_t eq = line.find('=', p);
    if (eq == std::string_view::npos) fail("expected '='", line.size() + 1);
    const std::string ambient(trim(line.substr(p, eq - p)));
    int a = -1, b = -1;
    char tail = 0;
    if (std::sscanf(ambient.c_str(), "P%dxP%d%c", &a, &b, &tail) != 2 || a < 0 || b < 0)
      fail("ambient must look like P2xP3", p + 1);
    std::size_t q = skip_space(line, eq + 1);
    if (line.substr(q, 2) == "ci" && (q + 2 >= line.size() || is_space(line[q + 2]) || line[q + 2] == '(')) {
      std::vector<std::pair<long, long>> degs;
      q += 2;
      while ((q = skip_space(line, q)) < line.size()) {
        long d = 0, e = 0;
        int used = 0;
        const std::string piece(line.substr(q));
        if (std::sscanf(piece.c_str(), " ( %ld , %ld )%n", &d, &e, &used) != 2 || used == 0)
          fail("expected a bidegree like (1,2)", q + 1);
        degs.emplace_back(d, e);
        q += static_cast<std::size_t>(used);
      }
      if (degs.empty()) fail("'ci' needs at least one bidegree", q + 1);
      s_.classes.emplace(name, ci_class(a, b, degs));
      return;
    }
    static const VarTablePtr gvars = make_var_table({"g1"}, {"g2"});
    const Polynomial f = parse_polynomial(line.substr(q), gvars, Field::rationals(), cur_->number, q);
    ChowClass c(a, b);
    for (const auto& [m, coeff] : f.terms()) {
      if (coeff.get_den() != 1) fail("Chow class coefficients must be integers", q + 1);
      c.set(static_cast<int>(m[0]), static_cast<int>(m[1]), c.coefficient(m[0], m[1]) + coeff.get_num());
    }
    s_.classes.emplace(name, std::move(c));
  }

  void table_line(std::string_view line, std::size_t rest) {
    std::string name;
    std::size_t p = identifier(line, rest, name);
    check_new(name, rest + 1);
    p = expect(line, p, '=');
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line.substr(p));
    } catch (const nlohmann::json::parse_error& e) {
      fail(std::string("malformed table: ") + e.what(), p + 1);
    }
    if (!j.is_array() || j.empty()) fail("table must be a nonempty list of rows", p + 1);
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    ExactMatrix m = ExactMatrix::integer(j.size(), cols);
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_array() || j[i].size() != cols) fail("table rows must have equal length", p + 1);
      for (std::size_t k = 0; k < cols; ++k) {
        if (!j[i][k].is_number_integer()) fail("table entries must be integers", p + 1);
        m.set(i, k, mpq_class(j[i][k].get<long>()));
      }
    }
    s_.tables.emplace(name, std::move(m));
  }

  void check_line(std::string_view line, std::size_t rest) {
    CheckRequest r;
    r.line = cur_->number;
    std::size_t p = identifier(line, rest, r.name);
    p = expect(line, p, '(');
    const std::string_view body = trim(line);
    if (body.empty() || body.back() != ')') fail("expected ')' at end of check", line.size() + 1);
    const std::size_t close = line.find_last_of(')');
    std::vector<std::size_t> cols;
    r.args = split_top_level(line.substr(p, close - p), &cols);
    for (std::size_t c : cols) r.arg_columns.push_back(p + c);
    r.text = std::string(trim(line.substr(rest)));
    s_.checks.push_back(std::move(r));
  }

  Scenario& s_;
  const SourceLine* cur_ = nullptr;
  ChartSpec* chart_ = nullptr;
  std::vector<std::string> mu_, x_;
  std::set<std::string> declared_, names_;
};

Scenario parse_lines(const std::vector<SourceLine>& lines) {
  Scenario s;
  Parser(s).run(lines);
  for (const auto& l : lines) s.flattened += l.text + "\n";
  return s;
}

}  // namespace

std::vector<std::string> split_top_level(std::string_view text, std::vector<std::size_t>* columns) {
  std::vector<std::string> out;
  if (columns) columns->clear();
  if (trim(text).empty()) return out;
  int depth = 0;
  std::size_t start = 0;
  auto push = [&](std::size_t end) {
    std::size_t b = start, e = end;
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    out.emplace_back(text.substr(b, e - b));
    if (columns) columns->push_back(b);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      push(i);
      start = i + 1;
    }
  }
  push(text.size());
  return out;
}

Polynomial Scenario::parse(std::string_view expr, std::size_t line, std::size_t column) const {
  if (!vars) throw DomainError("scenario declares no variables");
  return parse_polynomial(expr, vars, Field::rationals(), line, column, &defs);
}

const PolyMap& Scenario::map(std::string_view name) const {
  auto it = maps.find(std::string(name));
  if (it == maps.end()) throw DomainError("unknown map '" + std::string(name) + "'");
  return it->second;
}

const NamedLocus& Scenario::locus(std::string_view name) const {
  for (const auto& l : loci)
    if (l.name == name) return l;
  throw DomainError("unknown locus '" + std::string(name) + "'");
}

const ChartSpec& Scenario::chart(std::string_view name) const {
  for (const auto& c : charts)
    if (c.name == name) return c;
  throw DomainError("unknown chart '" + std::string(name) + "'");
}

const ChowClass& Scenario::chow(std::string_view name) const {
  auto it = classes.find(std::string(name));
  if (it == classes.end()) throw DomainError("unknown Chow class '" + std::string(name) + "'");
  return it->second;
}

const ExactMatrix& Scenario::table(std::string_view name) const {
  auto it = tables.find(std::string(name));
  if (it == tables.end()) throw DomainError("unknown table '" + std::string(name) + "'");
  return it->second;
}

Scenario parse_scenario(std::string_view text, const fs::path& base) {
  std::vector<SourceLine> lines;
  std::set<fs::path> active;
  flatten(text, base.empty() ? fs::current_path() : base, "", active, lines);
  return parse_lines(lines);
}

Scenario load_scenario(const fs::path& path) {
  const fs::path full = fs::weakly_canonical(path);
  std::vector<SourceLine> lines;
  std::set<fs::path> active{full};
  flatten(read_file(full), full.parent_path(), "", active, lines);
  return parse_lines(lines);
}

}  // namespace quadnet
