#include "famfile.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace ct {
namespace {

struct Line {
  std::string text;
  std::size_t lineno = 0;  // 1-based, of the first physical line
};

[[noreturn]] void fail(ErrCode code, std::size_t lineno, const std::string& msg) {
  throw CtError(code, "line " + std::to_string(lineno) + ": " + msg);
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Physical lines -> logical lines: comments ('#' to end of line) are removed,
// blanks dropped, and a line ending in ',' continues on the next one.
std::vector<Line> logical_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream in(text);
  std::string phys;
  std::size_t lineno = 0;
  bool cont = false;
  while (std::getline(in, phys)) {
    ++lineno;
    std::size_t hash = phys.find('#');
    if (hash != std::string::npos) phys.erase(hash);
    std::string t = strip(phys);
    if (t.empty()) {
      if (cont) fail(ErrCode::parse, lineno, "dangling ',' continuation");
      continue;
    }
    if (cont) {
      out.back().text += " " + t;
    } else {
      out.push_back(Line{t, lineno});
    }
    cont = out.back().text.back() == ',';
  }
  if (cont) fail(ErrCode::parse, out.back().lineno, "dangling ',' continuation");
  return out;
}

// Split on commas outside parentheses; pieces are stripped and non-empty.
std::vector<std::string> split_commas(const std::string& s, std::size_t lineno) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char ch : s) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth < 0) fail(ErrCode::parse, lineno, "unbalanced ')'");
    if (ch == ',' && depth == 0) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(strip(cur));
  if (depth != 0) fail(ErrCode::parse, lineno, "unbalanced '('");
  for (const auto& p : out)
    if (p.empty()) fail(ErrCode::parse, lineno, "empty list entry");
  return out;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

bool valid_ident(const std::string& s) {
  if (s.empty() || (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Poly parse_poly(const std::string& text, const VarPool& pool, std::size_t lineno) {
  ParseError err;
  auto p = poly_parse(text, pool, &err);
  if (!p) fail(ErrCode::parse, lineno, "in '" + text + "': " + err.message);
  return *p;
}

RatFunc parse_ratfunc(const std::string& text, const VarPool& pool, std::size_t lineno) {
  ParseError err;
  auto p = ratfunc_parse(text, pool, &err);
  if (!p) fail(ErrCode::parse, lineno, "in '" + text + "': " + err.message);
  return *p;
}

Rational parse_rational(const std::string& text, const VarPool& pool, std::size_t lineno) {
  Poly p = parse_poly(text, pool, lineno);
  if (!p.is_constant()) fail(ErrCode::parse, lineno, "'" + text + "' is not a constant");
  return p.constant_value();
}

bool in_list(const std::vector<VarId>& vs, VarId v) {
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

void check_support(const std::set<VarId>& support, const std::vector<const std::vector<VarId>*>& allowed,
                   const Family& f, std::size_t lineno, const std::string& what) {
  for (VarId v : support) {
    bool ok = false;
    for (const auto* lst : allowed)
      if (in_list(*lst, v)) ok = true;
    if (!ok)
      fail(ErrCode::semantic, lineno,
           what + " may not involve variable '" + f.pool.name(v) + "'");
  }
}

std::set<VarId> poly_support(const Poly& p) {
  std::set<VarId> s;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.entries()) s.insert(v);
  return s;
}

}  // namespace

std::unique_ptr<Family> family_parse(const std::string& text) {
  auto lines = logical_lines(text);
  if (lines.empty()) throw CtError(ErrCode::parse, "empty family description");

  auto fam = std::make_unique<Family>();
  Family& f = *fam;
  Component* cur = nullptr;
  bool have_family = false;

  auto declare = [&](std::vector<VarId>& into, const std::vector<std::string>& words,
                     std::size_t lineno) {
    if (words.size() < 2) fail(ErrCode::parse, lineno, "expected variable names after '" + words[0] + "'");
    for (std::size_t i = 1; i < words.size(); ++i) {
      if (!valid_ident(words[i]))
        fail(ErrCode::parse, lineno, "'" + words[i] + "' is not a valid variable name");
      try {
        into.push_back(f.pool.add(words[i]));
      } catch (const std::exception&) {
        fail(ErrCode::semantic, lineno, "duplicate variable '" + words[i] + "'");
      }
    }
  };

  for (const auto& ln : lines) {
    const std::string& s = ln.text;
    std::size_t no = ln.lineno;
    auto words = split_words(s);
    const std::string& head = words[0];

    if (head == "family") {
      if (have_family) fail(ErrCode::parse, no, "duplicate 'family' declaration");
      if (words.size() != 2) fail(ErrCode::parse, no, "expected 'family NAME'");
      f.name = words[1];
      have_family = true;
      continue;
    }
    if (!have_family) fail(ErrCode::parse, no, "the document must start with 'family NAME'");

    if (head == "base") { declare(f.base_vars, words, no); continue; }
    if (head == "chart") { declare(f.chart_vars, words, no); continue; }
    if (head == "fiber") { declare(f.fiber_vars, words, no); continue; }
    if (head == "params") { declare(f.param_vars, words, no); continue; }

    auto rest_after = [&](const std::string& key) {
      return strip(s.substr(key.size()));
    };

    if (head == "base_ideal:") {
      for (const auto& piece : split_commas(rest_after(head), no)) {
        Poly p = parse_poly(piece, f.pool, no);
        check_support(poly_support(p), {&f.base_vars}, f, no, "base_ideal");
        f.base_gens.push_back(std::move(p));
      }
      continue;
    }
    if (head == "family_ideal:") {
      for (const auto& piece : split_commas(rest_after(head), no)) {
        Poly p = parse_poly(piece, f.pool, no);
        check_support(poly_support(p), {&f.base_vars, &f.chart_vars, &f.fiber_vars}, f, no,
                      "family_ideal");
        f.family_ideal.push_back(std::move(p));
      }
      continue;
    }
    if (head == "subst:") {
      for (const auto& piece : split_commas(rest_after(head), no)) {
        std::size_t eq = piece.find('=');
        if (eq == std::string::npos) fail(ErrCode::parse, no, "expected 'var = expression'");
        std::string lhs = strip(piece.substr(0, eq));
        auto v = f.pool.find(lhs);
        if (!v || !in_list(f.base_vars, *v))
          fail(ErrCode::semantic, no, "'" + lhs + "' is not a base variable");
        if (f.param_subst.count(*v))
          fail(ErrCode::semantic, no, "duplicate substitution for '" + lhs + "'");
        Poly rhs = parse_poly(strip(piece.substr(eq + 1)), f.pool, no);
        check_support(poly_support(rhs), {&f.param_vars, &f.chart_vars}, f, no, "substitution");
        f.param_subst.emplace(*v, std::move(rhs));
      }
      continue;
    }
    if (head == "component") {
      // component NAME [weight N]
      if (words.size() != 2 && !(words.size() == 4 && words[1] != "weight" && words[2] == "weight"))
        fail(ErrCode::parse, no, "expected 'component NAME [weight N]'");
      Component c;
      c.name = words[1];
      if (!valid_ident(c.name)) fail(ErrCode::parse, no, "'" + c.name + "' is not a valid name");
      if (words.size() == 4) {
        try {
          std::size_t used = 0;
          c.weight = std::stoi(words[3], &used);
          if (used != words[3].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
          fail(ErrCode::parse, no, "'" + words[3] + "' is not an integer weight");
        }
        if (c.weight <= 0) fail(ErrCode::semantic, no, "weight must be positive");
      }
      for (const auto& other : f.components)
        if (other.name == c.name)
          fail(ErrCode::semantic, no, "duplicate component '" + c.name + "'");
      f.components.push_back(std::move(c));
      cur = &f.components.back();
      continue;
    }
    if (head == "over:" || head == "ideal:" || head == "branch:") {
      if (!cur) fail(ErrCode::parse, no, "'" + head + "' must follow a 'component' line");
      auto pieces = split_commas(rest_after(head), no);
      if (head == "over:") {
        for (const auto& piece : pieces) {
          Poly p = parse_poly(piece, f.pool, no);
          check_support(poly_support(p), {&f.base_vars}, f, no, "over");
          cur->over_gens.push_back(std::move(p));
        }
      } else if (head == "ideal:") {
        for (const auto& piece : pieces) {
          Poly p = parse_poly(piece, f.pool, no);
          check_support(poly_support(p), {&f.base_vars, &f.chart_vars, &f.fiber_vars}, f, no,
                        "ideal");
          cur->ideal_gens.push_back(std::move(p));
        }
      } else {
        if (pieces.size() != f.fiber_vars.size())
          fail(ErrCode::semantic, no,
               "branch lists " + std::to_string(pieces.size()) + " values for " +
                   std::to_string(f.fiber_vars.size()) + " fiber variables");
        std::map<VarId, RatFunc> br;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
          RatFunc val = parse_ratfunc(pieces[i], f.pool, no);
          std::set<VarId> sup = val.support();
          for (VarId v : sup)
            if (in_list(f.fiber_vars, v))
              fail(ErrCode::semantic, no,
                   "branch value may not involve fiber variable '" + f.pool.name(v) + "'");
          br.emplace(f.fiber_vars[i], std::move(val));
        }
        cur->branches.push_back(std::move(br));
      }
      continue;
    }
    if (head == "stratum") {
      // stratum NAME at x=0, y=1/2
      if (words.size() < 3 || words[2] != "at") {
        // "at" may be glued to the assignments; re-split on the keyword.
        std::size_t at = s.find(" at ");
        if (words.size() < 2 || at == std::string::npos)
          fail(ErrCode::parse, no, "expected 'stratum NAME at var=value, ...'");
      }
      std::size_t at = s.find(" at ");
      std::string name = strip(s.substr(std::string("stratum").size(),
                                        at - std::string("stratum").size()));
      if (!valid_ident(name)) fail(ErrCode::parse, no, "'" + name + "' is not a valid name");
      for (const auto& other : f.strata)
        if (other.name == name) fail(ErrCode::semantic, no, "duplicate stratum '" + name + "'");
      Stratum st;
      st.name = name;
      for (const auto& piece : split_commas(strip(s.substr(at + 4)), no)) {
        std::size_t eq = piece.find('=');
        if (eq == std::string::npos) fail(ErrCode::parse, no, "expected 'var = value'");
        std::string lhs = strip(piece.substr(0, eq));
        auto v = f.pool.find(lhs);
        if (!v || (!in_list(f.base_vars, *v) && !in_list(f.chart_vars, *v)))
          fail(ErrCode::semantic, no, "'" + lhs + "' is not a base or chart variable");
        if (st.point.count(*v)) fail(ErrCode::semantic, no, "duplicate assignment for '" + lhs + "'");
        st.point.emplace(*v, parse_rational(strip(piece.substr(eq + 1)), f.pool, no));
      }
      f.strata.push_back(std::move(st));
      continue;
    }
    fail(ErrCode::parse, no, "unknown directive '" + head + "'");
  }

  // Document-level consistency.
  if (f.fiber_vars.empty()) throw CtError(ErrCode::semantic, "no fiber variables declared");
  if (f.components.empty()) throw CtError(ErrCode::semantic, "no components declared");
  for (const auto& c : f.components)
    if (c.branches.empty() && c.ideal_gens.empty() && f.family_ideal.empty())
      throw CtError(ErrCode::semantic,
                    "component '" + c.name + "' declares neither branches nor an ideal");
  return fam;
}

std::unique_ptr<Family> family_load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CtError(ErrCode::invalid_arg, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return family_parse(buf.str());
  } catch (const CtError& e) {
    throw CtError(e.code, path + ": " + e.what());
  }
}

std::string family_str(const Family& f) {
  std::ostringstream out;
  out << "family " << f.name << "\n";
  auto vars_line = [&](const char* kw, const std::vector<VarId>& vs) {
    if (vs.empty()) return;
    out << kw;
    for (VarId v : vs) out << " " << f.pool.name(v);
    out << "\n";
  };
  vars_line("base", f.base_vars);
  vars_line("chart", f.chart_vars);
  vars_line("fiber", f.fiber_vars);
  vars_line("params", f.param_vars);
  auto poly_list = [&](const char* kw, const std::vector<Poly>& ps) {
    if (ps.empty()) return;
    out << kw;
    for (std::size_t i = 0; i < ps.size(); ++i)
      out << (i ? ", " : " ") << poly_str(ps[i], f.pool);
    out << "\n";
  };
  poly_list("base_ideal:", f.base_gens);
  if (!f.param_subst.empty()) {
    out << "subst:";
    bool first = true;
    for (const auto& [v, p] : f.param_subst) {
      out << (first ? " " : ", ") << f.pool.name(v) << " = " << poly_str(p, f.pool);
      first = false;
    }
    out << "\n";
  }
  poly_list("family_ideal:", f.family_ideal);
  for (const auto& c : f.components) {
    out << "component " << c.name << " weight " << c.weight << "\n";
    poly_list("  over:", c.over_gens);
    poly_list("  ideal:", c.ideal_gens);
    for (const auto& br : c.branches) {
      out << "  branch:";
      for (std::size_t i = 0; i < f.fiber_vars.size(); ++i) {
        auto it = br.find(f.fiber_vars[i]);
        out << (i ? ", " : " ") << (it == br.end() ? "0" : ratfunc_str(it->second, f.pool));
      }
      out << "\n";
    }
  }
  for (const auto& st : f.strata) {
    out << "stratum " << st.name << " at";
    bool first = true;
    for (const auto& [v, val] : st.point) {
      out << (first ? " " : ", ") << f.pool.name(v) << " = " << val;
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace ct
