#include "forms.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ct {

std::optional<std::pair<FormKey, int>> wedge_keys(const FormKey& a, const FormKey& b) {
  FormKey out;
  out.d.reserve(a.d.size() + b.d.size());
  int sign = 1;
  std::size_t i = 0, j = 0;
  while (i < a.d.size() && j < b.d.size()) {
    if (a.d[i] == b.d[j]) return std::nullopt;
    if (a.d[i] < b.d[j]) {
      out.d.push_back(a.d[i++]);
    } else {
      // b.d[j] jumps over the remaining entries of a.
      if ((a.d.size() - i) % 2) sign = -sign;
      out.d.push_back(b.d[j++]);
    }
  }
  while (i < a.d.size()) out.d.push_back(a.d[i++]);
  while (j < b.d.size()) out.d.push_back(b.d[j++]);
  return std::make_pair(std::move(out), sign);
}

std::size_t RelativeForm::degree() const {
  std::size_t d = 0;
  for (const auto& [k, c] : terms) d = std::max(d, k.degree());
  return d;
}

bool RelativeForm::homogeneous(std::size_t deg) const {
  for (const auto& [k, c] : terms)
    if (k.degree() != deg) return false;
  return true;
}

RelativeForm RelativeForm::operator+(const RelativeForm& o) const {
  RelativeForm r = *this;
  for (const auto& [k, c] : o.terms) {
    auto it = r.terms.find(k);
    if (it == r.terms.end()) {
      r.terms.emplace(k, c);
    } else {
      RatFunc s = it->second + c;
      if (s.is_zero())
        r.terms.erase(it);
      else
        it->second = std::move(s);
    }
  }
  return r;
}

RelativeForm RelativeForm::operator-(const RelativeForm& o) const { return *this + (-o); }

RelativeForm RelativeForm::operator-() const {
  RelativeForm r;
  for (const auto& [k, c] : terms) r.terms.emplace(k, -c);
  return r;
}

RelativeForm RelativeForm::scale(const RatFunc& c) const {
  RelativeForm r;
  if (c.is_zero()) return r;
  for (const auto& [k, v] : terms) {
    RatFunc p = v * c;
    if (!p.is_zero()) r.terms.emplace(k, std::move(p));
  }
  return r;
}

RelativeForm RelativeForm::wedge(const RelativeForm& o) const {
  RelativeForm r;
  for (const auto& [k1, c1] : terms)
    for (const auto& [k2, c2] : o.terms) {
      auto merged = wedge_keys(k1, k2);
      if (!merged) continue;
      RatFunc c = c1 * c2;
      if (merged->second < 0) c = -c;
      if (c.is_zero()) continue;
      auto it = r.terms.find(merged->first);
      if (it == r.terms.end()) {
        r.terms.emplace(merged->first, std::move(c));
      } else {
        RatFunc s = it->second + c;
        if (s.is_zero())
          r.terms.erase(it);
        else
          it->second = std::move(s);
      }
    }
  return r;
}

bool RelativeForm::operator==(const RelativeForm& o) const {
  RelativeForm diff = *this - o;
  return diff.terms.empty();
}

RelativeForm d_over(const RelativeForm& w, const std::vector<VarId>& vars) {
  RelativeForm out;
  for (const auto& [k, c] : w.terms) {
    for (VarId v : vars) {
      if (std::find(k.d.begin(), k.d.end(), v) != k.d.end()) continue;
      RatFunc dc = c.derivative(v);
      if (dc.is_zero()) continue;
      auto merged = wedge_keys(FormKey{{v}}, k);
      if (!merged) continue;
      if (merged->second < 0) dc = -dc;
      RelativeForm term;
      term.terms.emplace(merged->first, std::move(dc));
      out = out + term;
    }
  }
  return out;
}

RelativeForm pullback_form(const RelativeForm& w, const std::map<VarId, RatFunc>& repl,
                           const std::vector<VarId>& chart_vars) {
  RelativeForm out;
  for (const auto& [k, c] : w.terms) {
    RelativeForm acc = RelativeForm::function(c.subst(repl));
    for (VarId v : k.d) {
      auto it = repl.find(v);
      RelativeForm factor;
      if (it == repl.end()) {
        factor = RelativeForm::differential(v);
      } else {
        for (VarId u : chart_vars) {
          RatFunc dv = it->second.derivative(u);
          if (dv.is_zero()) continue;
          factor = factor + RelativeForm::differential(u).scale(dv);
        }
      }
      acc = acc.wedge(factor);
      if (acc.is_zero()) break;
    }
    out = out + acc;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string form_str(const RelativeForm& w, const VarPool& pool) {
  if (w.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : w.terms) {
    std::string cs = ratfunc_str(c, pool);
    bool negated = false;
    std::string body;
    if (k.degree() == 0) {
      body = cs;
    } else {
      std::string wedge;
      for (std::size_t i = 0; i < k.d.size(); ++i) {
        if (i) wedge += "^";
        wedge += "d" + pool.name(k.d[i]);
      }
      if (cs == "1") {
        body = wedge;
      } else if (cs == "-1") {
        negated = true;
        body = wedge;
      } else {
        bool needs_parens = c.num().term_count() > 1 && c.is_poly();
        if (!c.is_poly()) needs_parens = true;
        if (!needs_parens && cs.front() == '-') {
          negated = true;
          cs = cs.substr(1);
        }
        body = (needs_parens ? "(" + cs + ")" : cs) + "*" + wedge;
      }
    }
    if (first) {
      if (negated) os << "-";
    } else {
      os << (negated ? " - " : " + ");
    }
    first = false;
    os << body;
  }
  return os.str();
}

// Parser: same expression grammar as polynomials, with differentials `d<var>`
// as extra atoms. '*' and '^' both wedge (on scalars they reduce to ordinary
// multiplication); '^' with a numeric literal is a power and requires a
// degree-0 base; '/' requires a degree-0 divisor.
namespace {

struct FormParser {
  const std::string& s;
  const VarPool& pool;
  std::size_t pos = 0;
  ParseError err;
  bool failed = false;

  FormParser(const std::string& text, const VarPool& p) : s(text), pool(p) {}

  void fail(const std::string& m) {
    if (!failed) {
      failed = true;
      err = {m, pos};
    }
  }
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool consume(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  RelativeForm parse_expr() {
    RelativeForm lhs = parse_term();
    while (!failed) {
      if (consume('+'))
        lhs = lhs + parse_term();
      else if (consume('-'))
        lhs = lhs - parse_term();
      else
        break;
    }
    return lhs;
  }

  RelativeForm parse_term() {
    RelativeForm lhs = parse_factor();
    while (!failed) {
      skip_ws();
      if (consume('*')) {
        lhs = lhs.wedge(parse_factor());
      } else if (pos < s.size() && s[pos] == '^') {
        // power only applies to scalars and numeric exponents; otherwise wedge
        std::size_t save = pos;
        ++pos;
        skip_ws();
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
          std::size_t start = pos;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
          unsigned long e = std::stoul(s.substr(start, pos - start));
          if (e > 64) {
            fail("exponent too large");
            break;
          }
          if (lhs.degree() != 0) {
            pos = save;
            fail("cannot raise a form of positive degree to a power");
            break;
          }
          RelativeForm r = RelativeForm::function(RatFunc::constant(1));
          for (unsigned long i = 0; i < e; ++i) r = r.wedge(lhs);
          lhs = r;
        } else {
          lhs = lhs.wedge(parse_factor());
        }
      } else if (consume('/')) {
        RelativeForm rhs = parse_factor();
        if (failed) break;
        if (rhs.degree() != 0 || rhs.terms.size() > 1) {
          fail("divisor must be a scalar");
          break;
        }
        if (rhs.is_zero()) {
          fail("division by zero");
          break;
        }
        RatFunc c = rhs.terms.begin()->second;
        lhs = lhs.scale(RatFunc::constant(1) / c);
      } else
        break;
    }
    return lhs;
  }

  RelativeForm parse_factor() {
    skip_ws();
    if (pos >= s.size()) {
      fail("unexpected end of input");
      return {};
    }
    char c = s[pos];
    if (c == '(') {
      ++pos;
      RelativeForm inner = parse_expr();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos;
      return -parse_factor();
    }
    if (c == '+') {
      ++pos;
      return parse_factor();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      mpz_class n(s.substr(start, pos - start));
      return RelativeForm::function(RatFunc::constant(Rational(n)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
        ++pos;
      std::string name = s.substr(start, pos - start);
      // A differential `d<var>` — unless the whole token names a variable.
      if (!pool.find(name) && name.size() > 1 && name[0] == 'd') {
        auto inner = pool.find(name.substr(1));
        if (inner) return RelativeForm::differential(*inner);
      }
      auto v = pool.find(name);
      if (!v) {
        pos = start;
        fail("unknown variable or differential '" + name + "'");
        return {};
      }
      return RelativeForm::function(RatFunc::variable(*v));
    }
    fail(std::string("unexpected character '") + c + "'");
    return {};
  }
};

}  // namespace

std::optional<RelativeForm> form_parse(const std::string& text, const VarPool& pool,
                                       ParseError* err) {
  FormParser p(text, pool);
  RelativeForm r;
  try {
    r = p.parse_expr();
  } catch (const std::exception& e) {
    p.fail(e.what());
  }
  p.skip_ws();
  if (!p.failed && p.pos != text.size()) p.fail("trailing input");
  if (p.failed) {
    if (err) *err = p.err;
    return std::nullopt;
  }
  return r;
}

}  // namespace ct
