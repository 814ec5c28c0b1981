#include "poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ct {

void Poly::add_term(const Monomial& m, const Rational& c) {
  if (rat_is_zero(c)) return;
  auto [it, inserted] = t_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (rat_is_zero(it->second)) t_.erase(it);
  }
}

Rational Poly::constant_value() const {
  if (t_.empty()) return 0;
  return t_.begin()->second;
}

Rational Poly::coeff_of(const Monomial& m) const {
  auto it = t_.find(m);
  return it == t_.end() ? Rational(0) : it->second;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.t_) add_term(m, -c);
  return *this;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [m, c] : t_) r.t_.emplace(m, -c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  for (const auto& [m1, c1] : t_)
    for (const auto& [m2, c2] : o.t_) r.add_term(m1 * m2, c1 * c2);
  return r;
}

Poly Poly::operator*(const Rational& c) const {
  Poly r;
  if (rat_is_zero(c)) return r;
  for (const auto& [m, k] : t_) r.t_.emplace(m, k * c);
  return r;
}

Poly Poly::pow(std::uint32_t n) const {
  Poly r = Poly::constant(1);
  Poly b = *this;
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

std::uint64_t Poly::degree() const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, m.degree());
  return d;
}

std::uint64_t Poly::degree_if(const std::function<bool(VarId)>& in) const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, m.degree_if(in));
  return d;
}

std::uint32_t Poly::degree_in(VarId v) const {
  std::uint32_t d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, m.exponent(v));
  return d;
}

std::pair<Monomial, Rational> Poly::leading(const MonomialOrder& ord) const {
  if (t_.empty()) throw std::logic_error("leading term of zero polynomial");
  auto best = t_.begin();
  for (auto it = std::next(t_.begin()); it != t_.end(); ++it)
    if (ord.greater(it->first, best->first)) best = it;
  return {best->first, best->second};
}

Poly Poly::derivative(VarId v) const {
  Poly r;
  for (const auto& [m, c] : t_) {
    std::uint32_t e = m.exponent(v);
    if (e == 0) continue;
    Monomial dm = *m.try_div(Monomial::var(v));
    r.add_term(dm, c * e);
  }
  return r;
}

Poly Poly::subst(const std::map<VarId, Poly>& repl) const {
  Poly r;
  for (const auto& [m, c] : t_) {
    Poly term = Poly::constant(c);
    for (const auto& [v, e] : m.entries()) {
      auto it = repl.find(v);
      if (it == repl.end())
        term = term * Poly::variable(v, e);
      else
        term = term * it->second.pow(e);
    }
    r += term;
  }
  return r;
}

Poly Poly::eval_partial(const std::map<VarId, Rational>& vals) const {
  std::map<VarId, Poly> repl;
  for (const auto& [v, q] : vals) repl.emplace(v, Poly::constant(q));
  return subst(repl);
}

Rational Poly::content() const {
  if (t_.empty()) return 1;
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& [m, c] : t_) {
    mpz_class n = abs(c.get_num());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
  }
  Rational r(num_gcd, den_lcm);
  r.canonicalize();
  return r;
}

std::set<VarId> Poly::support() const {
  std::set<VarId> s;
  for (const auto& [m, c] : t_)
    for (const auto& [v, e] : m.entries()) s.insert(v);
  return s;
}

std::map<std::uint32_t, Poly> Poly::collect(VarId v) const {
  std::map<std::uint32_t, Poly> out;
  for (const auto& [m, c] : t_) {
    std::uint32_t e = m.exponent(v);
    Monomial rest = m.restrict_to([&](VarId w) { return w != v; });
    out[e].add_term(rest, c);
  }
  return out;
}

std::map<Monomial, Poly> Poly::split_by(const std::function<bool(VarId)>& pred) const {
  std::map<Monomial, Poly> out;
  for (const auto& [m, c] : t_) {
    Monomial key = m.restrict_to(pred);
    Monomial rest = m.restrict_to([&](VarId w) { return !pred(w); });
    out[key].add_term(rest, c);
  }
  return out;
}

DivisionResult divide(const Poly& p, const std::vector<Poly>& divisors, const MonomialOrder& ord) {
  DivisionResult res;
  res.quotients.assign(divisors.size(), Poly{});
  std::vector<std::pair<Monomial, Rational>> lts;
  lts.reserve(divisors.size());
  for (const auto& g : divisors) lts.push_back(g.leading(ord));

  Poly work = p;
  while (!work.is_zero()) {
    auto [lm, lc] = work.leading(ord);
    bool reduced = false;
    for (std::size_t i = 0; i < divisors.size(); ++i) {
      auto q = lm.try_div(lts[i].first);
      if (!q) continue;
      Rational factor = lc / lts[i].second;
      Poly t;
      t.add_term(*q, factor);
      res.quotients[i] += t;
      work -= t * divisors[i];
      reduced = true;
      break;
    }
    if (!reduced) {
      res.remainder.add_term(lm, lc);
      Poly t;
      t.add_term(lm, lc);
      work -= t;
    }
  }
  return res;
}

std::optional<Poly> try_exact_div(const Poly& p, const Poly& g) {
  if (g.is_zero()) return std::nullopt;
  if (p.is_zero()) return Poly{};
  std::set<VarId> vars = p.support();
  for (VarId v : g.support()) vars.insert(v);
  MonomialOrder ord = MonomialOrder::grevlex(std::vector<VarId>(vars.begin(), vars.end()));
  DivisionResult d = divide(p, {g}, ord);
  if (!d.remainder.is_zero()) return std::nullopt;
  return d.quotients[0];
}

static void monomials_rec(const std::vector<VarId>& vars, std::size_t i, std::uint32_t left,
                          Monomial cur, std::vector<Monomial>& out) {
  if (i == vars.size()) {
    out.push_back(cur);
    return;
  }
  for (std::uint32_t e = 0; e <= left; ++e)
    monomials_rec(vars, i + 1, left - e, cur * Monomial::var(vars[i], e), out);
}

std::vector<Monomial> monomials_of_degree(const std::vector<VarId>& vars, std::uint32_t d) {
  std::vector<Monomial> all, out;
  monomials_rec(vars, 0, d, Monomial{}, all);
  for (auto& m : all)
    if (m.degree() == d) out.push_back(m);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Monomial> monomials_up_to(const std::vector<VarId>& vars, std::uint32_t d) {
  std::vector<Monomial> out;
  for (std::uint32_t k = 0; k <= d; ++k) {
    auto layer = monomials_of_degree(vars, k);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

// --------------------------------------------------------------------------
// RatFunc

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::runtime_error("zero denominator");
  normalize();
}

Poly RatFunc::as_poly() const {
  if (!is_poly()) throw std::logic_error("not a polynomial");
  return num_ * (Rational(1) / den_.constant_value());
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  if (!den_.is_constant()) {
    if (auto q = try_exact_div(num_, den_)) {
      num_ = *q;
      den_ = Poly::constant(1);
    }
  }
  Rational c = den_.content();
  if (den_.terms().rbegin()->second < 0) c = -c;  // positive structurally-largest term
  num_ = num_ * (1 / c);
  den_ = den_ * (1 / c);
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-(const RatFunc& o) const {
  return RatFunc(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  return RatFunc(num_ * o.num_, den_ * o.den_);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  if (o.is_zero()) throw std::runtime_error("division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

bool RatFunc::operator==(const RatFunc& o) const { return num_ * o.den_ == o.num_ * den_; }

RatFunc RatFunc::derivative(VarId v) const {
  return RatFunc(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

RatFunc RatFunc::subst(const std::map<VarId, RatFunc>& repl) const {
  auto eval = [&](const Poly& p) {
    RatFunc acc;
    for (const auto& [m, c] : p.terms()) {
      RatFunc term = RatFunc::constant(c);
      for (const auto& [v, e] : m.entries()) {
        auto it = repl.find(v);
        RatFunc base = it == repl.end() ? RatFunc::variable(v) : it->second;
        for (std::uint32_t i = 0; i < e; ++i) term = term * base;
      }
      acc = acc + term;
    }
    return acc;
  };
  return eval(num_) / eval(den_);
}

std::set<VarId> RatFunc::support() const {
  std::set<VarId> s = num_.support();
  for (VarId v : den_.support()) s.insert(v);
  return s;
}

// --------------------------------------------------------------------------
// Printing

static std::string monomial_str(const Monomial& m, const VarPool& pool) {
  if (m.is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : m.entries()) {
    if (!first) os << "*";
    first = false;
    os << pool.name(v);
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

std::string poly_str(const Poly& p, const VarPool& pool, const MonomialOrder& ord) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Monomial, Rational>> terms(p.terms().begin(), p.terms().end());
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) { return ord.greater(a.first, b.first); });
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      if (a < 0) {
        os << " - ";
        a = -a;
      } else {
        os << " + ";
      }
    }
    first = false;
    if (m.is_one())
      os << rat_str(a);
    else if (a == 1)
      os << monomial_str(m, pool);
    else
      os << rat_str(a) << "*" << monomial_str(m, pool);
  }
  return os.str();
}

std::string poly_str(const Poly& p, const VarPool& pool) {
  return poly_str(p, pool, MonomialOrder::grevlex(pool.all()));
}

// A denominator prints bare only when it cannot re-associate under the
// left-to-right '*'/'/' parse: a single variable, pure power, or integer.
static bool den_needs_parens(const Poly& den) {
  if (den.term_count() != 1) return true;
  const auto& [m, c] = *den.terms().begin();
  if (m.is_one()) return c.get_den() != 1;
  return !(c == 1 && m.entries().size() == 1);
}

std::string ratfunc_str(const RatFunc& f, const VarPool& pool) {
  if (f.is_poly()) return poly_str(f.as_poly(), pool);
  std::string num = poly_str(f.num(), pool);
  std::string den = poly_str(f.den(), pool);
  if (f.num().term_count() > 1 || (f.num().term_count() == 1 && f.num().terms().begin()->second.get_den() != 1))
    num = "(" + num + ")";
  if (den_needs_parens(f.den())) den = "(" + den + ")";
  return num + "/" + den;
}

// --------------------------------------------------------------------------
// Parsing: precedence climbing over rational functions.

namespace {

struct Parser {
  const std::string& s;
  const VarPool& pool;
  std::size_t pos = 0;
  ParseError err;
  bool failed = false;

  explicit Parser(const std::string& text, const VarPool& p) : s(text), pool(p) {}

  void fail(const std::string& msg) {
    if (!failed) {
      failed = true;
      err = {msg, pos};
    }
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  RatFunc parse_expr() {
    RatFunc lhs = parse_term();
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

  RatFunc parse_term() {
    RatFunc lhs = parse_factor();
    while (!failed) {
      if (consume('*'))
        lhs = lhs * parse_factor();
      else if (consume('/')) {
        RatFunc rhs = parse_factor();
        if (failed) break;
        if (rhs.is_zero()) {
          fail("division by zero");
          break;
        }
        lhs = lhs / rhs;
      } else
        break;
    }
    return lhs;
  }

  RatFunc parse_factor() {
    RatFunc base = parse_atom();
    if (failed) return base;
    if (consume('^')) {
      skip_ws();
      std::size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (pos == start) {
        fail("expected exponent");
        return base;
      }
      unsigned long e = std::stoul(s.substr(start, pos - start));
      if (e > 64) {
        fail("exponent too large");
        return base;
      }
      RatFunc r = RatFunc::constant(1);
      for (unsigned long i = 0; i < e; ++i) r = r * base;
      return r;
    }
    return base;
  }

  RatFunc parse_atom() {
    skip_ws();
    if (pos >= s.size()) {
      fail("unexpected end of input");
      return RatFunc{};
    }
    char c = s[pos];
    if (c == '(') {
      ++pos;
      RatFunc inner = parse_expr();
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
      return RatFunc::constant(Rational(n));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
        ++pos;
      std::string name = s.substr(start, pos - start);
      auto v = pool.find(name);
      if (!v) {
        pos = start;
        fail("unknown variable '" + name + "'");
        return RatFunc{};
      }
      return RatFunc::variable(*v);
    }
    fail(std::string("unexpected character '") + c + "'");
    return RatFunc{};
  }
};

}  // namespace

std::optional<RatFunc> ratfunc_parse(const std::string& text, const VarPool& pool, ParseError* err) {
  Parser p(text, pool);
  RatFunc r;
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

std::optional<Poly> poly_parse(const std::string& text, const VarPool& pool, ParseError* err) {
  auto r = ratfunc_parse(text, pool, err);
  if (!r) return std::nullopt;
  if (!r->is_poly()) {
    if (err) *err = {"expected a polynomial (denominator remained)", 0};
    return std::nullopt;
  }
  return r->as_poly();
}

}  // namespace ct
