#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "monomial.hpp"
#include "order.hpp"
#include "rational.hpp"
#include "vars.hpp"

namespace ct {

class Poly {
 public:
  Poly() = default;

  static Poly constant(Rational c) {
    Poly p;
    p.add_term(Monomial{}, std::move(c));
    return p;
  }
  static Poly variable(VarId v, std::uint32_t exp = 1) {
    Poly p;
    p.add_term(Monomial::var(v, exp), 1);
    return p;
  }

  void add_term(const Monomial& m, const Rational& c);

  bool is_zero() const { return t_.empty(); }
  bool is_constant() const { return t_.empty() || (t_.size() == 1 && t_.begin()->first.is_one()); }
  Rational constant_value() const;  // requires is_constant()

  const std::map<Monomial, Rational>& terms() const { return t_; }
  std::size_t term_count() const { return t_.size(); }
  Rational coeff_of(const Monomial& m) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly operator*(const Rational& c) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  bool operator==(const Poly& o) const { return t_ == o.t_; }
  bool operator!=(const Poly& o) const { return t_ != o.t_; }

  Poly pow(std::uint32_t n) const;

  std::uint64_t degree() const;  // total degree; 0 for the zero polynomial
  std::uint64_t degree_if(const std::function<bool(VarId)>& in) const;
  std::uint32_t degree_in(VarId v) const;

  // Leading term with respect to a monomial order. Requires !is_zero().
  std::pair<Monomial, Rational> leading(const MonomialOrder& ord) const;

  Poly derivative(VarId v) const;

  // Substitute variables listed in the map; others are untouched.
  Poly subst(const std::map<VarId, Poly>& repl) const;
  // Substitute rational values for the listed variables.
  Poly eval_partial(const std::map<VarId, Rational>& vals) const;

  // Positive rational c with p = c * (integer-coefficient, content-1 poly).
  // Sign is carried separately: content() > 0 always; returns 1 for p = 0.
  Rational content() const;

  std::set<VarId> support() const;

  // Coefficients of powers of v: exponent -> polynomial in the other vars.
  std::map<std::uint32_t, Poly> collect(VarId v) const;

  // Split each monomial into (part with vars satisfying pred, rest); returns
  // map from the pred-part monomial to the polynomial of rest-parts.
  std::map<Monomial, Poly> split_by(const std::function<bool(VarId)>& pred) const;

 private:
  std::map<Monomial, Rational> t_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

// Multivariate division: p = sum q_i * divisors_i + r, no term of r divisible
// by any leading monomial of the divisors. Divisors must be nonzero.
struct DivisionResult {
  std::vector<Poly> quotients;
  Poly remainder;
};
DivisionResult divide(const Poly& p, const std::vector<Poly>& divisors, const MonomialOrder& ord);

// Quotient p/g if g divides p exactly, otherwise nullopt.
std::optional<Poly> try_exact_div(const Poly& p, const Poly& g);

// All monomials over `vars` of total degree <= d (ascending degree, then
// structural order). Includes 1.
std::vector<Monomial> monomials_up_to(const std::vector<VarId>& vars, std::uint32_t d);
// Only the monomials of total degree == d.
std::vector<Monomial> monomials_of_degree(const std::vector<VarId>& vars, std::uint32_t d);

// ---------------------------------------------------------------------------

// Quotient of polynomials. Reduction is content-based plus an exact-division
// attempt; no multivariate gcd is computed. Denominator is content-normalized
// with positive sign on its structurally-largest term.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Poly::constant(1)) {}
  RatFunc(Poly num, Poly den);
  explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(1)) {}
  static RatFunc constant(Rational c) { return RatFunc(Poly::constant(std::move(c))); }
  static RatFunc variable(VarId v) { return RatFunc(Poly::variable(v)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_poly() const { return den_.is_constant(); }
  Poly as_poly() const;  // requires is_poly()

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;  // throws on division by zero
  bool operator==(const RatFunc& o) const;    // cross-multiplication identity
  bool operator!=(const RatFunc& o) const { return !(*this == o); }

  RatFunc derivative(VarId v) const;
  RatFunc subst(const std::map<VarId, RatFunc>& repl) const;
  std::set<VarId> support() const;

 private:
  void normalize();
  Poly num_, den_;
};

// ---------------------------------------------------------------------------
// Text syntax. Polynomials: "3/2*x^2*y - z". Parsing accepts parentheses and
// '/' as an operator; poly_parse requires the result to be polynomial.

std::string poly_str(const Poly& p, const VarPool& pool);
std::string poly_str(const Poly& p, const VarPool& pool, const MonomialOrder& ord);
std::string ratfunc_str(const RatFunc& f, const VarPool& pool);

struct ParseError {
  std::string message;
  std::size_t position = 0;
};

// Parse over an existing pool; unknown identifiers are an error.
std::optional<RatFunc> ratfunc_parse(const std::string& text, const VarPool& pool, ParseError* err = nullptr);
std::optional<Poly> poly_parse(const std::string& text, const VarPool& pool, ParseError* err = nullptr);

}  // namespace ct
