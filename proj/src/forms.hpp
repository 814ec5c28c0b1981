#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poly.hpp"

namespace ct {

// Wedge of differentials, stored with strictly increasing VarIds; the sign
// of the sorting permutation is absorbed into the coefficient.
struct FormKey {
  std::vector<VarId> d;
  std::size_t degree() const { return d.size(); }
  bool operator<(const FormKey& o) const { return d < o.d; }
  bool operator==(const FormKey& o) const { return d == o.d; }
};

// Merge two increasing differential lists; nullopt when a differential
// repeats, otherwise the merged key and the permutation sign.
std::optional<std::pair<FormKey, int>> wedge_keys(const FormKey& a, const FormKey& b);

struct RelativeForm {
  std::map<FormKey, RatFunc> terms;

  static RelativeForm function(RatFunc c) {
    RelativeForm f;
    if (!c.is_zero()) f.terms.emplace(FormKey{}, std::move(c));
    return f;
  }
  static RelativeForm differential(VarId v) {
    RelativeForm f;
    f.terms.emplace(FormKey{{v}}, RatFunc::constant(1));
    return f;
  }

  bool is_zero() const { return terms.empty(); }
  // Largest wedge degree with a nonzero term (0 for the zero form).
  std::size_t degree() const;
  bool homogeneous(std::size_t deg) const;

  RelativeForm operator+(const RelativeForm& o) const;
  RelativeForm operator-(const RelativeForm& o) const;
  RelativeForm operator-() const;
  RelativeForm scale(const RatFunc& c) const;
  RelativeForm wedge(const RelativeForm& o) const;
  bool operator==(const RelativeForm& o) const;
  bool operator!=(const RelativeForm& o) const { return !(*this == o); }
};

// Exterior derivative taken only in the listed variables (the remaining ones
// are treated as constants).
RelativeForm d_over(const RelativeForm& w, const std::vector<VarId>& vars);

// Substitution pullback: variables in `repl` are replaced in coefficients,
// and their differentials become sums of chart differentials of the
// replacement. Differentials of unreplaced variables pass through.
RelativeForm pullback_form(const RelativeForm& w, const std::map<VarId, RatFunc>& repl,
                           const std::vector<VarId>& chart_vars);

std::string form_str(const RelativeForm& w, const VarPool& pool);
std::optional<RelativeForm> form_parse(const std::string& text, const VarPool& pool,
                                       ParseError* err = nullptr);

}  // namespace ct
