#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace ct {

struct GroebnerLimits {
  std::size_t max_basis = 4096;
  std::size_t max_pairs = 200000;
  // Reads CYCLETRACE_MAX_BASIS / CYCLETRACE_MAX_PAIRS when set.
  static GroebnerLimits from_env();
};

// An ideal of Q[vars] together with a cached reduced Groebner basis.
struct Ideal {
  std::vector<Poly> gens;
  MonomialOrder order;
  std::vector<Poly> basis;  // reduced, monic
  // When tracked: basis[i] == sum_j cofactors[i][j] * gens[j].
  std::vector<std::vector<Poly>> cofactors;
  bool tracked = false;

  bool is_trivial() const {  // basis == {1}
    return basis.size() == 1 && basis.front().is_constant() && !basis.front().is_zero();
  }
};

Ideal groebner(std::vector<Poly> gens, MonomialOrder order, bool track_cofactors = false,
               const GroebnerLimits& limits = GroebnerLimits::from_env());

Poly normal_form(const Poly& p, const Ideal& ideal);
// Also returns q with p == sum q_i * basis_i + nf.
DivisionResult normal_form_div(const Poly& p, const Ideal& ideal);

inline bool ideal_contains(const Ideal& ideal, const Poly& p) {
  return normal_form(p, ideal).is_zero();
}

// Generators of the elimination ideal: recomputes a basis under a block order
// with `drop` first and returns the basis elements supported on `keep` alone.
std::vector<Poly> eliminate(const std::vector<Poly>& gens, const std::vector<VarId>& drop,
                            const std::vector<VarId>& keep,
                            const GroebnerLimits& limits = GroebnerLimits::from_env());

// True iff every listed variable has a pure power among the leading monomials.
bool is_zero_dimensional(const Ideal& ideal, const std::vector<VarId>& vars);

// Monomials under the staircase; throws not_finite if not zero-dimensional
// over `vars` or larger than `cap`.
std::vector<Monomial> standard_monomials(const Ideal& ideal, const std::vector<VarId>& vars,
                                         std::size_t cap = 8192);

}  // namespace ct
