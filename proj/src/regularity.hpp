#pragma once

#include <optional>
#include <vector>

#include "quotient.hpp"

namespace ct {

// Outcome of testing whether f = num/den defines a regular (holomorphic)
// function on the base: is there q with num == q*den modulo the base ideal?
struct RegularityResult {
  bool regular = false;
  std::optional<Poly> witness;  // q, when regular
  // Degree of the witness found; the `degree_bound` argument below is the
  // degree we aim for, but membership is decided exactly, so a regular f
  // whose smallest witness exceeds the bound is still reported regular.
  int witness_degree = -1;
};

RegularityResult is_regular_on(const BaseRing& ring, const RatFunc& f);

// Canonical form of f in K for printing and comparison: reduced, and replaced
// by its polynomial witness whenever f is regular.
RatFunc simplify_on(const BaseRing& ring, const RatFunc& f);

// Monic integral dependence relation: sigma^d + a_{d-1} sigma^{d-1} + ... +
// a_0 = 0 over the base ring, with polynomial coefficients a_j of degree <=
// coeff_degree_bound. Returns the minimal-degree relation found (d minimal,
// then coefficient degree minimal), or nullopt.
struct IntegralityResult {
  int degree = 0;
  std::vector<Poly> coeffs;  // a_0 .. a_{d-1}
};

std::optional<IntegralityResult> integral_dependence(const BaseRing& ring, const RatFunc& f,
                                                     int max_degree, int coeff_degree_bound);

// Default bounds used by callers when the user does not override them.
int default_integrality_coeff_bound(const RatFunc& f);

}  // namespace ct
