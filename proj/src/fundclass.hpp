#pragma once

#include "covering.hpp"

namespace ct {

// Symbolic cocycle df_1 ^ ... ^ df_p / (f_1 ... f_p), differentials taken in
// the fiber variables only.
struct CechCocycle {
  RelativeForm numerator;
  std::vector<Poly> denominators;
};
CechCocycle cech_leray(const std::vector<Poly>& f, const std::vector<VarId>& fiber_vars);

// Res[h * df_1^...^df_p / (f_1...f_p)] with one denominator per fiber
// variable and the common zeros finite over Frac(base).
struct ResidueProblem {
  Poly h;
  std::vector<Poly> denominators;
};
// Computed by the transformation law: monic univariate eliminants chi_i(z_i)
// of the ideal (characteristic polynomials of the coordinate multiplication
// operators) with a tracked-division matrix chi = C * f, then coefficient
// extraction against the eliminant system. `alternate_lift` multiplies every
// eliminant by (z_i - 1) first; the result must not change.
RatFunc grothendieck_residue(const BaseRing& ring, const std::vector<VarId>& fiber_vars,
                             const ResidueProblem& rp, bool alternate_lift = false);

// Weighted trace via cup-product with the fundamental class: the residue of
// h * det(d f_i / d z_j) against each component's presentation, which must be
// a regular sequence (#generators == #fiber variables). Agrees with trace0.
RatFunc trace_via_class(const Family& f, const Poly& h);

}  // namespace ct
