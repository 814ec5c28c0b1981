#pragma once

#include <map>
#include <vector>

#include "groebner.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace ct {

// The coefficient ring for fiber computations: Q[base_vars, chart_vars]/I_S,
// with I_S generated in base_vars only. Elements of its fraction field K are
// RatFuncs whose numerator and denominator are kept in normal form mod I_S.
struct BaseRing {
  const VarPool* pool = nullptr;
  std::vector<VarId> base_vars;
  std::vector<VarId> chart_vars;
  Ideal is;  // Groebner basis over base_vars (grevlex); empty ideal allowed

  static BaseRing make(const VarPool& pool, std::vector<VarId> base_vars,
                       std::vector<VarId> chart_vars, const std::vector<Poly>& is_gens,
                       const GroebnerLimits& limits = GroebnerLimits::from_env());

  // Reduce chart-monomial coefficients modulo I_S.
  Poly nf(const Poly& p) const;
  bool poly_is_zero(const Poly& p) const { return nf(p).is_zero(); }

  // Canonical representative of an element of K. Throws `degenerate` if the
  // denominator lies in I_S.
  RatFunc reduce(const RatFunc& f) const;
  bool is_zero(const RatFunc& f) const;
  RatFunc add(const RatFunc& a, const RatFunc& b) const { return reduce(a + b); }
  RatFunc sub(const RatFunc& a, const RatFunc& b) const { return reduce(a - b); }
  RatFunc mul(const RatFunc& a, const RatFunc& b) const { return reduce(a * b); }
  RatFunc div(const RatFunc& a, const RatFunc& b) const;

  std::vector<VarId> all_vars() const;
};

// Field ops adapter for charpoly<>.
struct KOps {
  const BaseRing* ring;
  RatFunc zero() const { return RatFunc{}; }
  RatFunc one() const { return RatFunc::constant(1); }
  RatFunc from_int(long v) const { return RatFunc::constant(Rational(v)); }
  RatFunc add(const RatFunc& a, const RatFunc& b) const { return ring->add(a, b); }
  RatFunc sub(const RatFunc& a, const RatFunc& b) const { return ring->sub(a, b); }
  RatFunc mul(const RatFunc& a, const RatFunc& b) const { return ring->mul(a, b); }
  RatFunc div(const RatFunc& a, const RatFunc& b) const { return ring->div(a, b); }
  bool is_zero(const RatFunc& a) const { return ring->is_zero(a); }
};

// Polynomial in the fiber variables with coefficients in K.
struct FiberPoly {
  std::map<Monomial, RatFunc> terms;  // monomials in fiber vars only

  bool is_zero() const { return terms.empty(); }
  static FiberPoly from_poly(const BaseRing& ring, const std::vector<VarId>& fiber_vars,
                             const Poly& p);
  static FiberPoly constant(RatFunc c);
  Poly to_poly() const;  // requires every coefficient polynomial (clears nothing)
};

FiberPoly fp_add(const BaseRing& R, const FiberPoly& a, const FiberPoly& b);
FiberPoly fp_sub(const BaseRing& R, const FiberPoly& a, const FiberPoly& b);
FiberPoly fp_mul(const BaseRing& R, const FiberPoly& a, const FiberPoly& b);
FiberPoly fp_scale(const BaseRing& R, const FiberPoly& a, const RatFunc& c);
std::string fp_str(const FiberPoly& a, const VarPool& pool);

// The finite K-algebra K[fiber]/(gens). Throws `not_finite` when the generic
// fiber fails to be finite over K.
class QuotientAlgebra {
 public:
  static QuotientAlgebra compute(BaseRing ring, std::vector<VarId> fiber_vars,
                                 const std::vector<Poly>& gens, bool track_cofactors = false,
                                 const GroebnerLimits& limits = GroebnerLimits::from_env());

  const BaseRing& ring() const { return ring_; }
  const std::vector<VarId>& fiber_vars() const { return xvars_; }
  const MonomialOrder& order() const { return xord_; }
  const std::vector<FiberPoly>& basis() const { return gb_; }
  // gb[i] == sum_j cofactors[i][j] * gens[j] over K[fiber]; only if tracked.
  const std::vector<std::vector<FiberPoly>>& cofactors() const { return cofactors_; }
  const std::vector<Monomial>& standard_monomials() const { return std_monos_; }
  std::size_t dim() const { return std_monos_.size(); }

  FiberPoly nf(const FiberPoly& f) const;
  // Writes an ideal element as sum_j out_j * gens_j (the original generators);
  // requires cofactor tracking. Throws `semantic` if f is not in the ideal.
  std::vector<FiberPoly> express_in_generators(const FiberPoly& f) const;
  // Coordinates of nf(f) in the standard monomial basis.
  std::vector<RatFunc> coords(const FiberPoly& f) const;
  std::vector<std::vector<RatFunc>> mult_matrix(const FiberPoly& h) const;
  RatFunc trace_mult(const FiberPoly& h) const;
  // Monic characteristic polynomial of M_h, low degree first.
  std::vector<RatFunc> charpoly_of(const FiberPoly& h) const;

 private:
  BaseRing ring_;
  std::vector<VarId> xvars_;
  MonomialOrder xord_;
  std::vector<FiberPoly> gb_;
  std::vector<std::vector<FiberPoly>> cofactors_;
  std::vector<Monomial> std_monos_;
};

// Substitute the (complete) base/chart point into the generators and return
// the resulting ideal over the fiber variables with a grevlex basis.
Ideal specialize_at(const std::vector<Poly>& gens, const std::map<VarId, Rational>& point,
                    const std::vector<VarId>& fiber_vars,
                    const GroebnerLimits& limits = GroebnerLimits::from_env());

// A zero-dimensional algebra with plain rational coefficients (a specialized
// fiber, or an ambient germ cut down by affine slices).
struct SpecializedAlgebra {
  Ideal gb;
  std::vector<VarId> vars;
  std::vector<Monomial> monos;

  static SpecializedAlgebra make(Ideal ideal, std::vector<VarId> vars);
  std::size_t dim() const { return monos.size(); }
  // Monic characteristic polynomial of multiplication by h, low degree first.
  UniPoly charpoly_q(const Poly& h) const;
};

}  // namespace ct
