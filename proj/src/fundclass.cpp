#include "fundclass.hpp"

namespace ct {

namespace {

Poly poly_det(const std::vector<std::vector<Poly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(1);
  if (n == 1) return m[0][0];
  Poly out;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Poly>> minor(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) minor[r - 1].push_back(m[r][c]);
    Poly term = m[0][j] * poly_det(minor);
    if (j % 2)
      out -= term;
    else
      out += term;
  }
  return out;
}

FiberPoly fp_det(const BaseRing& R, const std::vector<std::vector<FiberPoly>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return FiberPoly::constant(RatFunc::constant(1));
  if (n == 1) return m[0][0];
  FiberPoly out;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<FiberPoly>> minor(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) minor[r - 1].push_back(m[r][c]);
    FiberPoly term = fp_mul(R, m[0][j], fp_det(R, minor));
    if (j % 2) term = fp_scale(R, term, RatFunc::constant(-1));
    out = fp_add(R, out, term);
  }
  return out;
}

// Reduce g modulo the system {chi_i(z_i)}: monic univariate relations, one per
// variable, coefficients low-first over K.
FiberPoly reduce_by_eliminants(const BaseRing& R, const std::vector<VarId>& vars,
                               const std::vector<std::vector<RatFunc>>& chi, FiberPoly g) {
  std::vector<FiberPoly> rels(vars.size());
  std::vector<std::uint32_t> nn(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    nn[i] = static_cast<std::uint32_t>(chi[i].size() - 1);
    for (std::size_t j = 0; j < chi[i].size(); ++j)
      if (!chi[i][j].is_zero()) rels[i].terms.emplace(Monomial::var(vars[i], static_cast<std::uint32_t>(j)), chi[i][j]);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [m, c] : g.terms) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        std::uint32_t e = m.exponent(vars[i]);
        if (e < nn[i]) continue;
        FiberPoly factor;
        auto quot = m.try_div(Monomial::var(vars[i], nn[i]));
        factor.terms.emplace(*quot, c);
        g = fp_sub(R, g, fp_mul(R, factor, rels[i]));
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  return g;
}

}  // namespace

CechCocycle cech_leray(const std::vector<Poly>& f, const std::vector<VarId>& fiber_vars) {
  if (f.empty())
    throw CtError(ErrCode::invalid_arg, "a cocycle needs at least one denominator");
  RelativeForm num = RelativeForm::function(RatFunc::constant(1));
  for (const auto& fi : f)
    num = num.wedge(d_over(RelativeForm::function(RatFunc(fi)), fiber_vars));
  return {std::move(num), f};
}

RatFunc grothendieck_residue(const BaseRing& ring, const std::vector<VarId>& fiber_vars,
                             const ResidueProblem& rp, bool alternate_lift) {
  const std::size_t p = rp.denominators.size();
  if (p == 0 || p != fiber_vars.size())
    throw CtError(ErrCode::invalid_arg,
                  "the residue needs exactly one denominator per fiber variable");
  QuotientAlgebra alg = QuotientAlgebra::compute(ring, fiber_vars, rp.denominators, true);
  if (alg.dim() == 0) return RatFunc{};  // unit ideal: no common zeros

  std::vector<std::vector<RatFunc>> chi(p);
  std::vector<std::vector<FiberPoly>> cmat(p);
  for (std::size_t i = 0; i < p; ++i) {
    FiberPoly zi = FiberPoly::from_poly(ring, fiber_vars, Poly::variable(fiber_vars[i]));
    chi[i] = alg.charpoly_of(zi);
    if (alternate_lift) {  // multiply by (z_i - 1): same ideal element family
      std::vector<RatFunc> raised(chi[i].size() + 1);
      for (std::size_t j = 0; j < chi[i].size(); ++j) {
        raised[j + 1] = ring.add(raised[j + 1], chi[i][j]);
        raised[j] = ring.sub(raised[j], chi[i][j]);
      }
      chi[i] = std::move(raised);
    }
    FiberPoly chz;
    for (std::size_t j = 0; j < chi[i].size(); ++j)
      if (!chi[i][j].is_zero())
        chz.terms.emplace(Monomial::var(fiber_vars[i], static_cast<std::uint32_t>(j)), chi[i][j]);
    cmat[i] = alg.express_in_generators(chz);
  }

  FiberPoly g = fp_mul(ring, FiberPoly::from_poly(ring, fiber_vars, rp.h), fp_det(ring, cmat));
  g = reduce_by_eliminants(ring, fiber_vars, chi, std::move(g));

  Monomial target;
  for (std::size_t i = 0; i < p; ++i)
    target = target * Monomial::var(fiber_vars[i], static_cast<std::uint32_t>(chi[i].size()) - 2);
  auto it = g.terms.find(target);
  return it == g.terms.end() ? RatFunc{} : ring.reduce(it->second);
}

RatFunc trace_via_class(const Family& f, const Poly& h) {
  if (f.components.empty())
    throw CtError(ErrCode::semantic, "family has no components");
  const BaseRing& R = f.base_ring();
  const std::size_t p = f.fiber_vars.size();
  RatFunc total;
  for (const auto& c : f.components) {
    const std::vector<Poly>& gens = f.effective_gens(c);
    if (gens.size() != p)
      throw CtError(ErrCode::semantic,
                    "component '" + c.name +
                        "': the fundamental-class trace needs a regular-sequence presentation "
                        "(one generator per fiber variable)");
    std::vector<std::vector<Poly>> jac(p, std::vector<Poly>(p));
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) jac[i][j] = gens[i].derivative(f.fiber_vars[j]);
    ResidueProblem rp{h * poly_det(jac), gens};
    RatFunc r = grothendieck_residue(R, f.fiber_vars, rp);
    total = R.add(total, RatFunc::constant(Rational(c.weight)) * r);
  }
  return R.reduce(total);
}

}  // namespace ct
