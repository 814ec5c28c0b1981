#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forms.hpp"
#include "quotient.hpp"
#include "regularity.hpp"

namespace ct {

struct Stratum {
  std::string name;
  std::map<VarId, Rational> point;  // assignments for base vars (chart vars optional)
};

// One weighted component of the family. It may carry parametric branch data,
// an implicit ideal presentation, or both (they are cross-checkable).
struct Component {
  std::string name;
  int weight = 1;
  std::vector<Poly> over_gens;                     // ideal in base vars; empty = whole base
  std::vector<std::map<VarId, RatFunc>> branches;  // fiber var -> expression
  std::vector<Poly> ideal_gens;                    // ideal in (base, chart, fiber) vars
};

// A weighted family of branched coverings over V(I_S) x U. Holds its own
// variable pool; not copyable (cached rings point into the pool).
struct Family {
  std::string name;
  VarPool pool;
  std::vector<VarId> base_vars, chart_vars, fiber_vars, param_vars;
  std::vector<Poly> base_gens;        // I_S in base vars
  std::map<VarId, Poly> param_subst;  // base var -> polynomial in params
  std::vector<Poly> family_ideal;     // optional family-level implicit ideal
  std::vector<Component> components;
  std::vector<Stratum> strata;

  Family() = default;
  Family(const Family&) = delete;
  Family& operator=(const Family&) = delete;

  const BaseRing& base_ring() const;   // Q[s,t]/I_S
  const BaseRing& param_ring() const;  // Q[params,t], zero ideal (requires params)
  const std::vector<Poly>& effective_gens(const Component& c) const;
  bool all_parametric() const;
  bool any_implicit() const;

 private:
  mutable std::optional<BaseRing> base_ring_, param_ring_;
};

// --- degrees and traces -----------------------------------------------------

// Generic covering degree: weighted branch count, or weighted generic fiber
// dimension for implicit components.
int degree_generic(const Family& f);

// Weighted branch sum of h(s,t,x); parametric components only.
RatFunc trace0_parametric(const Family& f, const Poly& h);
// Weighted multiplication-operator trace; implicit presentation only.
RatFunc trace0_implicit(const Family& f, const Poly& h);
// Prefers the parametric route, falls back to implicit.
RatFunc trace0(const Family& f, const Poly& h);

// Relative trace of a form (parametric route; rejects implicit-only families
// for positive form degree). Coefficients are reduced in the base ring.
RelativeForm trace_form(const Family& f, const RelativeForm& w);

// Rewrite an expression g in (params, t) as a rational function in (s, t)
// through the substitution s = phi(params); denominators are searched t-free.
// Throws lift_failure when the degree cap is exhausted.
RatFunc lift_to_base(const Family& f, const RatFunc& g, int max_degree = 8);

// --- classifying map ---------------------------------------------------------

struct ClassifyEntry {
  Monomial mono;  // fiber monomial
  RatFunc trace;
  RegularityResult regularity;
};
struct ClassifyResult {
  int degree = 0;  // covering degree k
  std::vector<ClassifyEntry> entries;
  bool newton_consistent = true;  // spot-checked on rational samples
};
ClassifyResult classifying_map(const Family& f, int up_to_degree, std::uint64_t seed = 1);

// --- fibers ------------------------------------------------------------------

struct FiberCountRow {
  std::string component;
  int weight = 1;
  std::size_t dim = 0;  // with multiplicity (unweighted)
  int distinct = 0;
};
struct FiberCount {
  std::vector<FiberCountRow> rows;
  std::size_t with_multiplicity = 0;  // weighted total
  int distinct = 0;                   // distinct points of the union
};
FiberCount fiber_count(const Family& f, const std::map<VarId, Rational>& point, int trials = 4,
                       std::uint64_t seed = 1);

// Degree of a generic linear projection of V(gens) onto target_dim
// coordinates, minimized over `trials` random projections.
int generic_projection_degree(const VarPool& pool, const std::vector<Poly>& gens,
                              const std::vector<VarId>& ambient, int target_dim, int trials = 8,
                              std::uint64_t seed = 1);

// A weighted algebraic cycle in an affine ambient space: components are
// arbitrary ideals, independent of any covering structure.
struct CycleComponent {
  std::string name;
  int weight = 1;
  std::vector<Poly> gens;
};

// Weighted local multiplicity mu_z of a point on the cycle: per component the
// minimal local covering degree of z over sampled generic projections, summed
// with weights. Throws invalid_arg if z misses the support entirely.
int multiplicity_of_point(const VarPool& pool, const std::vector<VarId>& ambient,
                          const std::vector<CycleComponent>& cycle,
                          const std::map<VarId, Rational>& z, int trials = 8,
                          std::uint64_t seed = 1);

// --- base change --------------------------------------------------------------

// Substitute base vars s := arc(new base vars) into a branch-presented family;
// the result lives over the affine space of the new variables.
std::unique_ptr<Family> base_change(const Family& f, const std::vector<std::string>& new_vars,
                                    const std::map<VarId, std::string>& arc);

// --- shared helpers -----------------------------------------------------------

// Deterministic small rational coefficients for random linear forms.
std::vector<Rational> random_coeffs(std::size_t n, std::uint64_t seed);
Poly random_linear_form(const std::vector<VarId>& vars, std::uint64_t seed);
// Rational sample point on V(I_S) found by branch/substitution data; used by
// Newton consistency spot checks. Returns base+chart assignment.
std::optional<std::map<VarId, Rational>> sample_base_point(const Family& f, std::uint64_t seed);

}  // namespace ct
