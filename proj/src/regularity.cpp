#include "regularity.hpp"

#include <algorithm>

#include "linalg.hpp"

namespace ct {

// Membership num in <den> + I_S * Q[s,t], decided by a Groebner basis of
// the combined ideal with cofactor tracking to recover the witness q.
RegularityResult is_regular_on(const BaseRing& ring, const RatFunc& f) {
  RegularityResult out;
  RatFunc g = ring.reduce(f);
  if (g.num().is_zero()) {
    out.regular = true;
    out.witness = Poly{};
    out.witness_degree = 0;
    return out;
  }
  if (g.is_poly()) {
    Poly q = ring.nf(g.as_poly());
    out.regular = true;
    out.witness_degree = static_cast<int>(q.degree());
    out.witness = std::move(q);
    return out;
  }

  std::vector<Poly> gens{g.den()};
  for (const auto& b : ring.is.gens) gens.push_back(b);
  MonomialOrder ord = MonomialOrder::grevlex(ring.all_vars());
  Ideal gb = groebner(gens, ord, /*track_cofactors=*/true);

  DivisionResult div = normal_form_div(g.num(), gb);
  if (!div.remainder.is_zero()) return out;  // genuinely not regular

  // num == sum_k quot_k * basis_k and basis_k == sum_j cof_kj * gens_j,
  // so the den-cofactor q is sum_k quot_k * cof_k0.
  Poly q;
  for (std::size_t k = 0; k < gb.basis.size(); ++k)
    if (!div.quotients[k].is_zero()) q += div.quotients[k] * gb.cofactors[k][0];
  q = ring.nf(q);

  out.regular = true;
  out.witness_degree = static_cast<int>(q.degree());
  out.witness = std::move(q);
  return out;
}

RatFunc simplify_on(const BaseRing& ring, const RatFunc& f) {
  RatFunc g = ring.reduce(f);
  if (g.is_poly()) return g;
  RegularityResult r = is_regular_on(ring, g);
  if (r.regular && r.witness) return RatFunc(*r.witness);
  return g;
}

int default_integrality_coeff_bound(const RatFunc& f) {
  return static_cast<int>(2 * std::max<std::uint64_t>(1, f.num().degree()));
}

std::optional<IntegralityResult> integral_dependence(const BaseRing& ring, const RatFunc& f,
                                                     int max_degree, int coeff_degree_bound) {
  RatFunc g = ring.reduce(f);
  if (g.num().is_zero()) return IntegralityResult{1, {Poly{}}};  // sigma = 0
  const Poly& n = g.num();
  const Poly& d = g.den();
  std::vector<VarId> vars = ring.all_vars();

  for (int deg = 1; deg <= max_degree; ++deg) {
    // Powers n^j * d^(deg-j), reduced.
    std::vector<Poly> pw(static_cast<std::size_t>(deg) + 1);
    for (int j = 0; j <= deg; ++j) pw[j] = ring.nf(n.pow(j) * d.pow(static_cast<std::uint32_t>(deg - j)));

    for (int cb = 0; cb <= coeff_degree_bound; ++cb) {
      std::vector<Monomial> monos = monomials_up_to(vars, static_cast<std::uint32_t>(cb));
      // Unknowns: coefficients of a_j over monos, j = 0..deg-1.
      // Equation: nf(n^deg) + sum_j sum_m c_{j,m} nf(m * n^j * d^(deg-j)) = 0.
      std::map<Monomial, std::size_t> row_of;
      auto row_index = [&](const Monomial& m) {
        auto it = row_of.find(m);
        if (it != row_of.end()) return it->second;
        std::size_t idx = row_of.size();
        row_of.emplace(m, idx);
        return idx;
      };

      std::vector<std::map<std::size_t, Rational>> cols;
      for (int j = 0; j < deg; ++j)
        for (const auto& m : monos) {
          Poly mono_poly;
          mono_poly.add_term(m, 1);
          Poly col = ring.nf(mono_poly * pw[j]);
          std::map<std::size_t, Rational> entries;
          for (const auto& [mm, c] : col.terms()) entries[row_index(mm)] = c;
          cols.push_back(std::move(entries));
        }
      std::map<std::size_t, Rational> rhs;
      for (const auto& [mm, c] : pw[deg].terms()) rhs[row_index(mm)] = -c;

      const std::size_t rows = row_of.size(), ncols = cols.size();
      QMatrix a(rows, QRow(ncols, Rational(0)));
      QRow b(rows, Rational(0));
      for (std::size_t c = 0; c < ncols; ++c)
        for (const auto& [r, v] : cols[c]) a[r][c] = v;
      for (const auto& [r, v] : rhs) b[r] = v;

      auto sol = solve_linear(a, b);
      if (!sol) continue;

      IntegralityResult res;
      res.degree = deg;
      res.coeffs.resize(static_cast<std::size_t>(deg));
      std::size_t idx = 0;
      for (int j = 0; j < deg; ++j) {
        Poly aj;
        for (const auto& m : monos) aj.add_term(m, (*sol)[idx++]);
        res.coeffs[static_cast<std::size_t>(j)] = ring.nf(aj);
      }
      return res;
    }
  }
  return std::nullopt;
}

}  // namespace ct
