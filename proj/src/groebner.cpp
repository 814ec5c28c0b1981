#include "groebner.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

namespace ct {

GroebnerLimits GroebnerLimits::from_env() {
  GroebnerLimits l;
  if (const char* s = std::getenv("CYCLETRACE_MAX_BASIS")) l.max_basis = std::strtoull(s, nullptr, 10);
  if (const char* s = std::getenv("CYCLETRACE_MAX_PAIRS")) l.max_pairs = std::strtoull(s, nullptr, 10);
  return l;
}

namespace {

struct Tracked {
  Poly p;
  std::vector<Poly> rep;  // p == sum rep_j * gens_j (when tracking)
};

// Full reduction of t.p modulo basis; keeps the representation in sync.
void reduce_full(Tracked& t, const std::vector<Tracked>& basis, const MonomialOrder& ord,
                 bool track) {
  Poly remainder;
  std::vector<std::pair<Monomial, Rational>> lts;
  lts.reserve(basis.size());
  for (const auto& b : basis) lts.push_back(b.p.leading(ord));

  while (!t.p.is_zero()) {
    auto [lm, lc] = t.p.leading(ord);
    bool hit = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto q = lm.try_div(lts[i].first);
      if (!q) continue;
      Poly factor;
      factor.add_term(*q, lc / lts[i].second);
      t.p -= factor * basis[i].p;
      if (track)
        for (std::size_t j = 0; j < t.rep.size(); ++j) t.rep[j] -= factor * basis[i].rep[j];
      hit = true;
      break;
    }
    if (!hit) {
      Poly lt;
      lt.add_term(lm, lc);
      remainder += lt;
      t.p -= lt;
    }
  }
  t.p = remainder;
}

void make_monic(Tracked& t, const MonomialOrder& ord, bool track) {
  if (t.p.is_zero()) return;
  Rational lc = t.p.leading(ord).second;
  Rational inv = 1 / lc;
  t.p = t.p * inv;
  if (track)
    for (auto& r : t.rep) r = r * inv;
}

}  // namespace

Ideal groebner(std::vector<Poly> gens, MonomialOrder order, bool track_cofactors,
               const GroebnerLimits& limits) {
  Ideal out;
  out.order = order;
  out.tracked = track_cofactors;
  out.gens = gens;

  std::vector<Tracked> basis;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (gens[i].is_zero()) continue;
    Tracked t{gens[i], {}};
    if (track_cofactors) {
      t.rep.assign(gens.size(), Poly{});
      t.rep[i] = Poly::constant(1);
    }
    basis.push_back(std::move(t));
  }

  // Pending S-pairs keyed by lcm degree (normal selection strategy).
  auto lcm_deg = [&](std::size_t i, std::size_t j) {
    return Monomial::lcm(basis[i].p.leading(order).first, basis[j].p.leading(order).first).degree();
  };
  std::set<std::tuple<std::uint64_t, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.insert({lcm_deg(i, j), i, j});

  std::size_t processed = 0;
  while (!pairs.empty()) {
    if (++processed > limits.max_pairs)
      throw CtError(ErrCode::resource_limit, "groebner: pair limit exceeded");
    auto [deg, i, j] = *pairs.begin();
    pairs.erase(pairs.begin());

    auto [lmi, lci] = basis[i].p.leading(order);
    auto [lmj, lcj] = basis[j].p.leading(order);
    if (lmi.coprime(lmj)) continue;  // product criterion

    Monomial l = Monomial::lcm(lmi, lmj);
    Poly fi, fj;
    fi.add_term(*l.try_div(lmi), 1 / lci);
    fj.add_term(*l.try_div(lmj), 1 / lcj);

    Tracked s;
    s.p = fi * basis[i].p - fj * basis[j].p;
    if (track_cofactors) {
      s.rep.assign(gens.size(), Poly{});
      for (std::size_t k = 0; k < gens.size(); ++k)
        s.rep[k] = fi * basis[i].rep[k] - fj * basis[j].rep[k];
    }
    reduce_full(s, basis, order, track_cofactors);
    if (s.p.is_zero()) continue;

    make_monic(s, order, track_cofactors);
    basis.push_back(std::move(s));
    if (basis.size() > limits.max_basis)
      throw CtError(ErrCode::resource_limit, "groebner: basis size limit exceeded");
    std::size_t n = basis.size() - 1;
    for (std::size_t k = 0; k < n; ++k) pairs.insert({lcm_deg(k, n), k, n});
  }

  // Minimalize: drop elements whose leading monomial is divisible by another's.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Monomial lmi = basis[i].p.leading(order).first;
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      Monomial lmj = basis[j].p.leading(order).first;
      if (lmj.divides(lmi) && (lmj != lmi || j < i)) redundant = true;
    }
    if (!redundant) keep.push_back(i);
  }
  std::vector<Tracked> minimal;
  for (std::size_t i : keep) minimal.push_back(std::move(basis[i]));

  // Inter-reduce tails.
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<Tracked> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    if (!others.empty()) reduce_full(minimal[i], others, order, track_cofactors);
    make_monic(minimal[i], order, track_cofactors);
  }
  std::sort(minimal.begin(), minimal.end(), [&](const Tracked& a, const Tracked& b) {
    return order.greater(a.p.leading(order).first, b.p.leading(order).first);
  });

  for (auto& t : minimal) {
    out.basis.push_back(std::move(t.p));
    if (track_cofactors) out.cofactors.push_back(std::move(t.rep));
  }
  return out;
}

Poly normal_form(const Poly& p, const Ideal& ideal) {
  if (ideal.basis.empty()) return p;
  return divide(p, ideal.basis, ideal.order).remainder;
}

DivisionResult normal_form_div(const Poly& p, const Ideal& ideal) {
  if (ideal.basis.empty()) return {{}, p};
  return divide(p, ideal.basis, ideal.order);
}

std::vector<Poly> eliminate(const std::vector<Poly>& gens, const std::vector<VarId>& drop,
                            const std::vector<VarId>& keep, const GroebnerLimits& limits) {
  Ideal gb = groebner(gens, MonomialOrder::elimination(drop, keep), false, limits);
  std::set<VarId> dropped(drop.begin(), drop.end());
  std::vector<Poly> out;
  for (const auto& b : gb.basis) {
    bool pure = true;
    for (VarId v : b.support())
      if (dropped.count(v)) {
        pure = false;
        break;
      }
    if (pure) out.push_back(b);
  }
  return out;
}

bool is_zero_dimensional(const Ideal& ideal, const std::vector<VarId>& vars) {
  if (ideal.is_trivial()) return true;  // empty fiber
  for (VarId v : vars) {
    bool found = false;
    for (const auto& b : ideal.basis) {
      Monomial lm = b.leading(ideal.order).first;
      if (lm.is_one()) continue;
      bool pure_power = lm.entries().size() == 1 && lm.entries()[0].first == v;
      if (pure_power) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::vector<Monomial> standard_monomials(const Ideal& ideal, const std::vector<VarId>& vars,
                                         std::size_t cap) {
  if (!is_zero_dimensional(ideal, vars))
    throw CtError(ErrCode::not_finite, "quotient is not finite-dimensional");
  std::vector<Monomial> lms;
  for (const auto& b : ideal.basis) lms.push_back(b.leading(ideal.order).first);

  auto is_standard = [&](const Monomial& m) {
    for (const auto& lm : lms)
      if (lm.divides(m)) return false;
    return true;
  };

  // Pure-power bounds per variable give a finite search box.
  std::map<VarId, std::uint32_t> bound;
  for (VarId v : vars) bound[v] = 0;
  for (const auto& lm : lms)
    if (lm.entries().size() == 1) {
      auto [v, e] = lm.entries()[0];
      if (bound.count(v) && (bound[v] == 0 || e < bound[v])) bound[v] = e;
    }

  std::vector<Monomial> out;
  std::vector<Monomial> frontier{Monomial{}};
  std::set<Monomial> seen{Monomial{}};
  while (!frontier.empty()) {
    Monomial m = frontier.back();
    frontier.pop_back();
    if (!is_standard(m)) continue;
    out.push_back(m);
    if (out.size() > cap) throw CtError(ErrCode::resource_limit, "standard monomial cap exceeded");
    for (VarId v : vars) {
      Monomial next = m * Monomial::var(v);
      if (bound[v] > 0 && next.exponent(v) >= bound[v]) continue;
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  std::sort(out.begin(), out.end(), [&](const Monomial& a, const Monomial& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree();
    return a < b;
  });
  return out;
}

}  // namespace ct
