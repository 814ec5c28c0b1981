#include "quotient.hpp"

#include <algorithm>

#include "linalg.hpp"
#include <set>
#include <sstream>
#include <tuple>

namespace ct {

namespace {

bool contains_var(const std::vector<VarId>& vars, VarId v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

}  // namespace

BaseRing BaseRing::make(const VarPool& pool, std::vector<VarId> base_vars,
                        std::vector<VarId> chart_vars, const std::vector<Poly>& is_gens,
                        const GroebnerLimits& limits) {
  BaseRing r;
  r.pool = &pool;
  r.base_vars = std::move(base_vars);
  r.chart_vars = std::move(chart_vars);
  for (const auto& g : is_gens)
    for (VarId v : g.support())
      if (!contains_var(r.base_vars, v))
        throw CtError(ErrCode::semantic,
                      "base ideal generator uses non-base variable '" + pool.name(v) + "'");
  r.is = groebner(is_gens, MonomialOrder::grevlex(r.base_vars), false, limits);
  if (r.is.is_trivial()) throw CtError(ErrCode::degenerate, "base ideal is the unit ideal");
  return r;
}

std::vector<VarId> BaseRing::all_vars() const {
  std::vector<VarId> v = base_vars;
  v.insert(v.end(), chart_vars.begin(), chart_vars.end());
  return v;
}

Poly BaseRing::nf(const Poly& p) const {
  for (VarId v : p.support())
    if (!contains_var(base_vars, v) && !contains_var(chart_vars, v))
      throw CtError(ErrCode::semantic,
                    "expression uses variable '" + pool->name(v) + "' outside the base ring");
  if (is.basis.empty()) return p;
  auto parts = p.split_by([&](VarId v) { return contains_var(chart_vars, v); });
  Poly out;
  for (const auto& [chart_mono, coeff] : parts) {
    Poly reduced = normal_form(coeff, is);
    for (const auto& [m, c] : reduced.terms()) out.add_term(m * chart_mono, c);
  }
  return out;
}

RatFunc BaseRing::reduce(const RatFunc& f) const {
  Poly n = nf(f.num());
  Poly d = nf(f.den());
  if (d.is_zero())
    throw CtError(ErrCode::degenerate, "denominator vanishes on the base (lies in the base ideal)");
  if (n.is_zero()) return RatFunc{};
  return RatFunc(std::move(n), std::move(d));
}

bool BaseRing::is_zero(const RatFunc& f) const {
  if (f.num().is_zero()) return true;
  return nf(f.num()).is_zero();
}

RatFunc BaseRing::div(const RatFunc& a, const RatFunc& b) const {
  RatFunc br = reduce(b);
  if (br.num().is_zero())
    throw CtError(ErrCode::degenerate, "division by zero in the base function field");
  return reduce(a / br);
}

// ---------------------------------------------------------------------------

FiberPoly FiberPoly::from_poly(const BaseRing& ring, const std::vector<VarId>& fiber_vars,
                               const Poly& p) {
  FiberPoly f;
  auto parts = p.split_by([&](VarId v) { return contains_var(fiber_vars, v); });
  for (const auto& [mono, coeff] : parts) {
    RatFunc c = ring.reduce(RatFunc(coeff));
    if (!c.is_zero()) f.terms.emplace(mono, std::move(c));
  }
  return f;
}

FiberPoly FiberPoly::constant(RatFunc c) {
  FiberPoly f;
  if (!c.is_zero()) f.terms.emplace(Monomial{}, std::move(c));
  return f;
}

Poly FiberPoly::to_poly() const {
  Poly out;
  for (const auto& [m, c] : terms) {
    if (!c.is_poly()) throw std::logic_error("fiber polynomial has non-polynomial coefficient");
    Poly coeff = c.as_poly();
    for (const auto& [bm, bc] : coeff.terms()) out.add_term(bm * m, bc);
  }
  return out;
}

FiberPoly fp_add(const BaseRing& R, const FiberPoly& a, const FiberPoly& b) {
  FiberPoly r = a;
  for (const auto& [m, c] : b.terms) {
    auto it = r.terms.find(m);
    if (it == r.terms.end()) {
      r.terms.emplace(m, c);
    } else {
      RatFunc s = R.add(it->second, c);
      if (s.is_zero())
        r.terms.erase(it);
      else
        it->second = std::move(s);
    }
  }
  return r;
}

FiberPoly fp_scale(const BaseRing& R, const FiberPoly& a, const RatFunc& c) {
  FiberPoly r;
  if (R.is_zero(c)) return r;
  for (const auto& [m, k] : a.terms) {
    RatFunc p = R.mul(k, c);
    if (!p.is_zero()) r.terms.emplace(m, std::move(p));
  }
  return r;
}

FiberPoly fp_sub(const BaseRing& R, const FiberPoly& a, const FiberPoly& b) {
  return fp_add(R, a, fp_scale(R, b, RatFunc::constant(-1)));
}

FiberPoly fp_mul(const BaseRing& R, const FiberPoly& a, const FiberPoly& b) {
  FiberPoly r;
  for (const auto& [m1, c1] : a.terms)
    for (const auto& [m2, c2] : b.terms) {
      RatFunc p = R.mul(c1, c2);
      if (p.is_zero()) continue;
      Monomial m = m1 * m2;
      auto it = r.terms.find(m);
      if (it == r.terms.end()) {
        r.terms.emplace(std::move(m), std::move(p));
      } else {
        RatFunc s = R.add(it->second, p);
        if (s.is_zero())
          r.terms.erase(it);
        else
          it->second = std::move(s);
      }
    }
  return r;
}

std::string fp_str(const FiberPoly& a, const VarPool& pool) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : a.terms) {
    if (!first) os << " + ";
    first = false;
    os << "(" << ratfunc_str(c, pool) << ")";
    if (!m.is_one()) {
      os << "*";
      bool f2 = true;
      for (const auto& [v, e] : m.entries()) {
        if (!f2) os << "*";
        f2 = false;
        os << pool.name(v);
        if (e > 1) os << "^" << e;
      }
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

std::pair<Monomial, RatFunc> fp_leading(const FiberPoly& f, const MonomialOrder& ord) {
  auto best = f.terms.begin();
  for (auto it = std::next(f.terms.begin()); it != f.terms.end(); ++it)
    if (ord.greater(it->first, best->first)) best = it;
  return {best->first, best->second};
}

struct TrackedF {
  FiberPoly p;
  std::vector<FiberPoly> rep;
};

void f_reduce_full(const BaseRing& R, const MonomialOrder& ord, TrackedF& t,
                   const std::vector<TrackedF>& basis, bool track) {
  FiberPoly remainder;
  std::vector<std::pair<Monomial, RatFunc>> lts;
  lts.reserve(basis.size());
  for (const auto& b : basis) lts.push_back(fp_leading(b.p, ord));

  while (!t.p.is_zero()) {
    auto [lm, lc] = fp_leading(t.p, ord);
    bool hit = false;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      auto q = lm.try_div(lts[i].first);
      if (!q) continue;
      FiberPoly factor;
      factor.terms.emplace(*q, R.div(lc, lts[i].second));
      t.p = fp_sub(R, t.p, fp_mul(R, factor, basis[i].p));
      if (track)
        for (std::size_t j = 0; j < t.rep.size(); ++j)
          t.rep[j] = fp_sub(R, t.rep[j], fp_mul(R, factor, basis[i].rep[j]));
      hit = true;
      break;
    }
    if (!hit) {
      FiberPoly lt;
      lt.terms.emplace(lm, lc);
      remainder = fp_add(R, remainder, lt);
      t.p = fp_sub(R, t.p, lt);
    }
  }
  t.p = std::move(remainder);
}

void f_make_monic(const BaseRing& R, const MonomialOrder& ord, TrackedF& t, bool track) {
  if (t.p.is_zero()) return;
  RatFunc lc = fp_leading(t.p, ord).second;
  RatFunc inv = R.div(RatFunc::constant(1), lc);
  t.p = fp_scale(R, t.p, inv);
  if (track)
    for (auto& r : t.rep) r = fp_scale(R, r, inv);
}

}  // namespace

QuotientAlgebra QuotientAlgebra::compute(BaseRing ring, std::vector<VarId> fiber_vars,
                                         const std::vector<Poly>& gens, bool track_cofactors,
                                         const GroebnerLimits& limits) {
  QuotientAlgebra qa;
  qa.ring_ = std::move(ring);
  qa.xvars_ = std::move(fiber_vars);
  qa.xord_ = MonomialOrder::grevlex(qa.xvars_);
  const BaseRing& R = qa.ring_;
  const MonomialOrder& ord = qa.xord_;

  std::vector<TrackedF> basis;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    FiberPoly f = FiberPoly::from_poly(R, qa.xvars_, gens[i]);
    if (f.is_zero()) continue;
    TrackedF t{std::move(f), {}};
    if (track_cofactors) {
      t.rep.assign(gens.size(), FiberPoly{});
      t.rep[i] = FiberPoly::constant(RatFunc::constant(1));
    }
    basis.push_back(std::move(t));
  }

  auto lcm_deg = [&](std::size_t i, std::size_t j) {
    return Monomial::lcm(fp_leading(basis[i].p, ord).first, fp_leading(basis[j].p, ord).first)
        .degree();
  };
  std::set<std::tuple<std::uint64_t, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) pairs.insert({lcm_deg(i, j), i, j});

  std::size_t processed = 0;
  while (!pairs.empty()) {
    if (++processed > limits.max_pairs)
      throw CtError(ErrCode::resource_limit, "fiber groebner: pair limit exceeded");
    auto [deg, i, j] = *pairs.begin();
    pairs.erase(pairs.begin());

    auto [lmi, lci] = fp_leading(basis[i].p, ord);
    auto [lmj, lcj] = fp_leading(basis[j].p, ord);
    if (lmi.coprime(lmj)) continue;

    Monomial l = Monomial::lcm(lmi, lmj);
    FiberPoly fi, fj;
    fi.terms.emplace(*l.try_div(lmi), R.div(RatFunc::constant(1), lci));
    fj.terms.emplace(*l.try_div(lmj), R.div(RatFunc::constant(1), lcj));

    TrackedF s;
    s.p = fp_sub(R, fp_mul(R, fi, basis[i].p), fp_mul(R, fj, basis[j].p));
    if (track_cofactors) {
      s.rep.assign(gens.size(), FiberPoly{});
      for (std::size_t k = 0; k < gens.size(); ++k)
        s.rep[k] = fp_sub(R, fp_mul(R, fi, basis[i].rep[k]), fp_mul(R, fj, basis[j].rep[k]));
    }
    f_reduce_full(R, ord, s, basis, track_cofactors);
    if (s.p.is_zero()) continue;

    f_make_monic(R, ord, s, track_cofactors);
    basis.push_back(std::move(s));
    if (basis.size() > limits.max_basis)
      throw CtError(ErrCode::resource_limit, "fiber groebner: basis size limit exceeded");
    std::size_t n = basis.size() - 1;
    for (std::size_t k = 0; k < n; ++k) pairs.insert({lcm_deg(k, n), k, n});
  }

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Monomial lmi = fp_leading(basis[i].p, ord).first;
    bool redundant = false;
    for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
      if (i == j) continue;
      Monomial lmj = fp_leading(basis[j].p, ord).first;
      if (lmj.divides(lmi) && (lmj != lmi || j < i)) redundant = true;
    }
    if (!redundant) keep.push_back(i);
  }
  std::vector<TrackedF> minimal;
  for (std::size_t i : keep) minimal.push_back(std::move(basis[i]));

  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<TrackedF> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    if (!others.empty()) f_reduce_full(R, ord, minimal[i], others, track_cofactors);
    f_make_monic(R, ord, minimal[i], track_cofactors);
  }
  std::sort(minimal.begin(), minimal.end(), [&](const TrackedF& a, const TrackedF& b) {
    return ord.greater(fp_leading(a.p, ord).first, fp_leading(b.p, ord).first);
  });

  for (auto& t : minimal) {
    qa.gb_.push_back(std::move(t.p));
    if (track_cofactors) qa.cofactors_.push_back(std::move(t.rep));
  }

  // Standard monomials.
  bool trivial = !qa.gb_.empty() && qa.gb_.front().terms.size() >= 1 &&
                 fp_leading(qa.gb_.front(), ord).first.is_one();
  if (!trivial) {
    std::vector<Monomial> lms;
    for (const auto& b : qa.gb_) lms.push_back(fp_leading(b, ord).first);
    std::map<VarId, std::uint32_t> bound;
    for (VarId v : qa.xvars_) {
      std::uint32_t bnd = 0;
      for (const auto& lm : lms)
        if (lm.entries().size() == 1 && lm.entries()[0].first == v)
          if (bnd == 0 || lm.entries()[0].second < bnd) bnd = lm.entries()[0].second;
      if (bnd == 0)
        throw CtError(ErrCode::not_finite,
                      "generic fiber is not finite: no pure power of '" + R.pool->name(v) +
                          "' in the leading ideal");
      bound[v] = bnd;
    }
    auto is_standard = [&](const Monomial& m) {
      for (const auto& lm : lms)
        if (lm.divides(m)) return false;
      return true;
    };
    std::vector<Monomial> frontier{Monomial{}};
    std::set<Monomial> seen{Monomial{}};
    while (!frontier.empty()) {
      Monomial m = frontier.back();
      frontier.pop_back();
      if (!is_standard(m)) continue;
      qa.std_monos_.push_back(m);
      if (qa.std_monos_.size() > limits.max_basis)
        throw CtError(ErrCode::resource_limit, "fiber dimension cap exceeded");
      for (VarId v : qa.xvars_) {
        Monomial next = m * Monomial::var(v);
        if (next.exponent(v) >= bound[v]) continue;
        if (seen.insert(next).second) frontier.push_back(next);
      }
    }
    std::sort(qa.std_monos_.begin(), qa.std_monos_.end(), [](const Monomial& a, const Monomial& b) {
      if (a.degree() != b.degree()) return a.degree() < b.degree();
      return a < b;
    });
  }
  return qa;
}

FiberPoly QuotientAlgebra::nf(const FiberPoly& f) const {
  TrackedF t{f, {}};
  std::vector<TrackedF> basis;
  basis.reserve(gb_.size());
  for (const auto& b : gb_) basis.push_back(TrackedF{b, {}});
  if (!basis.empty()) f_reduce_full(ring_, xord_, t, basis, false);
  return t.p;
}

std::vector<FiberPoly> QuotientAlgebra::express_in_generators(const FiberPoly& f) const {
  if (!gb_.empty() && cofactors_.empty())
    throw std::logic_error("express_in_generators requires cofactor tracking");
  std::size_t ngens = gb_.empty() ? 0 : cofactors_.front().size();
  TrackedF t{f, std::vector<FiberPoly>(ngens)};
  std::vector<TrackedF> basis;
  basis.reserve(gb_.size());
  for (std::size_t i = 0; i < gb_.size(); ++i) basis.push_back(TrackedF{gb_[i], cofactors_[i]});
  if (!basis.empty()) f_reduce_full(ring_, xord_, t, basis, true);
  if (!t.p.is_zero())
    throw CtError(ErrCode::semantic, "element does not lie in the fiber ideal");
  // The reduction maintains t.p - sum_j t.rep_j * gens_j == f, so negate.
  for (auto& r : t.rep) r = fp_scale(ring_, r, RatFunc::constant(-1));
  return t.rep;
}

std::vector<RatFunc> QuotientAlgebra::coords(const FiberPoly& f) const {
  FiberPoly r = nf(f);
  std::vector<RatFunc> out(std_monos_.size(), RatFunc{});
  for (const auto& [m, c] : r.terms) {
    auto it = std::find(std_monos_.begin(), std_monos_.end(), m);
    if (it == std_monos_.end())
      throw std::logic_error("normal form contains a non-standard monomial");
    out[static_cast<std::size_t>(it - std_monos_.begin())] = c;
  }
  return out;
}

std::vector<std::vector<RatFunc>> QuotientAlgebra::mult_matrix(const FiberPoly& h) const {
  const std::size_t n = std_monos_.size();
  std::vector<std::vector<RatFunc>> m(n, std::vector<RatFunc>(n, RatFunc{}));
  for (std::size_t j = 0; j < n; ++j) {
    FiberPoly mj;
    mj.terms.emplace(std_monos_[j], RatFunc::constant(1));
    std::vector<RatFunc> col = coords(fp_mul(ring_, h, mj));
    for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
  }
  return m;
}

RatFunc QuotientAlgebra::trace_mult(const FiberPoly& h) const {
  RatFunc tr;
  for (std::size_t j = 0; j < std_monos_.size(); ++j) {
    FiberPoly mj;
    mj.terms.emplace(std_monos_[j], RatFunc::constant(1));
    FiberPoly prod = nf(fp_mul(ring_, h, mj));
    auto it = prod.terms.find(std_monos_[j]);
    if (it != prod.terms.end()) tr = ring_.add(tr, it->second);
  }
  return ring_.reduce(tr);
}

std::vector<RatFunc> QuotientAlgebra::charpoly_of(const FiberPoly& h) const {
  KOps ops{&ring_};
  return charpoly<RatFunc, KOps>(mult_matrix(h), ops);
}

Ideal specialize_at(const std::vector<Poly>& gens, const std::map<VarId, Rational>& point,
                    const std::vector<VarId>& fiber_vars, const GroebnerLimits& limits) {
  std::vector<Poly> sp;
  for (const auto& g : gens) {
    Poly s = g.eval_partial(point);
    for (VarId v : s.support())
      if (!contains_var(fiber_vars, v))
        throw CtError(ErrCode::semantic, "specialization left a non-fiber variable free");
    if (!s.is_zero()) sp.push_back(s);
  }
  return groebner(sp, MonomialOrder::grevlex(fiber_vars), false, limits);
}

SpecializedAlgebra SpecializedAlgebra::make(Ideal ideal, std::vector<VarId> vars) {
  SpecializedAlgebra s;
  s.monos = standard_monomials(ideal, vars);
  s.gb = std::move(ideal);
  s.vars = std::move(vars);
  return s;
}

UniPoly SpecializedAlgebra::charpoly_q(const Poly& h) const {
  const std::size_t n = monos.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t j = 0; j < n; ++j) {
    Poly mono;
    mono.add_term(monos[j], 1);
    Poly img = normal_form(h * mono, gb);
    for (const auto& [mm, c] : img.terms()) {
      auto it = std::find(monos.begin(), monos.end(), mm);
      if (it == monos.end()) throw std::logic_error("non-standard monomial in normal form");
      m[static_cast<std::size_t>(it - monos.begin())][j] = c;
    }
  }
  std::vector<Rational> cp = charpoly<Rational, RationalOps>(m, RationalOps{});
  return UniPoly(cp.begin(), cp.end());
}

}  // namespace ct
