#include "covering.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "linalg.hpp"
#include "symprod.hpp"

namespace ct {

namespace {

bool contains_var(const std::vector<VarId>& vars, VarId v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

std::string join_names(const VarPool& pool, const std::vector<VarId>& vars) {
  std::string s;
  for (VarId v : vars) {
    if (!s.empty()) s += ", ";
    s += pool.name(v);
  }
  return s;
}

}  // namespace

const BaseRing& Family::base_ring() const {
  if (!base_ring_) base_ring_ = BaseRing::make(pool, base_vars, chart_vars, base_gens);
  return *base_ring_;
}

const BaseRing& Family::param_ring() const {
  if (!param_ring_) {
    if (param_vars.empty()) throw CtError(ErrCode::semantic, "family has no parameter block");
    param_ring_ = BaseRing::make(pool, param_vars, chart_vars, {});
  }
  return *param_ring_;
}

const std::vector<Poly>& Family::effective_gens(const Component& c) const {
  if (!c.ideal_gens.empty()) return c.ideal_gens;
  if (!family_ideal.empty()) return family_ideal;
  throw CtError(ErrCode::semantic,
                "component '" + c.name + "' has no implicit presentation (ideal block)");
}

bool Family::all_parametric() const {
  if (components.empty()) return false;
  for (const auto& c : components)
    if (c.branches.empty()) return false;
  return true;
}

bool Family::any_implicit() const {
  if (!family_ideal.empty()) return true;
  for (const auto& c : components)
    if (!c.ideal_gens.empty()) return true;
  return false;
}

// ---------------------------------------------------------------------------

namespace {

// Base ring of one component: base vars modulo I_S + the component's ideal.
BaseRing component_base_ring(const Family& f, const Component& c) {
  std::vector<Poly> gens = f.base_gens;
  gens.insert(gens.end(), c.over_gens.begin(), c.over_gens.end());
  return BaseRing::make(f.pool, f.base_vars, f.chart_vars, gens);
}

QuotientAlgebra component_algebra(const Family& f, const Component& c, bool track = false) {
  return QuotientAlgebra::compute(component_base_ring(f, c), f.fiber_vars, f.effective_gens(c),
                                  track);
}

// Substitution map for one branch: fiber vars -> branch expressions, plus
// base vars -> parameter polynomials when a parameter block is present.
std::map<VarId, RatFunc> branch_subst(const Family& f, const std::map<VarId, RatFunc>& branch) {
  std::map<VarId, RatFunc> repl = branch;
  for (const auto& [s, phi] : f.param_subst) repl.emplace(s, RatFunc(phi));
  return repl;
}

void require_full_support_components(const Family& f, const char* op) {
  for (const auto& c : f.components)
    if (!c.over_gens.empty())
      throw CtError(ErrCode::semantic,
                    std::string(op) + " requires components supported over the whole base; '" +
                        c.name + "' lies over a proper subvariety");
}

}  // namespace

int degree_generic(const Family& f) {
  int deg = 0;
  for (const auto& c : f.components) {
    if (!c.branches.empty()) {
      deg += c.weight * static_cast<int>(c.branches.size());
    } else {
      QuotientAlgebra qa = component_algebra(f, c);
      deg += c.weight * static_cast<int>(qa.dim());
    }
  }
  return deg;
}

RatFunc trace0_parametric(const Family& f, const Poly& h) {
  if (!f.all_parametric())
    throw CtError(ErrCode::semantic, "family has no branch presentation for every component");
  require_full_support_components(f, "trace0");
  RatFunc acc;
  for (const auto& c : f.components) {
    for (const auto& br : c.branches) {
      RatFunc val = RatFunc(h).subst(branch_subst(f, br));
      acc = acc + val * RatFunc::constant(c.weight);
    }
  }
  for (VarId v : acc.support())
    if (contains_var(f.fiber_vars, v))
      throw CtError(ErrCode::semantic, "branch substitution left fiber variable '" +
                                           f.pool.name(v) + "' free");
  if (!f.param_vars.empty()) return lift_to_base(f, acc);
  return simplify_on(f.base_ring(), acc);
}

RatFunc trace0_implicit(const Family& f, const Poly& h) {
  if (!f.any_implicit())
    throw CtError(ErrCode::semantic, "family has no implicit presentation");
  require_full_support_components(f, "trace0");
  const BaseRing& R = f.base_ring();
  RatFunc acc;
  for (const auto& c : f.components) {
    QuotientAlgebra qa = QuotientAlgebra::compute(R, f.fiber_vars, f.effective_gens(c));
    FiberPoly fh = FiberPoly::from_poly(R, f.fiber_vars, h);
    acc = R.add(acc, R.mul(qa.trace_mult(fh), RatFunc::constant(c.weight)));
  }
  return simplify_on(R, acc);
}

RatFunc trace0(const Family& f, const Poly& h) {
  if (f.all_parametric()) return trace0_parametric(f, h);
  return trace0_implicit(f, h);
}

RelativeForm trace_form(const Family& f, const RelativeForm& w) {
  for (const auto& [k, c] : w.terms)
    for (VarId v : k.d)
      if (!contains_var(f.chart_vars, v) && !contains_var(f.fiber_vars, v))
        throw CtError(ErrCode::semantic,
                      "relative form contains differential of non-chart, non-fiber variable '" +
                          f.pool.name(v) + "'");
  if (w.degree() == 0) {
    RelativeForm out;
    for (const auto& [k, c] : w.terms) {
      if (!c.is_poly())
        throw CtError(ErrCode::semantic, "degree-0 trace expects polynomial integrand");
      RatFunc tr = trace0(f, c.as_poly());
      if (!tr.is_zero()) out.terms.emplace(k, tr);
    }
    return out;
  }
  if (!f.all_parametric())
    throw CtError(ErrCode::semantic,
                  "form traces require a branch presentation (implicit families support only "
                  "degree-0 traces)");
  require_full_support_components(f, "trace_form");

  RelativeForm acc;
  for (const auto& c : f.components) {
    for (const auto& br : c.branches) {
      RelativeForm pb = pullback_form(w, branch_subst(f, br), f.chart_vars);
      acc = acc + pb.scale(RatFunc::constant(c.weight));
    }
  }
  // Lift / reduce every coefficient into the base ring.
  RelativeForm out;
  for (const auto& [k, c] : acc.terms) {
    for (VarId v : k.d)
      if (!contains_var(f.chart_vars, v))
        throw std::logic_error("pullback left a non-chart differential");
    RatFunc lifted =
        f.param_vars.empty() ? simplify_on(f.base_ring(), c) : lift_to_base(f, c);
    if (!lifted.is_zero()) out.terms.emplace(k, std::move(lifted));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// One linear-algebra slice of the lift problem: for a fixed chart monomial
// m_t, the constraint gn_t * (D o phi) = gd * (N_t o phi) over the params.
struct LiftSlice {
  Monomial tmono;
  Poly rhs_factor;  // gn_t, in params only
};

Poly sparse_to_poly(const QRow& v, const std::vector<Monomial>& monos) {
  Poly p;
  for (std::size_t i = 0; i < monos.size(); ++i)
    if (!rat_is_zero(v[i])) p.add_term(monos[i], v[i]);
  return p;
}

QMatrix columns_to_matrix(const std::vector<Poly>& cols) {
  std::map<Monomial, std::size_t> row_of;
  for (const auto& c : cols)
    for (const auto& [m, cc] : c.terms()) row_of.emplace(m, row_of.size());
  QMatrix a(row_of.size(), QRow(cols.size(), Rational(0)));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [m, cc] : cols[j].terms()) a[row_of[m]][j] = cc;
  return a;
}

// Common total degree of the terms of p; nullopt when p is zero or mixed.
std::optional<int> homogeneous_degree(const Poly& p) {
  std::optional<int> d;
  for (const auto& [m, c] : p.terms()) {
    int md = static_cast<int>(m.degree());
    if (!d)
      d = md;
    else if (*d != md)
      return std::nullopt;
  }
  return d;
}

// Solve sum_i x_i * cols_i = rhs by comparing monomial coefficients.
std::optional<QRow> solve_combination(const std::vector<Poly>& cols, const Poly& rhs) {
  std::map<Monomial, std::size_t> row_of;
  for (const auto& c : cols)
    for (const auto& [m, cc] : c.terms()) row_of.emplace(m, row_of.size());
  for (const auto& [m, cc] : rhs.terms()) row_of.emplace(m, row_of.size());
  QMatrix a(row_of.size(), QRow(cols.size(), Rational(0)));
  QRow r(row_of.size(), Rational(0));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [m, cc] : cols[j].terms()) a[row_of[m]][j] = cc;
  for (const auto& [m, cc] : rhs.terms()) r[row_of[m]] = cc;
  return solve_linear(a, r);
}

// Span intersection over Q^dim; inputs and output are row vectors.
std::vector<QRow> intersect_spans(const std::vector<QRow>& u, const std::vector<QRow>& w,
                                  std::size_t dim) {
  QMatrix a(dim, QRow(u.size() + w.size(), Rational(0)));
  for (std::size_t j = 0; j < u.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) a[i][j] = u[j][i];
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) a[i][u.size() + j] = -w[j][i];
  std::vector<QRow> out;
  for (const auto& z : kernel_basis(a, u.size() + w.size())) {
    QRow pt(dim, Rational(0));
    for (std::size_t j = 0; j < u.size(); ++j)
      for (std::size_t i = 0; i < dim; ++i) pt[i] += z[j] * u[j][i];
    bool nonzero = false;
    for (const auto& c : pt)
      if (!rat_is_zero(c)) nonzero = true;
    if (nonzero) out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace

RatFunc lift_to_base(const Family& f, const RatFunc& g, int max_degree) {
  bool uses_params = false;
  for (VarId v : g.support())
    if (contains_var(f.param_vars, v)) uses_params = true;
  if (!uses_params) return simplify_on(f.base_ring(), g);
  if (g.is_zero()) return RatFunc{};

  const Poly& gn = g.num();
  const Poly& gd = g.den();
  auto is_chart = [&](VarId v) { return contains_var(f.chart_vars, v); };
  const std::map<VarId, Poly>& phi = f.param_subst;
  const BaseRing& R = f.base_ring();

  if (gd.degree_if(is_chart) != 0)
    throw CtError(ErrCode::lift_failure,
                  "branch-sum denominator involves chart variables; no base lift attempted");

  // Slice by chart monomials: gn = sum_t gn_t(params) * m_t. Since phi and gd
  // are chart-free, each slice is an independent constraint sharing D.
  std::map<Monomial, Poly> slices_map = gn.split_by(is_chart);
  std::vector<LiftSlice> slices;
  for (auto& [mt, coeff] : slices_map) slices.push_back({mt, coeff});

  auto finish = [&](const Poly& nn, const Poly& dd) {
    return simplify_on(R, RatFunc(nn, dd));
  };

  // When every substitution image is homogeneous of one degree h, numerator
  // and denominator of a lift can be taken homogeneous too (grade the
  // constraint by total parameter degree), which keeps the systems small.
  int hsub = 0;
  bool graded = !phi.empty();
  for (const auto& [v, p] : phi) {
    auto d = homogeneous_degree(p);
    if (!d || *d == 0 || (hsub != 0 && *d != hsub)) {
      graded = false;
      break;
    }
    hsub = *d;
  }
  std::optional<int> gd_deg = homogeneous_degree(gd);
  if (!gd_deg) graded = false;
  std::vector<int> delta(slices.size(), 0);  // N_t degree = D degree + delta_t
  if (graded) {
    for (std::size_t si = 0; si < slices.size(); ++si) {
      auto d = homogeneous_degree(slices[si].rhs_factor);
      if (!d) {
        graded = false;
        break;
      }
      int num = *d - *gd_deg;
      if (num % hsub != 0)
        throw CtError(ErrCode::lift_failure,
                      "branch sum cannot come from the base: parameter-degree obstruction "
                      "under the substitution");
      delta[si] = num / hsub;
    }
  }

  if (graded) {
    std::map<int, std::pair<std::vector<Monomial>, std::vector<Poly>>> levels;
    auto level = [&](int d) -> const std::pair<std::vector<Monomial>, std::vector<Poly>>& {
      auto it = levels.find(d);
      if (it == levels.end()) {
        std::vector<Monomial> ms = monomials_of_degree(f.base_vars, static_cast<std::uint32_t>(d));
        if (ms.size() > 4000)
          throw CtError(ErrCode::resource_limit, "base lift exceeded the matrix size budget");
        std::vector<Poly> im(ms.size());
        for (std::size_t i = 0; i < ms.size(); ++i) {
          Poly p;
          p.add_term(ms[i], 1);
          im[i] = p.subst(phi);
        }
        it = levels.emplace(d, std::make_pair(std::move(ms), std::move(im))).first;
      }
      return it->second;
    };

    for (int e = 0; e <= max_degree; ++e) {
      bool feasible = true;
      for (int dt : delta) {
        int n = e + dt;
        if (n < 0 || n > max_degree) feasible = false;
      }
      if (!feasible) continue;

      if (e == 0) {  // constant denominators are all equivalent to D = 1
        Poly nn;
        bool ok = true;
        for (std::size_t si = 0; si < slices.size(); ++si) {
          const auto& [nms, nimg] = level(delta[si]);
          std::vector<Poly> cols(nimg.size());
          for (std::size_t i = 0; i < nimg.size(); ++i) cols[i] = gd * nimg[i];
          auto sol = solve_combination(cols, slices[si].rhs_factor);
          if (!sol) {
            ok = false;
            break;
          }
          Poly mt_poly;
          mt_poly.add_term(slices[si].tmono, 1);
          nn += sparse_to_poly(*sol, nms) * mt_poly;
        }
        if (ok) return finish(nn, Poly::constant(1));
        continue;
      }

      const auto& [dms, dimg] = level(e);
      std::vector<QRow> dspace;
      bool first = true, dead = false;
      for (std::size_t si = 0; si < slices.size(); ++si) {
        const auto& [nms, nimg] = level(e + delta[si]);
        std::vector<Poly> cols;
        cols.reserve(nimg.size() + dimg.size());
        for (const auto& im : nimg) cols.push_back(-(gd * im));
        for (const auto& im : dimg) cols.push_back(slices[si].rhs_factor * im);
        QMatrix a = columns_to_matrix(cols);
        std::vector<QRow> ker = kernel_basis(a, cols.size());
        std::vector<QRow> dproj;
        for (const auto& v : ker)
          dproj.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(nimg.size()), v.end());
        if (first) {
          dspace = std::move(dproj);
          first = false;
        } else {
          dspace = intersect_spans(dspace, dproj, dms.size());
        }
        if (dspace.empty()) {
          dead = true;
          break;
        }
      }
      if (dead || slices.empty()) continue;

      std::vector<QRow> candidates = dspace;
      if (dspace.size() > 1) {
        QRow sum(dms.size(), Rational(0));
        for (const auto& v : dspace)
          for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
        candidates.push_back(std::move(sum));
      }
      for (const auto& dvec : candidates) {
        Poly dd = sparse_to_poly(dvec, dms);
        if (dd.is_zero() || R.nf(dd).is_zero()) continue;
        Poly dimg_poly = dd.subst(phi);
        if (dimg_poly.is_zero()) continue;
        Poly nn;
        bool ok = true;
        for (std::size_t si = 0; si < slices.size(); ++si) {
          const auto& [nms, nimg] = level(e + delta[si]);
          std::vector<Poly> cols(nimg.size());
          for (std::size_t i = 0; i < nimg.size(); ++i) cols[i] = gd * nimg[i];
          auto sol = solve_combination(cols, slices[si].rhs_factor * dimg_poly);
          if (!sol) {
            ok = false;
            break;
          }
          Poly mt_poly;
          mt_poly.add_term(slices[si].tmono, 1);
          nn += sparse_to_poly(*sol, nms) * mt_poly;
        }
        if (ok) return finish(nn, dd);
      }
    }
    throw CtError(ErrCode::lift_failure,
                  "could not express the branch sum through the base substitution (degree cap " +
                      std::to_string(max_degree) + ")");
  }

  for (int b = 0; b <= max_degree; ++b) {
    std::vector<Monomial> smonos = monomials_up_to(f.base_vars, static_cast<std::uint32_t>(b));
    if (smonos.size() > 4000)
      throw CtError(ErrCode::resource_limit, "base lift exceeded the matrix size budget");
    std::vector<Poly> img(smonos.size());
    for (std::size_t i = 0; i < smonos.size(); ++i) {
      Poly ms;
      ms.add_term(smonos[i], 1);
      img[i] = ms.subst(phi);
    }

    // Fast path: D = 1. Solve gd * (N_t o phi) = gn_t per slice.
    {
      Poly nn;
      bool ok = true;
      for (const auto& sl : slices) {
        std::vector<Poly> cols(smonos.size());
        for (std::size_t i = 0; i < smonos.size(); ++i) cols[i] = gd * img[i];
        std::map<Monomial, std::size_t> row_of;
        for (const auto& c : cols)
          for (const auto& [m, cc] : c.terms()) row_of.emplace(m, row_of.size());
        for (const auto& [m, cc] : sl.rhs_factor.terms()) row_of.emplace(m, row_of.size());
        QMatrix a(row_of.size(), QRow(cols.size(), Rational(0)));
        QRow rhs(row_of.size(), Rational(0));
        for (std::size_t j = 0; j < cols.size(); ++j)
          for (const auto& [m, cc] : cols[j].terms()) a[row_of[m]][j] = cc;
        for (const auto& [m, cc] : sl.rhs_factor.terms()) rhs[row_of[m]] = cc;
        auto sol = solve_linear(a, rhs);
        if (!sol) {
          ok = false;
          break;
        }
        Poly nt = sparse_to_poly(*sol, smonos);
        Poly mt_poly;
        mt_poly.add_term(sl.tmono, 1);
        nn += nt * mt_poly;
      }
      if (ok) return finish(nn, Poly::constant(1));
    }

    // Shared-denominator path: per slice, kernel of
    //   gn_t * (D o phi) - gd * (N_t o phi) = 0
    // in the unknowns (N_t, D); intersect the D-projections across slices.
    std::vector<QRow> dspace;
    bool first = true, dead = false;
    std::vector<std::vector<QRow>> slice_kernels;
    for (const auto& sl : slices) {
      std::vector<Poly> cols;
      cols.reserve(2 * smonos.size());
      for (std::size_t i = 0; i < smonos.size(); ++i) cols.push_back(-(gd * img[i]));
      for (std::size_t i = 0; i < smonos.size(); ++i) cols.push_back(sl.rhs_factor * img[i]);
      QMatrix a = columns_to_matrix(cols);
      std::vector<QRow> ker = kernel_basis(a, cols.size());
      std::vector<QRow> dproj;
      for (const auto& v : ker)
        dproj.emplace_back(v.begin() + static_cast<std::ptrdiff_t>(smonos.size()), v.end());
      slice_kernels.push_back(std::move(ker));
      if (first) {
        dspace = std::move(dproj);
        first = false;
      } else {
        dspace = intersect_spans(dspace, dproj, smonos.size());
      }
      if (dspace.empty()) {
        dead = true;
        break;
      }
    }
    if (dead || slices.empty()) continue;

    std::vector<QRow> candidates = dspace;
    if (dspace.size() > 1) {
      QRow sum(smonos.size(), Rational(0));
      for (const auto& v : dspace)
        for (std::size_t i = 0; i < v.size(); ++i) sum[i] += v[i];
      candidates.push_back(std::move(sum));
    }
    for (const auto& dvec : candidates) {
      Poly dd = sparse_to_poly(dvec, smonos);
      if (dd.is_zero() || R.nf(dd).is_zero()) continue;
      Poly dimg = dd.subst(phi);
      if (dimg.is_zero()) continue;
      Poly nn;
      bool ok = true;
      for (const auto& sl : slices) {
        std::vector<Poly> cols(smonos.size());
        for (std::size_t i = 0; i < smonos.size(); ++i) cols[i] = gd * img[i];
        Poly rhs_poly = sl.rhs_factor * dimg;
        std::map<Monomial, std::size_t> row_of;
        for (const auto& c : cols)
          for (const auto& [m, cc] : c.terms()) row_of.emplace(m, row_of.size());
        for (const auto& [m, cc] : rhs_poly.terms()) row_of.emplace(m, row_of.size());
        QMatrix a(row_of.size(), QRow(cols.size(), Rational(0)));
        QRow rhs(row_of.size(), Rational(0));
        for (std::size_t j = 0; j < cols.size(); ++j)
          for (const auto& [m, cc] : cols[j].terms()) a[row_of[m]][j] = cc;
        for (const auto& [m, cc] : rhs_poly.terms()) rhs[row_of[m]] = cc;
        auto sol = solve_linear(a, rhs);
        if (!sol) {
          ok = false;
          break;
        }
        Poly mt_poly;
        mt_poly.add_term(sl.tmono, 1);
        nn += sparse_to_poly(*sol, smonos) * mt_poly;
      }
      if (ok) return finish(nn, dd);
    }
  }
  throw CtError(ErrCode::lift_failure,
                "could not express the branch sum through the base substitution (degree cap " +
                    std::to_string(max_degree) + ")");
}

// ---------------------------------------------------------------------------

std::vector<Rational> random_coeffs(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 0xbf58476d1ce4e5b9ull);
  std::vector<Rational> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    long v = static_cast<long>(1 + rng() % 23);
    if (rng() & 1) v = -v;
    out.emplace_back(v);
  }
  return out;
}

using SpecAlg = SpecializedAlgebra;

Poly random_linear_form(const std::vector<VarId>& vars, std::uint64_t seed) {
  std::vector<Rational> cs = random_coeffs(vars.size(), seed);
  Poly l;
  for (std::size_t i = 0; i < vars.size(); ++i) l += Poly::variable(vars[i]) * cs[i];
  return l;
}

FiberCount fiber_count(const Family& f, const std::map<VarId, Rational>& point, int trials,
                       std::uint64_t seed) {
  // The point must assign every base and chart variable and lie on V(I_S).
  std::vector<VarId> missing;
  for (VarId v : f.base_vars)
    if (!point.count(v)) missing.push_back(v);
  for (VarId v : f.chart_vars)
    if (!point.count(v)) missing.push_back(v);
  if (!missing.empty())
    throw CtError(ErrCode::invalid_arg,
                  "sample point must assign: " + join_names(f.pool, missing));
  for (const auto& g : f.base_gens)
    if (!rat_is_zero(g.eval_partial(point).constant_value()))
      throw CtError(ErrCode::invalid_arg, "sample point does not lie on the base");

  FiberCount out;
  if (trials < 1) trials = 1;
  // Eliminants per component per trial.
  std::vector<std::vector<UniPoly>> elim_by_trial(static_cast<std::size_t>(trials));

  for (const auto& c : f.components) {
    bool present = true;
    for (const auto& g : c.over_gens)
      if (!rat_is_zero(g.eval_partial(point).constant_value())) present = false;
    if (!present) continue;

    FiberCountRow row;
    row.component = c.name;
    row.weight = c.weight;

    if (!c.branches.empty() && c.ideal_gens.empty() && f.family_ideal.empty()) {
      // Parametric fiber: evaluate the branches.
      std::map<VarId, RatFunc> pt_subst;
      for (const auto& [v, q] : point) pt_subst.emplace(v, RatFunc::constant(q));
      std::vector<std::vector<Rational>> values;
      for (const auto& br : c.branches) {
        std::vector<Rational> val;
        for (VarId xv : f.fiber_vars) {
          auto it = br.find(xv);
          if (it == br.end())
            throw CtError(ErrCode::semantic, "branch misses fiber variable " + f.pool.name(xv));
          RatFunc e = it->second;
          if (!f.param_subst.empty())
            throw CtError(ErrCode::semantic,
                          "fiber evaluation of parameter-block branches is not supported; give "
                          "an ideal presentation");
          RatFunc at = e.subst(pt_subst);
          if (!at.is_poly() || !at.as_poly().is_constant())
            throw CtError(ErrCode::degenerate,
                          "branch is not defined at the sample point (denominator vanishes)");
          val.push_back(at.as_poly().constant_value());
        }
        values.push_back(std::move(val));
      }
      row.dim = values.size();
      std::set<std::vector<Rational>> distinct_set;
      for (auto& v : values) distinct_set.insert(v);
      row.distinct = static_cast<int>(distinct_set.size());
      for (int tr = 0; tr < trials; ++tr) {
        Poly l = random_linear_form(f.fiber_vars, seed + 101 * static_cast<std::uint64_t>(tr));
        UniPoly elim{Rational(1)};
        for (const auto& v : values) {
          std::map<VarId, Rational> assign;
          for (std::size_t i = 0; i < f.fiber_vars.size(); ++i) assign[f.fiber_vars[i]] = v[i];
          Rational lv = l.eval_partial(assign).constant_value();
          elim = uni_mul(elim, UniPoly{-lv, Rational(1)});
        }
        elim_by_trial[static_cast<std::size_t>(tr)].push_back(uni_squarefree_part(elim));
      }
    } else {
      Ideal spec = specialize_at(f.effective_gens(c), point, f.fiber_vars);
      SpecAlg alg = SpecAlg::make(std::move(spec), f.fiber_vars);
      row.dim = alg.dim();
      int best = 0;
      for (int tr = 0; tr < trials; ++tr) {
        Poly l = random_linear_form(f.fiber_vars, seed + 101 * static_cast<std::uint64_t>(tr));
        UniPoly cp = alg.charpoly_q(l);
        UniPoly sf = uni_squarefree_part(cp);
        best = std::max(best, uni_degree(sf));
        elim_by_trial[static_cast<std::size_t>(tr)].push_back(std::move(sf));
      }
      row.distinct = best;
    }
    out.with_multiplicity += static_cast<std::size_t>(row.weight) * row.dim;
    out.rows.push_back(std::move(row));
  }

  int best_union = 0;
  for (const auto& elims : elim_by_trial) {
    UniPoly prod{Rational(1)};
    for (const auto& e : elims) prod = uni_mul(prod, e);
    best_union = std::max(best_union, uni_degree(uni_squarefree_part(prod)));
  }
  out.distinct = best_union;
  return out;
}

int generic_projection_degree(const VarPool& pool, const std::vector<Poly>& gens,
                              const std::vector<VarId>& ambient, int target_dim, int trials,
                              std::uint64_t seed) {
  if (target_dim < 0) throw CtError(ErrCode::invalid_arg, "target dimension must be >= 0");
  std::optional<int> best;
  for (int tr = 0; tr < trials; ++tr) {
    VarPool local = pool;
    std::vector<VarId> wvars;
    for (int m = 0; m < target_dim; ++m) wvars.push_back(local.add("_w" + std::to_string(m + 1)));
    std::vector<Poly> full = gens;
    for (int m = 0; m < target_dim; ++m) {
      Poly l = random_linear_form(ambient,
                                  seed + 977 * static_cast<std::uint64_t>(tr) +
                                      31 * static_cast<std::uint64_t>(m));
      full.push_back(Poly::variable(wvars[static_cast<std::size_t>(m)]) - l);
    }
    try {
      BaseRing R = BaseRing::make(local, wvars, {}, {});
      QuotientAlgebra qa = QuotientAlgebra::compute(R, ambient, full);
      int d = static_cast<int>(qa.dim());
      if (!best || d < *best) best = d;
    } catch (const CtError& e) {
      if (e.code != ErrCode::not_finite && e.code != ErrCode::degenerate) throw;
    }
  }
  if (!best)
    throw CtError(ErrCode::degenerate, "all sampled projections were degenerate");
  return *best;
}

int multiplicity_of_point(const VarPool& pool, const std::vector<VarId>& ambient,
                          const std::vector<CycleComponent>& cycle,
                          const std::map<VarId, Rational>& z, int trials, std::uint64_t seed) {
  for (VarId v : ambient)
    if (!z.count(v))
      throw CtError(ErrCode::invalid_arg,
                    "point must assign every ambient variable; missing " + pool.name(v));
  if (trials < 1) trials = 1;

  int total = 0;
  bool on_support = false;
  for (std::size_t ci = 0; ci < cycle.size(); ++ci) {
    const CycleComponent& c = cycle[ci];
    bool vanishes = true;
    for (const auto& g : c.gens)
      if (!rat_is_zero(g.eval_partial(z).constant_value())) vanishes = false;
    if (!vanishes) continue;
    on_support = true;

    // mu_z of this component: cut the germ down to dimension zero with
    // generic affine slices through z, then read off the multiplicity of z
    // as the root multiplicity of a generic linear form's value in the
    // characteristic polynomial. Special directions only overcount, so the
    // minimum over seeded trials approximates the generic value.
    std::optional<int> comp_min;
    for (int tr = 0; tr < trials; ++tr) {
      std::uint64_t s = seed + 7919 * static_cast<std::uint64_t>(tr) + 97 * ci;
      for (std::size_t d = 0; d <= ambient.size(); ++d) {
        std::vector<Poly> sliced = c.gens;
        for (std::size_t m = 0; m < d; ++m) {
          Poly l = random_linear_form(ambient, s + 13 * (m + 1));
          Rational shift = l.eval_partial(z).constant_value();
          sliced.push_back(l - Poly::constant(shift));
        }
        Ideal gb = groebner(sliced, MonomialOrder::grevlex(ambient));
        if (!is_zero_dimensional(gb, ambient)) continue;
        SpecAlg alg = SpecAlg::make(std::move(gb), ambient);
        Poly lambda = random_linear_form(ambient, s + 4099);
        UniPoly cp = alg.charpoly_q(lambda);
        Rational at = lambda.eval_partial(z).constant_value();
        int mult = uni_root_multiplicity(cp, at);
        if (mult == 0) throw std::logic_error("point not a root of its own germ eliminant");
        if (!comp_min || mult < *comp_min) comp_min = mult;
        break;
      }
    }
    if (!comp_min)
      throw CtError(ErrCode::degenerate, "all sampled slicings were degenerate");
    total += c.weight * *comp_min;
  }
  if (!on_support)
    throw CtError(ErrCode::invalid_arg, "point does not lie on the cycle support");
  return total;
}

// ---------------------------------------------------------------------------

ClassifyResult classifying_map(const Family& f, int up_to_degree, std::uint64_t seed) {
  ClassifyResult out;
  out.degree = degree_generic(f);
  const BaseRing& R = f.base_ring();
  for (int d = 1; d <= up_to_degree; ++d)
    for (const auto& m : monomials_of_degree(f.fiber_vars, static_cast<std::uint32_t>(d))) {
      Poly hp;
      hp.add_term(m, 1);
      ClassifyEntry e;
      e.mono = m;
      e.trace = trace0(f, hp);
      e.regularity = is_regular_on(R, e.trace);
      out.entries.push_back(std::move(e));
    }

  // Newton-relation spot check on rational samples of the base.
  if (f.all_parametric()) {
    for (int probe = 0; probe < 3; ++probe) {
      auto pt = sample_base_point(f, seed + static_cast<std::uint64_t>(probe));
      if (!pt) continue;
      std::map<VarId, RatFunc> pt_subst;
      for (const auto& [v, q] : *pt) pt_subst.emplace(v, RatFunc::constant(q));
      PointTuple tuple;
      std::vector<std::vector<Poly>> weights;
      bool ok = true;
      for (const auto& c : f.components)
        for (const auto& br : c.branches) {
          std::vector<Poly> row;
          for (VarId xv : f.fiber_vars) {
            RatFunc val = br.at(xv).subst(pt_subst);
            if (!val.is_poly() || !val.as_poly().is_constant()) {
              ok = false;
              break;
            }
            row.push_back(Poly::constant(val.as_poly().constant_value()));
          }
          if (!ok) break;
          tuple.pts.push_back(std::move(row));
          weights.push_back({Poly::constant(c.weight)});
        }
      if (!ok) continue;
      VarPool duals_pool;
      std::vector<VarId> duals;
      for (std::size_t i = 0; i < f.fiber_vars.size(); ++i)
        duals.push_back(duals_pool.add("e" + std::to_string(i + 1)));
      int k = static_cast<int>(tuple.k());
      for (int l = k; l <= k + 2; ++l) {
        for (const auto& comp : verify_newton_relation(tuple, weights, duals, l))
          if (!comp.is_zero()) out.newton_consistent = false;
      }
    }
  }
  return out;
}

std::optional<std::map<VarId, Rational>> sample_base_point(const Family& f, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  auto small = [&]() { return Rational(static_cast<long>(rng() % 7) - 3); };

  auto branch_defined = [&](const std::map<VarId, Rational>& full) {
    std::map<VarId, RatFunc> subst;
    for (const auto& [v, q] : full) subst.emplace(v, RatFunc::constant(q));
    for (const auto& c : f.components)
      for (const auto& br : c.branches)
        for (const auto& [xv, e] : br) {
          try {
            RatFunc val = e.subst(subst);
            if (!val.is_poly()) return false;
          } catch (const std::exception&) {
            return false;
          }
        }
    return true;
  };

  for (int attempt = 0; attempt < 400; ++attempt) {
    std::map<VarId, Rational> pt;
    if (!f.param_vars.empty()) {
      std::map<VarId, Rational> params;
      for (VarId v : f.param_vars) params[v] = small();
      for (VarId v : f.base_vars) {
        auto it = f.param_subst.find(v);
        if (it == f.param_subst.end()) return std::nullopt;
        pt[v] = it->second.eval_partial(params).constant_value();
      }
      for (const auto& [pv, q] : params) pt[pv] = q;  // params available to branches
    } else {
      for (VarId v : f.base_vars) pt[v] = small();
      bool on_base = true;
      for (const auto& g : f.base_gens)
        if (!rat_is_zero(g.eval_partial(pt).constant_value())) on_base = false;
      if (!on_base) continue;
    }
    for (VarId v : f.chart_vars) pt[v] = small();
    if (!branch_defined(pt)) continue;
    return pt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// Rebuild a polynomial over another pool through a substitution map.
Poly transplant(const Poly& p, const std::map<VarId, Poly>& repl) {
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    Poly term = Poly::constant(c);
    for (const auto& [v, e] : m.entries()) {
      auto it = repl.find(v);
      if (it == repl.end()) throw CtError(ErrCode::semantic, "base change misses a variable");
      term = term * it->second.pow(e);
    }
    out += term;
  }
  return out;
}

RatFunc transplant(const RatFunc& r, const std::map<VarId, Poly>& repl) {
  return RatFunc(transplant(r.num(), repl), transplant(r.den(), repl));
}

}  // namespace

std::unique_ptr<Family> base_change(const Family& f, const std::vector<std::string>& new_vars,
                                    const std::map<VarId, std::string>& arc) {
  if (!f.param_vars.empty())
    throw CtError(ErrCode::semantic, "base change of parameter-block families is not supported");
  auto g = std::make_unique<Family>();
  g->name = f.name + "@base-change";
  for (const auto& nv : new_vars) g->base_vars.push_back(g->pool.add(nv));
  std::map<VarId, VarId> rename;  // chart/fiber old -> new
  for (VarId v : f.chart_vars) {
    VarId nv = g->pool.add(f.pool.name(v));
    g->chart_vars.push_back(nv);
    rename[v] = nv;
  }
  for (VarId v : f.fiber_vars) {
    VarId nv = g->pool.add(f.pool.name(v));
    g->fiber_vars.push_back(nv);
    rename[v] = nv;
  }

  std::map<VarId, Poly> repl;
  for (VarId v : f.base_vars) {
    auto it = arc.find(v);
    if (it == arc.end())
      throw CtError(ErrCode::invalid_arg, "arc misses base variable " + f.pool.name(v));
    ParseError err;
    auto p = poly_parse(it->second, g->pool, &err);
    if (!p) throw CtError(ErrCode::parse, "arc for " + f.pool.name(v) + ": " + err.message);
    repl[v] = *p;
  }
  for (const auto& [v, nv] : rename) repl[v] = Poly::variable(nv);

  for (const auto& gen : f.base_gens)
    if (!transplant(gen, repl).is_zero())
      throw CtError(ErrCode::invalid_arg, "arc does not land on the base variety");

  for (const auto& c : f.components) {
    if (!c.over_gens.empty())
      throw CtError(ErrCode::semantic, "base change requires full-support components");
    Component nc;
    nc.name = c.name;
    nc.weight = c.weight;
    for (const auto& br : c.branches) {
      std::map<VarId, RatFunc> nbr;
      for (const auto& [xv, e] : br) nbr.emplace(rename.at(xv), transplant(e, repl));
      nc.branches.push_back(std::move(nbr));
    }
    for (const auto& gen : c.ideal_gens) nc.ideal_gens.push_back(transplant(gen, repl));
    g->components.push_back(std::move(nc));
  }
  for (const auto& gen : f.family_ideal) g->family_ideal.push_back(transplant(gen, repl));
  return g;
}

}  // namespace ct
