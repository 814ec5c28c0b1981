#include "flatness.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ct {

namespace {

bool contains_var(const std::vector<VarId>& vars, VarId v) {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

std::string mono_label(const Monomial& m, const VarPool& pool) {
  Poly p;
  p.add_term(m, 1);
  return poly_str(p, pool);
}

// --- per-stratum sampled data ----------------------------------------------

struct DirectionInfo {
  std::string label;
  std::vector<bool> present;  // per component
};

struct StratumInfo {
  std::string name;
  std::map<VarId, Rational> point;       // base + chart, filled
  std::vector<DirectionInfo> dirs;
  std::vector<std::size_t> dim;          // per comp; npos when absent at the point
  std::vector<std::vector<UniPoly>> cp;  // per comp, per lambda trial
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

bool vanishes_at(const std::vector<Poly>& gens, const std::map<VarId, Rational>& pt) {
  for (const auto& g : gens)
    if (!rat_is_zero(g.eval_partial(pt).constant_value())) return false;
  return true;
}

// Components supported on the whole base count on every direction; a proper
// over-ideal direction carries the components whose over-ideal contains it.
std::vector<DirectionInfo> directions_at(const Family& f, const std::map<VarId, Rational>& pt) {
  std::vector<DirectionInfo> dirs;
  std::vector<Ideal> seen;
  MonomialOrder ord = MonomialOrder::grevlex(f.base_vars);
  bool any_full = false;
  for (const auto& c : f.components) {
    if (c.over_gens.empty()) {
      any_full = true;
      continue;
    }
    if (!vanishes_at(c.over_gens, pt)) continue;
    std::vector<Poly> gens = c.over_gens;
    gens.insert(gens.end(), f.base_gens.begin(), f.base_gens.end());
    Ideal gb = groebner(gens, ord);
    bool dup = false;
    for (const auto& g : seen)
      if (g.basis == gb.basis) dup = true;
    if (dup) continue;
    DirectionInfo d;
    std::string lbl = "V(";
    for (std::size_t i = 0; i < c.over_gens.size(); ++i)
      lbl += (i ? ", " : "") + poly_str(c.over_gens[i], f.pool);
    d.label = lbl + ")";
    d.present.resize(f.components.size(), false);
    for (std::size_t j = 0; j < f.components.size(); ++j) {
      if (f.components[j].over_gens.empty()) {
        d.present[j] = true;
        continue;
      }
      bool inside = true;
      for (const auto& g : f.components[j].over_gens)
        if (!normal_form(g, gb).is_zero()) inside = false;
      d.present[j] = inside;
    }
    dirs.push_back(std::move(d));
    seen.push_back(std::move(gb));
  }
  if (any_full) {
    DirectionInfo d;
    d.label = "base";
    d.present.resize(f.components.size(), false);
    const Ideal& gb = f.base_ring().is;
    for (std::size_t j = 0; j < f.components.size(); ++j) {
      if (f.components[j].over_gens.empty()) {
        d.present[j] = true;
        continue;
      }
      bool inside = true;
      for (const auto& g : f.components[j].over_gens)
        if (!normal_form(g, gb).is_zero()) inside = false;
      d.present[j] = inside;
    }
    dirs.push_back(std::move(d));
  }
  return dirs;
}

StratumInfo prepare_stratum(const Family& f, const Stratum& st, int lambda_trials,
                            std::uint64_t seed) {
  StratumInfo info;
  info.name = st.name;
  for (VarId v : f.base_vars)
    if (!st.point.count(v))
      throw CtError(ErrCode::invalid_arg, "stratum '" + st.name + "' must assign base variable " +
                                              f.pool.name(v));
  for (const auto& g : f.base_gens)
    if (!rat_is_zero(g.eval_partial(st.point).constant_value()))
      throw CtError(ErrCode::invalid_arg,
                    "stratum '" + st.name + "' sample does not lie on the base variety");

  std::vector<VarId> missing;
  for (VarId v : f.chart_vars)
    if (!st.point.count(v)) missing.push_back(v);

  std::vector<std::size_t> relevant;  // comps whose support passes through pt
  for (std::size_t j = 0; j < f.components.size(); ++j)
    if (vanishes_at(f.components[j].over_gens, st.point)) relevant.push_back(j);

  // Pick the chart fill minimizing the total fiber dimension (generic values
  // attain the minimum; degenerate fills only overcount or fail).
  const int fill_trials = missing.empty() ? 1 : 3;
  std::optional<std::size_t> best_total;
  std::vector<std::size_t> best_dim;
  std::map<VarId, Rational> best_pt;
  for (int ft = 0; ft < fill_trials; ++ft) {
    std::map<VarId, Rational> pt = st.point;
    std::vector<Rational> vals = random_coeffs(missing.size(), seed + 31 * ft + 5);
    for (std::size_t i = 0; i < missing.size(); ++i) pt[missing[i]] = vals[i];
    std::vector<std::size_t> dim(f.components.size(), StratumInfo::npos);
    std::size_t total = 0;
    bool ok = true;
    for (std::size_t j : relevant) {
      try {
        Ideal spec = specialize_at(f.effective_gens(f.components[j]), pt, f.fiber_vars);
        dim[j] = standard_monomials(spec, f.fiber_vars).size();
        total += dim[j];
      } catch (const CtError& e) {
        if (e.code == ErrCode::not_finite) {
          ok = false;
          break;
        }
        throw;
      }
    }
    if (!ok) continue;
    if (!best_total || total < *best_total) {
      best_total = total;
      best_dim = std::move(dim);
      best_pt = std::move(pt);
    }
  }
  if (!best_total)
    throw CtError(ErrCode::not_finite,
                  "stratum '" + st.name + "': no sampled chart value gave a finite fiber");
  info.point = std::move(best_pt);
  info.dim = std::move(best_dim);
  info.dirs = directions_at(f, st.point);

  if (lambda_trials > 0) {
    info.cp.assign(f.components.size(), {});
    for (std::size_t j : relevant) {
      Ideal spec = specialize_at(f.effective_gens(f.components[j]), info.point, f.fiber_vars);
      SpecializedAlgebra alg = SpecializedAlgebra::make(std::move(spec), f.fiber_vars);
      for (int tr = 0; tr < lambda_trials; ++tr) {
        Poly lambda = random_linear_form(f.fiber_vars, seed + 911 * (tr + 1));
        info.cp[j].push_back(alg.charpoly_q(lambda));
      }
    }
  }
  return info;
}

int weighted_degree(const Family& f, const StratumInfo& info, const DirectionInfo& dir,
                    const std::vector<int>& weights) {
  int deg = 0;
  for (std::size_t j = 0; j < f.components.size(); ++j) {
    if (!dir.present[j]) continue;
    if (info.dim[j] == StratumInfo::npos)
      throw std::logic_error("component present along a direction but absent at the point");
    deg += weights[j] * static_cast<int>(info.dim[j]);
  }
  return deg;
}

UniPoly uni_pow(const UniPoly& p, int e) {
  UniPoly r{Rational(1)};
  for (int i = 0; i < e; ++i) r = uni_mul(r, p);
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

DegreeTable check_degree_constancy(const Family& f, std::uint64_t seed) {
  DegreeTable out;
  if (f.strata.empty()) return out;
  std::vector<int> weights;
  for (const auto& c : f.components) weights.push_back(c.weight);
  std::optional<int> first;
  for (std::size_t si = 0; si < f.strata.size(); ++si) {
    StratumInfo info = prepare_stratum(f, f.strata[si], 0, seed + 1000003 * si);
    for (const auto& dir : info.dirs) {
      int deg = weighted_degree(f, info, dir, weights);
      out.cells.push_back({info.name, dir.label, deg});
      if (!first)
        first = deg;
      else if (*first != deg)
        out.constant = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string verdict_kind_str(VerdictKind k) {
  switch (k) {
    case VerdictKind::agf_certified: return "AGF_certified";
    case VerdictKind::continuous_only_evidence: return "ContinuousOnly_evidence";
    case VerdictKind::not_cgf_evidence: return "NotCGF_evidence";
    case VerdictKind::undetermined: return "Undetermined";
  }
  return "Undetermined";
}

namespace {

// Split a traced coefficient into chart-monomial pieces when the denominator
// is chart-free; regularity of the sum is equivalent to regularity of every
// piece (the base ideal lives in the base variables alone), and the pieces
// give sharper witnesses.
std::vector<std::pair<std::string, RatFunc>> chart_split(const Family& f, const RatFunc& val) {
  auto is_chart = [&](VarId v) { return contains_var(f.chart_vars, v); };
  std::vector<std::pair<std::string, RatFunc>> out;
  if (val.den().degree_if(is_chart) != 0 || f.chart_vars.empty()) {
    out.emplace_back("", val);
    return out;
  }
  std::map<Monomial, Poly> parts = val.num().split_by(is_chart);
  if (parts.size() <= 1) {
    out.emplace_back("", val);
    return out;
  }
  for (auto& [mt, num] : parts) {
    std::string lbl = ", coefficient of " + mono_label(mt, f.pool);
    out.emplace_back(lbl, RatFunc(num, val.den()));
  }
  return out;
}

}  // namespace

Verdict certify_agf(const Family& f, const CertifyOptions& opts) {
  Verdict out;
  out.degree = degree_generic(f);
  out.monomial_degree_bound =
      opts.monomial_degree_bound > 0 ? opts.monomial_degree_bound : std::max(2 * out.degree, 1);
  out.form_degree_bound = opts.form_degree_bound >= 0 ? opts.form_degree_bound
                                                      : static_cast<int>(f.chart_vars.size());

  if (!f.strata.empty()) {
    out.degrees = check_degree_constancy(f, opts.seed);
    if (!out.degrees.constant) {
      out.kind = VerdictKind::not_cgf_evidence;
      out.detail = "weighted fiber degree depends on the stratum or approach direction";
      return out;
    }
  }

  // Trace data is only defined for covers of the whole base; when components
  // sit over proper subvarieties the degree table is the extent of the
  // evidence this routine can gather.
  for (const auto& c : f.components)
    if (!c.over_gens.empty()) {
      out.kind = VerdictKind::undetermined;
      out.detail = "components lie over proper subvarieties; only the degree table was examined";
      return out;
    }

  const VarPool& pool = f.pool;
  std::vector<std::pair<std::string, RatFunc>> data;
  for (int d = 1; d <= out.monomial_degree_bound; ++d)
    for (const auto& m : monomials_of_degree(f.fiber_vars, static_cast<std::uint32_t>(d))) {
      Poly hp;
      hp.add_term(m, 1);
      data.emplace_back("trace(" + mono_label(m, pool) + ")", trace0(f, hp));
    }

  if (f.all_parametric() && !f.chart_vars.empty() && out.form_degree_bound >= 1) {
    const int n = static_cast<int>(f.fiber_vars.size());
    const int qmax = std::min(out.form_degree_bound, n);
    std::vector<int> idx;
    for (int q = 1; q <= qmax; ++q) {
      // all strictly increasing q-subsets of the fiber variables
      idx.assign(static_cast<std::size_t>(q), 0);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        RelativeForm wedge = RelativeForm::function(RatFunc::constant(1));
        std::string wlabel;
        for (int i : idx) {
          wedge = wedge.wedge(RelativeForm::differential(f.fiber_vars[i]));
          wlabel += (wlabel.empty() ? "d" : "^d") + pool.name(f.fiber_vars[i]);
        }
        for (int di = 0; di + q <= out.monomial_degree_bound; ++di)
          for (const auto& m : monomials_of_degree(f.fiber_vars, static_cast<std::uint32_t>(di))) {
            Poly hp;
            hp.add_term(m, 1);
            RelativeForm w = RelativeForm::function(RatFunc(hp)).wedge(wedge);
            RelativeForm tw = trace_form(f, w);
            std::string src = "trace(" + mono_label(m, pool) + " " + wlabel + ")";
            for (const auto& [key, coeff] : tw.terms) {
              std::string at;
              for (VarId v : key.d) at += (at.empty() ? "" : "^") + ("d" + pool.name(v));
              data.emplace_back(src + (at.empty() ? "" : " @ " + at), coeff);
            }
          }
        // next combination
        int i = q - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - q + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < q; ++j)
          idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
  }

  const BaseRing& R = f.base_ring();
  bool any_irregular = false, any_nonintegral = false;
  for (const auto& [src, val] : data) {
    if (val.is_zero()) continue;
    for (const auto& [suffix, piece] : chart_split(f, val)) {
      if (piece.is_zero()) continue;
      RegularityResult reg = is_regular_on(R, piece);
      if (reg.regular) continue;
      any_irregular = true;
      FlatWitness w;
      w.source = src + suffix;
      w.value = R.reduce(piece);
      w.regularity = std::move(reg);
      int cb = opts.integrality_coeff_bound > 0 ? opts.integrality_coeff_bound
                                                : default_integrality_coeff_bound(w.value);
      w.integrality = integral_dependence(R, w.value, opts.integrality_max_degree, cb);
      w.integrality_tested = true;
      if (!w.integrality) any_nonintegral = true;
      out.witnesses.push_back(std::move(w));
    }
  }

  if (!any_irregular) {
    out.kind = VerdictKind::agf_certified;
    out.detail = "all traced data regular on the base up to the bounds";
  } else if (any_nonintegral) {
    out.kind = VerdictKind::not_cgf_evidence;
    out.detail = "a traced coefficient admits no monic dependence relation within the bounds";
  } else {
    out.kind = VerdictKind::continuous_only_evidence;
    out.detail = "irregular traced coefficients are integrally dependent over the base";
  }
  return out;
}

// ---------------------------------------------------------------------------

std::optional<WeightAssignment> weight_search(const Family& f, int max_weight,
                                              std::uint64_t seed) {
  if (f.components.empty())
    throw CtError(ErrCode::semantic, "weight search requires at least one component");
  if (f.strata.empty())
    throw CtError(ErrCode::semantic, "weight search requires declared strata");
  if (max_weight < 1) throw CtError(ErrCode::invalid_arg, "max weight must be positive");

  const int lambda_trials = 2;
  std::vector<StratumInfo> strata;
  for (std::size_t si = 0; si < f.strata.size(); ++si)
    strata.push_back(prepare_stratum(f, f.strata[si], lambda_trials, seed + 1000003 * si));

  const std::size_t m = f.components.size();

  // Components with identical presence/dimension behaviour across all strata
  // are mutually symmetric for every degree-level invariant; give them one
  // shared weight so the search returns the symmetric representative.
  std::vector<std::string> sig(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::ostringstream s;
    for (const auto& st : strata) {
      s << '|' << (st.dim[j] == StratumInfo::npos ? -1 : static_cast<long long>(st.dim[j]));
      for (const auto& dir : st.dirs) s << (dir.present[j] ? '+' : '.');
    }
    sig[j] = s.str();
  }
  std::map<std::string, std::size_t> group_of_sig;
  std::vector<std::size_t> group(m);
  for (std::size_t j = 0; j < m; ++j)
    group[j] = group_of_sig.emplace(sig[j], group_of_sig.size()).first->second;
  const std::size_t g = group_of_sig.size();

  // Enumerate group weight vectors, expand, order by total then lex.
  std::vector<std::vector<int>> candidates;
  std::vector<int> gw(g, 1);
  while (true) {
    std::vector<int> w(m);
    for (std::size_t j = 0; j < m; ++j) w[j] = gw[group[j]];
    candidates.push_back(std::move(w));
    std::size_t i = 0;
    while (i < g && gw[i] == max_weight) gw[i++] = 1;
    if (i == g) break;
    ++gw[i];
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              int sa = std::accumulate(a.begin(), a.end(), 0);
              int sb = std::accumulate(b.begin(), b.end(), 0);
              if (sa != sb) return sa < sb;
              return a < b;
            });

  for (const auto& w : candidates) {
    bool ok = true;
    std::optional<int> common;
    for (const auto& st : strata) {
      if (st.dirs.empty()) continue;
      // same weighted degree everywhere
      int deg0 = weighted_degree(f, st, st.dirs.front(), w);
      for (std::size_t di = 1; di < st.dirs.size() && ok; ++di)
        if (weighted_degree(f, st, st.dirs[di], w) != deg0) ok = false;
      if (!common)
        common = deg0;
      else if (*common != deg0)
        ok = false;
      if (!ok) break;
      // same weighted fiber cycle along every direction, for each probe form
      for (int tr = 0; tr < lambda_trials && ok; ++tr) {
        std::optional<UniPoly> first;
        for (const auto& dir : st.dirs) {
          UniPoly prod{Rational(1)};
          for (std::size_t j = 0; j < m; ++j)
            if (dir.present[j]) prod = uni_mul(prod, uni_pow(st.cp[j][tr], w[j]));
          if (!first)
            first = std::move(prod);
          else if (*first != prod)
            ok = false;
        }
      }
      if (!ok) break;
    }
    if (ok && common) return WeightAssignment{w, *common};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::vector<PullbackResult> cycle_pullback(const Family& f,
                                           const std::vector<PullbackTarget>& targets,
                                           int trials, std::uint64_t seed) {
  if (trials < 1) trials = 1;
  std::vector<PullbackResult> out;
  for (const auto& y : targets) {
    PullbackResult res;
    res.target = y.name;
    for (VarId v : f.base_vars)
      if (!y.sample.count(v))
        throw CtError(ErrCode::invalid_arg, "pullback target '" + y.name +
                                                "' must assign base variable " +
                                                f.pool.name(v));
    for (VarId v : f.chart_vars)
      if (!y.sample.count(v))
        throw CtError(ErrCode::invalid_arg, "pullback target '" + y.name +
                                                "' must assign chart variable " +
                                                f.pool.name(v));
    for (const auto& gen : f.base_gens)
      if (!rat_is_zero(gen.eval_partial(y.sample).constant_value()))
        throw CtError(ErrCode::invalid_arg,
                      "pullback target '" + y.name + "' sample misses the base variety");

    for (const auto& c : f.components) {
      if (!vanishes_at(c.over_gens, y.sample)) continue;
      const bool has_ideal = !c.ideal_gens.empty() || !f.family_ideal.empty();
      if (has_ideal) {
        Ideal spec = specialize_at(f.effective_gens(c), y.sample, f.fiber_vars);
        SpecializedAlgebra alg = SpecializedAlgebra::make(std::move(spec), f.fiber_vars);
        // Pick the probe form separating the most points; merged roots only
        // overstate multiplicities.
        std::optional<UniPoly> best;
        int best_distinct = -1;
        for (int tr = 0; tr < trials; ++tr) {
          Poly lambda =
              random_linear_form(f.fiber_vars, seed + 313 * static_cast<std::uint64_t>(tr) + 7);
          UniPoly cp = alg.charpoly_q(lambda);
          int distinct = uni_degree(uni_squarefree_part(cp));
          if (distinct > best_distinct) {
            best_distinct = distinct;
            best = std::move(cp);
          }
        }
        for (const auto& [fac, mult] : uni_squarefree_decomposition(*best)) {
          PullbackPart part;
          part.component = c.name;
          part.multiplicity = y.coefficient * c.weight * mult;
          part.points = uni_degree(fac);
          res.degree += part.multiplicity * part.points;
          res.parts.push_back(std::move(part));
        }
      } else {
        // Branch route: evaluate every branch at the sample and count
        // coincidences; each preimage point's multiplicity is the number of
        // branches landing on it.
        std::map<std::vector<std::string>, int> hits;
        for (const auto& br : c.branches) {
          std::vector<std::string> valkey;
          for (VarId v : f.fiber_vars) {
            auto it = br.find(v);
            if (it == br.end())
              throw CtError(ErrCode::semantic, "branch misses fiber variable " +
                                                   f.pool.name(v));
            RatFunc num = RatFunc(it->second.num().eval_partial(y.sample));
            Poly denp = it->second.den().eval_partial(y.sample);
            if (!num.is_zero() && !num.num().is_constant())
              throw CtError(ErrCode::semantic,
                            "branch value is not rational at the sample (parameters present?)");
            if (!denp.is_constant() || rat_is_zero(denp.constant_value()))
              throw CtError(ErrCode::degenerate,
                            "branch undefined at the pullback sample point");
            Rational val = num.num().constant_value() / denp.constant_value();
            valkey.push_back(rat_str(val));
          }
          hits[valkey] += 1;
        }
        std::map<int, int> by_mult;  // multiplicity -> point count
        for (const auto& [pt, cnt] : hits) by_mult[cnt] += 1;
        for (const auto& [mult, npts] : by_mult) {
          PullbackPart part;
          part.component = c.name;
          part.multiplicity = y.coefficient * c.weight * mult;
          part.points = npts;
          res.degree += part.multiplicity * part.points;
          res.parts.push_back(std::move(part));
        }
      }
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace ct
