#include "symprod.hpp"

#include <algorithm>

namespace ct {

Poly linear_form(const std::vector<Poly>& point, const std::vector<VarId>& duals) {
  if (point.size() != duals.size())
    throw CtError(ErrCode::invalid_arg, "point dimension does not match dual variables");
  Poly l;
  for (std::size_t i = 0; i < point.size(); ++i) l += point[i] * Poly::variable(duals[i]);
  return l;
}

std::vector<Poly> elementary_symmetric(const PointTuple& t, const std::vector<VarId>& duals) {
  const std::size_t k = t.k();
  std::vector<Poly> e(k + 1);
  e[0] = Poly::constant(1);
  for (std::size_t j = 0; j < k; ++j) {
    Poly l = linear_form(t.pts[j], duals);
    for (std::size_t h = std::min(j + 1, k); h >= 1; --h) e[h] += e[h - 1] * l;
  }
  return std::vector<Poly>(e.begin() + 1, e.end());
}

std::vector<std::vector<Poly>> newton_weighted_all(const PointTuple& x,
                                                   const std::vector<std::vector<Poly>>& y,
                                                   const std::vector<VarId>& duals, int l_max) {
  if (y.size() != x.k()) throw CtError(ErrCode::invalid_arg, "weight rows must match tuple size");
  const std::size_t q = y.empty() ? 0 : y.front().size();
  std::vector<std::vector<Poly>> out(static_cast<std::size_t>(l_max) + 1,
                                     std::vector<Poly>(q));
  std::vector<Poly> lpow(x.k(), Poly::constant(1));
  std::vector<Poly> lf(x.k());
  for (std::size_t j = 0; j < x.k(); ++j) lf[j] = linear_form(x.pts[j], duals);
  for (int l = 0; l <= l_max; ++l) {
    for (std::size_t j = 0; j < x.k(); ++j) {
      for (std::size_t c = 0; c < q; ++c) out[l][c] += y[j][c] * lpow[j];
    }
    if (l < l_max)
      for (std::size_t j = 0; j < x.k(); ++j) lpow[j] = lpow[j] * lf[j];
  }
  return out;
}

std::vector<Poly> newton_weighted(const PointTuple& x, const std::vector<std::vector<Poly>>& y,
                                  const std::vector<VarId>& duals, int l) {
  if (l < 0) throw CtError(ErrCode::invalid_arg, "Newton index must be nonnegative");
  return newton_weighted_all(x, y, duals, l).back();
}

std::vector<Poly> verify_newton_relation(const PointTuple& x,
                                         const std::vector<std::vector<Poly>>& y,
                                         const std::vector<VarId>& duals, int l) {
  const int k = static_cast<int>(x.k());
  if (l < k)
    throw CtError(ErrCode::invalid_arg,
                  "Newton relation requires l >= k (it fails identically below)");
  std::vector<std::vector<Poly>> n = newton_weighted_all(x, y, duals, l);
  std::vector<Poly> e = elementary_symmetric(x, duals);
  const std::size_t q = y.empty() ? 0 : y.front().size();
  std::vector<Poly> acc(q);
  for (int h = 0; h <= k; ++h) {
    Poly s = h == 0 ? Poly::constant(1) : e[h - 1];
    for (std::size_t c = 0; c < q; ++c) {
      Poly term = n[l - h][c] * s;
      if (h % 2)
        acc[c] -= term;
      else
        acc[c] += term;
    }
  }
  return acc;
}

std::vector<Poly> elem_from_power(const std::vector<Poly>& power_sums) {
  const std::size_t m = power_sums.size();
  std::vector<Poly> e(m + 1);
  e[0] = Poly::constant(1);
  for (std::size_t h = 1; h <= m; ++h) {
    Poly acc;
    for (std::size_t i = 1; i <= h; ++i) {
      Poly term = e[h - i] * power_sums[i - 1];
      if (i % 2)
        acc += term;
      else
        acc -= term;
    }
    e[h] = acc * Rational(1, static_cast<unsigned long>(h));
  }
  return std::vector<Poly>(e.begin() + 1, e.end());
}

int multiplicity_in_tuple(const PointTuple& t, const std::vector<Poly>& point) {
  int count = 0;
  for (const auto& row : t.pts)
    if (row == point) ++count;
  return count;
}

std::vector<Poly> discriminant_coeffs(const PointTuple& t, const std::vector<VarId>& duals) {
  const std::size_t k = t.k();
  if (k < 2) throw CtError(ErrCode::invalid_arg, "discriminant needs k >= 2");
  std::vector<Poly> lf(k);
  for (std::size_t j = 0; j < k; ++j) lf[j] = linear_form(t.pts[j], duals);
  // Coefficients of the product in the variable T^2 (low power first).
  std::vector<Poly> c{Poly::constant(1)};
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      Poly d2 = (lf[i] - lf[j]) * (lf[i] - lf[j]);
      std::vector<Poly> next(c.size() + 1);
      for (std::size_t h = 0; h < c.size(); ++h) {
        next[h + 1] += c[h];
        next[h] -= c[h] * d2;
      }
      c = std::move(next);
    }
  // sum_h c[h] T^{2h}  ==  sum_h (-1)^{mu_max - h} D_h T^{2h}
  const std::size_t mu_max = k * (k - 1) / 2;
  std::vector<Poly> d(c.size());
  for (std::size_t h = 0; h < c.size(); ++h) d[h] = (mu_max - h) % 2 ? -c[h] : c[h];
  return d;
}

Partition stratum(const PointTuple& t) {
  std::vector<std::vector<Poly>> distinct;
  std::vector<int> counts;
  for (const auto& row : t.pts) {
    bool found = false;
    for (std::size_t i = 0; i < distinct.size(); ++i)
      if (distinct[i] == row) {
        ++counts[i];
        found = true;
        break;
      }
    if (!found) {
      distinct.push_back(row);
      counts.push_back(1);
    }
  }
  std::sort(counts.rbegin(), counts.rend());
  return Partition{counts};
}

}  // namespace ct
