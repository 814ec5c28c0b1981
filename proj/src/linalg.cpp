#include "linalg.hpp"

#include <stdexcept>

namespace ct {

std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size(), cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && rat_is_zero(m[p][c])) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rational inv = 1 / m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || rat_is_zero(m[i][c])) continue;
      Rational f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::optional<QRow> solve_linear(const QMatrix& a, const QRow& b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  QMatrix aug(rows, QRow(cols + 1));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug[i][j] = a[i][j];
    aug[i][cols] = b[i];
  }
  std::vector<std::size_t> pivots = rref(aug);
  // Inconsistent iff a pivot lands in the augmented column.
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  QRow x(cols, Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug[i][cols];
  return x;
}

std::vector<QRow> kernel_basis(const QMatrix& a, std::size_t cols) {
  QMatrix m = a;
  if (m.empty()) {
    // Everything is free.
    std::vector<QRow> basis;
    for (std::size_t j = 0; j < cols; ++j) {
      QRow v(cols, Rational(0));
      v[j] = 1;
      basis.push_back(std::move(v));
    }
    return basis;
  }
  std::vector<std::size_t> pivots = rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<QRow> basis;
  for (std::size_t j = 0; j < cols; ++j) {
    if (is_pivot[j]) continue;
    QRow v(cols, Rational(0));
    v[j] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][j];
    basis.push_back(std::move(v));
  }
  return basis;
}

void uni_trim(UniPoly& p) {
  while (!p.empty() && rat_is_zero(p.back())) p.pop_back();
}

int uni_degree(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }

UniPoly uni_mul(const UniPoly& a, const UniPoly& b) {
  if (a.empty() || b.empty()) return {};
  UniPoly r(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  uni_trim(r);
  return r;
}

UniPoly uni_derivative(const UniPoly& p) {
  UniPoly r;
  for (std::size_t i = 1; i < p.size(); ++i) r.push_back(p[i] * Rational(static_cast<long>(i)));
  uni_trim(r);
  return r;
}

static UniPoly uni_rem(UniPoly a, const UniPoly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    uni_trim(a);
  }
  return a;
}

UniPoly uni_gcd(UniPoly a, UniPoly b) {
  uni_trim(a);
  uni_trim(b);
  while (!b.empty()) {
    UniPoly r = uni_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational inv = 1 / a.back();
    for (auto& c : a) c *= inv;
  }
  return a;
}

UniPoly uni_divexact(const UniPoly& a, const UniPoly& b) {
  if (uni_degree(b) < 0) throw std::invalid_argument("division by the zero polynomial");
  UniPoly rem = a;
  uni_trim(rem);
  if (rem.size() < b.size()) {
    if (!rem.empty()) throw std::invalid_argument("inexact univariate division");
    return {};
  }
  UniPoly quot(rem.size() - b.size() + 1, Rational(0));
  while (rem.size() >= b.size() && !rem.empty()) {
    Rational f = rem.back() / b.back();
    std::size_t shift = rem.size() - b.size();
    quot[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) rem[shift + i] -= f * b[i];
    uni_trim(rem);
  }
  if (!rem.empty()) throw std::invalid_argument("inexact univariate division");
  uni_trim(quot);
  return quot;
}

UniPoly uni_squarefree_part(const UniPoly& p) {
  UniPoly q = p;
  uni_trim(q);
  if (q.size() <= 1) return q;
  UniPoly g = uni_gcd(q, uni_derivative(q));
  UniPoly r = uni_degree(g) <= 0 ? q : uni_divexact(q, g);
  if (!r.empty()) {
    Rational inv = 1 / r.back();
    for (auto& c : r) c *= inv;
  }
  return r;
}

std::vector<std::pair<UniPoly, int>> uni_squarefree_decomposition(const UniPoly& p) {
  UniPoly q = p;
  uni_trim(q);
  std::vector<std::pair<UniPoly, int>> out;
  if (q.size() <= 1) return out;
  Rational inv = 1 / q.back();
  for (auto& c : q) c *= inv;
  // Yun's algorithm.
  UniPoly dq = uni_derivative(q);
  UniPoly g = uni_gcd(q, dq);
  UniPoly w = uni_divexact(q, g);
  UniPoly y = uni_divexact(dq, g);
  int i = 1;
  while (uni_degree(w) > 0) {
    UniPoly dw = uni_derivative(w);
    UniPoly z = y;
    for (std::size_t j = 0; j < dw.size(); ++j) {
      if (j >= z.size()) z.resize(j + 1, Rational(0));
      z[j] -= dw[j];
    }
    uni_trim(z);
    UniPoly f = uni_gcd(w, z);
    if (uni_degree(f) > 0) out.emplace_back(f, i);
    w = uni_divexact(w, f.empty() ? UniPoly{Rational(1)} : f);
    y = uni_divexact(z, f.empty() ? UniPoly{Rational(1)} : f);
    ++i;
  }
  return out;
}

Rational uni_eval(const UniPoly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int uni_root_multiplicity(UniPoly p, const Rational& x) {
  uni_trim(p);
  int mult = 0;
  while (!p.empty() && rat_is_zero(uni_eval(p, x))) {
    // synthetic division by (T - x)
    UniPoly q(p.size() - 1, Rational(0));
    Rational carry = 0;
    for (std::size_t i = p.size(); i-- > 1;) {
      carry = p[i] + carry * x;
      q[i - 1] = carry;
    }
    p = std::move(q);
    uni_trim(p);
    ++mult;
    if (mult > 1024) break;  // defensive
  }
  return mult;
}

}  // namespace ct
