#pragma once

#include <optional>
#include <vector>

#include "rational.hpp"

namespace ct {

using QRow = std::vector<Rational>;
using QMatrix = std::vector<QRow>;  // dense, row-major

// Reduced row echelon form in place; returns the pivot column of each row
// kept (rows beyond the rank end up zero).
std::vector<std::size_t> rref(QMatrix& m);

// One exact solution of A x = b with all free variables set to zero, or
// nullopt if the system is inconsistent. A has dimensions rows x cols.
std::optional<QRow> solve_linear(const QMatrix& a, const QRow& b);

// Basis of the nullspace of A (one vector per free column after rref).
std::vector<QRow> kernel_basis(const QMatrix& a, std::size_t cols);

// --- univariate utilities (coefficient vectors, low degree first) ---------

using UniPoly = std::vector<Rational>;

void uni_trim(UniPoly& p);
int uni_degree(const UniPoly& p);  // -1 for zero
UniPoly uni_mul(const UniPoly& a, const UniPoly& b);
UniPoly uni_derivative(const UniPoly& p);
// Monic gcd via the Euclidean algorithm; gcd(0,0) = 0.
UniPoly uni_gcd(UniPoly a, UniPoly b);
// Exact quotient a / b; throws std::invalid_argument when b does not divide a.
UniPoly uni_divexact(const UniPoly& a, const UniPoly& b);
UniPoly uni_squarefree_part(const UniPoly& p);
// Yun decomposition p ~ prod f_i^{m_i}: monic squarefree pairwise-coprime
// factors of positive degree with their multiplicities, m_i increasing.
std::vector<std::pair<UniPoly, int>> uni_squarefree_decomposition(const UniPoly& p);
Rational uni_eval(const UniPoly& p, const Rational& x);
// Multiplicity of x as a root (0 if not a root).
int uni_root_multiplicity(UniPoly p, const Rational& x);

// --- characteristic polynomial over any exact field ------------------------

// Faddeev-LeVerrier. Field ops are supplied by `Ops`: zero(), one(),
// from_int(long), add, sub, mul, div, is_zero. Returns monic coefficients
// low degree first: c[0] + c[1] T + ... + c[n-1] T^{n-1} + T^n.
template <class F, class Ops>
std::vector<F> charpoly(const std::vector<std::vector<F>>& m, const Ops& ops) {
  const std::size_t n = m.size();
  std::vector<F> coeffs(n + 1, ops.zero());
  coeffs[n] = ops.one();
  if (n == 0) return coeffs;

  auto mat_mul = [&](const std::vector<std::vector<F>>& a, const std::vector<std::vector<F>>& b) {
    std::vector<std::vector<F>> r(n, std::vector<F>(n, ops.zero()));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (ops.is_zero(a[i][k])) continue;
        for (std::size_t j = 0; j < n; ++j)
          r[i][j] = ops.add(r[i][j], ops.mul(a[i][k], b[k][j]));
      }
    return r;
  };
  auto trace = [&](const std::vector<std::vector<F>>& a) {
    F t = ops.zero();
    for (std::size_t i = 0; i < n; ++i) t = ops.add(t, a[i][i]);
    return t;
  };

  std::vector<std::vector<F>> mk = m;
  F ck = ops.div(trace(mk), ops.from_int(1));
  ck = ops.sub(ops.zero(), ck);
  coeffs[n - 1] = ck;
  for (std::size_t k = 2; k <= n; ++k) {
    // M_k = M (M_{k-1} + c_{k-1} I)
    std::vector<std::vector<F>> shifted = mk;
    for (std::size_t i = 0; i < n; ++i) shifted[i][i] = ops.add(shifted[i][i], ck);
    mk = mat_mul(m, shifted);
    ck = ops.sub(ops.zero(), ops.div(trace(mk), ops.from_int(static_cast<long>(k))));
    coeffs[n - k] = ck;
  }
  return coeffs;
}

struct RationalOps {
  Rational zero() const { return 0; }
  Rational one() const { return 1; }
  Rational from_int(long v) const { return v; }
  Rational add(const Rational& a, const Rational& b) const { return a + b; }
  Rational sub(const Rational& a, const Rational& b) const { return a - b; }
  Rational mul(const Rational& a, const Rational& b) const { return a * b; }
  Rational div(const Rational& a, const Rational& b) const { return a / b; }
  bool is_zero(const Rational& a) const { return rat_is_zero(a); }
};

}  // namespace ct
