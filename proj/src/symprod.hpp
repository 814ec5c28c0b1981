#pragma once

#include <vector>

#include "errors.hpp"
#include "poly.hpp"

namespace ct {

// A k-tuple of points of Q^p (entries may be symbolic polynomials, e.g.
// branch values depending on base parameters).
struct PointTuple {
  std::vector<std::vector<Poly>> pts;  // k rows, p columns
  std::size_t k() const { return pts.size(); }
  std::size_t p() const { return pts.empty() ? 0 : pts.front().size(); }
};

struct Partition {
  std::vector<int> parts;  // sorted descending
  int mu() const {
    int m = 0;
    for (int n : parts) m += n * (n - 1) / 2;
    return m;
  }
};

// <x_j, .> as a linear polynomial in the dual variables.
Poly linear_form(const std::vector<Poly>& point, const std::vector<VarId>& duals);

// s_1..s_k of the linear forms of the tuple, as polynomials in the dual
// variables (degree h piece lives in S_h(Q^p)).
std::vector<Poly> elementary_symmetric(const PointTuple& t, const std::vector<VarId>& duals);

// Weighted Newton function N_l(x,y) = sum_j y_j <x_j,.>^l. The y_j are
// vectors in Q^q (rows of y); the result has one polynomial per component.
std::vector<std::vector<Poly>> newton_weighted_all(const PointTuple& x,
                                                   const std::vector<std::vector<Poly>>& y,
                                                   const std::vector<VarId>& duals, int l_max);
std::vector<Poly> newton_weighted(const PointTuple& x, const std::vector<std::vector<Poly>>& y,
                                  const std::vector<VarId>& duals, int l);

// sum_{h=0}^k (-1)^h N_{l-h} S_h, which vanishes identically for l >= k
// (S_0 = 1). Requires l >= k; the relation simply does not hold below that.
std::vector<Poly> verify_newton_relation(const PointTuple& x,
                                         const std::vector<std::vector<Poly>>& y,
                                         const std::vector<VarId>& duals, int l);

// Triangular Newton solve: recover e_1..e_m from power sums p_1..p_m.
std::vector<Poly> elem_from_power(const std::vector<Poly>& power_sums);

// Number of rows of t equal to the given point.
int multiplicity_in_tuple(const PointTuple& t, const std::vector<Poly>& point);

// Coefficients D_0..D_{k(k-1)/2} of prod_{i<j} (T^2 - (L_i - L_j)^2)
// written as sum_h (-1)^{mu_max - h} D_h T^{2h}; D_0 is the discriminant
// prod (L_i - L_j)^2. Requires k >= 2.
std::vector<Poly> discriminant_coeffs(const PointTuple& t, const std::vector<VarId>& duals);

// Repetition pattern of the tuple and mu = sum n_j(n_j-1)/2.
Partition stratum(const PointTuple& t);

}  // namespace ct
