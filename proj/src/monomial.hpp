#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "vars.hpp"

namespace ct {

// Sparse monomial: exponent list sorted by VarId, exponents > 0.
class Monomial {
 public:
  using Entry = std::pair<VarId, std::uint32_t>;

  Monomial() = default;
  explicit Monomial(std::vector<Entry> entries) : e_(std::move(entries)) {
    std::sort(e_.begin(), e_.end());
    normalize();
  }

  static Monomial var(VarId v, std::uint32_t exp = 1) {
    Monomial m;
    if (exp > 0) m.e_.push_back({v, exp});
    return m;
  }

  bool is_one() const { return e_.empty(); }
  const std::vector<Entry>& entries() const { return e_; }

  std::uint32_t exponent(VarId v) const {
    for (const auto& [w, k] : e_)
      if (w == v) return k;
    return 0;
  }

  std::uint64_t degree() const {
    std::uint64_t d = 0;
    for (const auto& [v, k] : e_) d += k;
    return d;
  }

  template <typename Pred>
  std::uint64_t degree_if(Pred in) const {
    std::uint64_t d = 0;
    for (const auto& [v, k] : e_)
      if (in(v)) d += k;
    return d;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    r.e_.reserve(e_.size() + o.e_.size());
    std::size_t i = 0, j = 0;
    while (i < e_.size() || j < o.e_.size()) {
      if (j == o.e_.size() || (i < e_.size() && e_[i].first < o.e_[j].first))
        r.e_.push_back(e_[i++]);
      else if (i == e_.size() || o.e_[j].first < e_[i].first)
        r.e_.push_back(o.e_[j++]);
      else {
        r.e_.push_back({e_[i].first, e_[i].second + o.e_[j].second});
        ++i, ++j;
      }
    }
    return r;
  }

  // this / o if o divides this.
  std::optional<Monomial> try_div(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0;
    for (const auto& [v, k] : o.e_) {
      while (i < e_.size() && e_[i].first < v) r.e_.push_back(e_[i++]);
      if (i == e_.size() || e_[i].first != v || e_[i].second < k) return std::nullopt;
      if (e_[i].second > k) r.e_.push_back({v, e_[i].second - k});
      ++i;
    }
    while (i < e_.size()) r.e_.push_back(e_[i++]);
    return r;
  }

  bool divides(const Monomial& o) const { return o.try_div(*this).has_value(); }

  static Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.e_.size() || j < b.e_.size()) {
      if (j == b.e_.size() || (i < a.e_.size() && a.e_[i].first < b.e_[j].first))
        r.e_.push_back(a.e_[i++]);
      else if (i == a.e_.size() || b.e_[j].first < a.e_[i].first)
        r.e_.push_back(b.e_[j++]);
      else {
        r.e_.push_back({a.e_[i].first, std::max(a.e_[i].second, b.e_[j].second)});
        ++i, ++j;
      }
    }
    return r;
  }

  bool coprime(const Monomial& o) const {
    std::size_t i = 0, j = 0;
    while (i < e_.size() && j < o.e_.size()) {
      if (e_[i].first < o.e_[j].first)
        ++i;
      else if (o.e_[j].first < e_[i].first)
        ++j;
      else
        return false;
    }
    return true;
  }

  // Keep only variables with in(v); the rest are dropped (exponent zeroed).
  template <typename Pred>
  Monomial restrict_to(Pred in) const {
    Monomial r;
    for (const auto& [v, k] : e_)
      if (in(v)) r.e_.push_back({v, k});
    return r;
  }

  bool operator==(const Monomial& o) const { return e_ == o.e_; }
  bool operator!=(const Monomial& o) const { return !(*this == o); }
  // Structural order, suitable as a map key; not a monomial order.
  bool operator<(const Monomial& o) const { return e_ < o.e_; }

 private:
  void normalize() {
    std::vector<Entry> out;
    for (const auto& [v, k] : e_) {
      if (k == 0) continue;
      if (!out.empty() && out.back().first == v)
        out.back().second += k;
      else
        out.push_back({v, k});
    }
    e_ = std::move(out);
  }

  std::vector<Entry> e_;
};

}  // namespace ct
