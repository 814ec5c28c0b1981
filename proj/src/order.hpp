#pragma once

#include <cstdint>
#include <vector>

#include "monomial.hpp"
#include "vars.hpp"

namespace ct {

// Block monomial order. Earlier blocks are more significant, so putting the
// variables to eliminate in the first block gives an elimination order.
// Within a block: graded reverse lexicographic (default) or lexicographic,
// both with respect to the order the variables are listed in.
class MonomialOrder {
 public:
  struct Block {
    std::vector<VarId> vars;
    bool lex = false;
  };

  MonomialOrder() = default;
  explicit MonomialOrder(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

  static MonomialOrder grevlex(std::vector<VarId> vars) {
    return MonomialOrder({Block{std::move(vars), false}});
  }

  static MonomialOrder lex(std::vector<VarId> vars) {
    return MonomialOrder({Block{std::move(vars), true}});
  }

  // Eliminate `first` (any monomial containing one of them beats any monomial
  // in the remaining variables alone).
  static MonomialOrder elimination(std::vector<VarId> first, std::vector<VarId> rest) {
    return MonomialOrder({Block{std::move(first), false}, Block{std::move(rest), false}});
  }

  const std::vector<Block>& blocks() const { return blocks_; }

  // -1 if a < b, 0 if equal, +1 if a > b.
  int cmp(const Monomial& a, const Monomial& b) const {
    for (const auto& blk : blocks_) {
      int c = blk.lex ? cmp_lex(blk, a, b) : cmp_grevlex(blk, a, b);
      if (c != 0) return c;
    }
    return 0;
  }

  bool less(const Monomial& a, const Monomial& b) const { return cmp(a, b) < 0; }
  bool greater(const Monomial& a, const Monomial& b) const { return cmp(a, b) > 0; }

 private:
  static int cmp_lex(const Block& blk, const Monomial& a, const Monomial& b) {
    for (VarId v : blk.vars) {
      std::uint32_t ea = a.exponent(v), eb = b.exponent(v);
      if (ea != eb) return ea < eb ? -1 : 1;
    }
    return 0;
  }

  static int cmp_grevlex(const Block& blk, const Monomial& a, const Monomial& b) {
    std::uint64_t da = 0, db = 0;
    for (VarId v : blk.vars) da += a.exponent(v), db += b.exponent(v);
    if (da != db) return da < db ? -1 : 1;
    for (auto it = blk.vars.rbegin(); it != blk.vars.rend(); ++it) {
      std::uint32_t ea = a.exponent(*it), eb = b.exponent(*it);
      if (ea != eb) return ea > eb ? -1 : 1;  // larger exponent in the last variable loses
    }
    return 0;
  }

  std::vector<Block> blocks_;
};

}  // namespace ct
