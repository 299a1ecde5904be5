#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "towernorm/power.hpp"

namespace towernorm {

struct Triplet {
  std::uint32_t row;
  std::uint32_t col;
  Complex value;
};

// Column-compressed square sparse matrix; duplicate entries merge on
// construction and exact zeros are dropped.  Rows are sorted within each
// column.
class SparseOperator {
 public:
  static SparseOperator from_triplets(std::uint32_t dim,
                                      std::vector<Triplet> triplets);

  std::uint32_t dim() const { return dim_; }
  std::size_t nonzeros() const { return values_.size(); }
  bool all_real() const { return all_real_; }

  std::span<const std::uint32_t> col_rows(std::uint32_t c) const {
    return {rows_.data() + col_ptr_[c], rows_.data() + col_ptr_[c + 1]};
  }
  std::span<const Complex> col_values(std::uint32_t c) const {
    return {values_.data() + col_ptr_[c], values_.data() + col_ptr_[c + 1]};
  }

  void apply(const CVec& in, CVec& out) const;          // out = M in
  void apply_adjoint(const CVec& in, CVec& out) const;  // out = M* in
  std::vector<Triplet> entries() const;

  double one_norm_bound() const;  // max column 1-norm, an upper norm bound

 private:
  std::uint32_t dim_ = 0;
  bool all_real_ = true;
  std::vector<std::size_t> col_ptr_;
  std::vector<std::uint32_t> rows_;
  std::vector<Complex> values_;
};

}  // namespace towernorm
