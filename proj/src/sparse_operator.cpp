#include "towernorm/sparse_operator.hpp"

#include <algorithm>
#include <cmath>

namespace towernorm {

SparseOperator SparseOperator::from_triplets(std::uint32_t dim,
                                             std::vector<Triplet> triplets) {
  for (const Triplet& t : triplets) {
    if (t.row >= dim || t.col >= dim) throw ValidationError("triplet out of range");
  }
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& x, const Triplet& y) {
    return x.col != y.col ? x.col < y.col : x.row < y.row;
  });
  SparseOperator m;
  m.dim_ = dim;
  m.col_ptr_.assign(dim + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    std::size_t j = i;
    Complex sum = 0;
    while (j < triplets.size() && triplets[j].col == triplets[i].col &&
           triplets[j].row == triplets[i].row) {
      sum += triplets[j].value;
      ++j;
    }
    if (sum != Complex(0.0, 0.0)) {
      m.rows_.push_back(triplets[i].row);
      m.values_.push_back(sum);
      ++m.col_ptr_[triplets[i].col + 1];
      if (sum.imag() != 0.0) m.all_real_ = false;
    }
    i = j;
  }
  for (std::uint32_t c = 0; c < dim; ++c) m.col_ptr_[c + 1] += m.col_ptr_[c];
  return m;
}

void SparseOperator::apply(const CVec& in, CVec& out) const {
  out.assign(dim_, Complex(0.0));
  for (std::uint32_t c = 0; c < dim_; ++c) {
    const Complex x = in[c];
    if (x == Complex(0.0, 0.0)) continue;
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      out[rows_[k]] += values_[k] * x;
    }
  }
}

void SparseOperator::apply_adjoint(const CVec& in, CVec& out) const {
  out.assign(dim_, Complex(0.0));
  for (std::uint32_t c = 0; c < dim_; ++c) {
    Complex s = 0;
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      s += std::conj(values_[k]) * in[rows_[k]];
    }
    out[c] = s;
  }
}

std::vector<Triplet> SparseOperator::entries() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (std::uint32_t c = 0; c < dim_; ++c) {
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      out.push_back({rows_[k], c, values_[k]});
    }
  }
  return out;
}

double SparseOperator::one_norm_bound() const {
  double best = 0;
  for (std::uint32_t c = 0; c < dim_; ++c) {
    double s = 0;
    for (std::size_t k = col_ptr_[c]; k < col_ptr_[c + 1]; ++k) {
      s += std::abs(values_[k]);
    }
    best = std::max(best, s);
  }
  return best;
}

}  // namespace towernorm
