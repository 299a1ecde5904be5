#pragma once

#include <cstdint>
#include <optional>

#include "towernorm/power.hpp"
#include "towernorm/quotients.hpp"
#include "towernorm/sparse_operator.hpp"
#include "towernorm/words.hpp"

namespace towernorm {

// Matrix of the quasi-regular action of `a` on functions over the quotient:
// entry (g x, x) accumulates the coefficient of g.
SparseOperator assemble(const GroupAlgebraElement& a, const FiniteQuotient& q);

SpectralResult op_norm(const SparseOperator& m, const PowerOptions& opts = {});

// Normalized constant vector; fixed by every averaging operator.
CVec trivial_vector(const FiniteQuotient& q);

// delta = 1 - mu2 with mu2 the largest eigenvalue of the averaging operator
// on the orthogonal complement of the constants.  On the one-point quotient
// there is no complement; delta = 2 with `degenerate` set.
struct GapResult {
  double delta = 0;
  double mu2 = 0;
  bool degenerate = false;
  SpectralResult detail;
};

GapResult spectral_gap(const FiniteQuotient& q, const GroupAlgebraElement& x,
                       const PowerOptions& opts = {});

// Isometry from functions on the lower level into functions on the upper
// level: constant on fibers, scaled by 1/sqrt(fiber size).
CVec uplift(const TowerLink& link, const CVec& lower);

// Orthogonal projection onto the uplifted subspace (fiber averaging).
CVec project_old(const TowerLink& link, const CVec& xi);

// Norm of the action of `a` compressed to the orthogonal complement of the
// uplifted subspace at the upper level of `link`.
SpectralResult rho_norm(const GroupAlgebraElement& a, const FiniteQuotient& upper,
                        const TowerLink& link, const PowerOptions& opts = {});

// Norm of the action of `a` on the free group compressed to the ball of
// radius R (both sides).  Monotone in R and bounded by the free-group norm.
SpectralResult regular_norm(const GroupAlgebraElement& a, int R,
                            const PowerOptions& opts = {},
                            std::uint64_t node_cap = 10'000'000);

}  // namespace towernorm
