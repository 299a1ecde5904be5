#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "towernorm/quotients.hpp"
#include "towernorm/sparse_operator.hpp"

namespace towernorm {

// Non-decreasing positive integer sequence indexed by tower level.
struct GrowthFunction {
  std::vector<std::int64_t> values;
  std::int64_t at(int level) const { return values.at(level); }
  int levels() const { return static_cast<int>(values.size()); }
};

GrowthFunction growth_iota(int levels);                  // constant 1
GrowthFunction growth_nu(const QuotientTower& tower);    // level sizes
GrowthFunction load_growth(const std::string& path);     // one integer per line

// gamma <~ gamma2 when the ratios gamma/gamma2 do not merely stall: on this
// finite window we call the order strict (`prec`) when the ratios strictly
// decrease and at least halve overall, and comparable (`sim`) when neither
// direction is strict.
struct GrowthComparison {
  std::vector<double> ratios;  // gamma / gamma2 per level
  double ratio_min = 0;
  double ratio_max = 0;
  bool prec = false;  // gamma strictly slower than gamma2 on this window
  bool leq = false;   // not strictly faster
  bool sim = false;   // comparable both ways
};

GrowthComparison compare_growth(const GrowthFunction& gamma,
                                const GrowthFunction& gamma2);

// Largest singular value of the columns of m selected by T (power iteration
// on the T-compression of m* m).
double sparse_norm_on_support(const SparseOperator& m,
                              std::span<const std::uint32_t> T,
                              double tol = 1e-11);

struct SupportValue {
  double value = 0;
  std::vector<std::uint32_t> support;
};

// Exact maximum of sparse_norm_on_support over all supports of size s;
// refuses when C(dim, s) exceeds the cap.
SupportValue sparse_norm_exhaustive(const SparseOperator& m, std::int64_t s,
                                    std::uint64_t cap = 2'000'000,
                                    double tol = 1e-11);

// Heuristic lower bound: power iteration with hard thresholding to the s
// largest entries (ties to the lowest index), started from a deterministic
// dense vector, `restarts` random vectors, and every coordinate delta; every
// support visited gets an exact re-solve.
SupportValue sparse_norm_truncated(const SparseOperator& m, std::int64_t s,
                                   int restarts = 4, double tol = 1e-11,
                                   std::uint64_t seed = 1);

// Smallest singular value of the T-columns of (m - I): how far delta
// functions on T are from being fixed.
double invariance_deficiency_on_support(const SparseOperator& m,
                                        std::span<const std::uint32_t> T);

struct DeficiencyResult {
  double value = 0;
  std::vector<std::uint32_t> support;
  std::string strategy;
};

// Minimize the deficiency over supports of size s: exhaustively under the
// cap, greedily (bordered-Gram eigenvalue growth) otherwise, or evaluated on
// a caller-provided set.
DeficiencyResult min_invariance_deficiency(
    const SparseOperator& m, std::int64_t s, const std::string& strategy = "auto",
    const std::vector<std::uint32_t>* seed_support = nullptr,
    std::uint64_t cap = 2'000'000);

// delta * sqrt(max(0, 1 - s/nu)): every s-set keeps at least this much
// deficiency when the gap is delta.
double tau_lower_bound(double delta, std::int64_t s, std::int64_t nu);

// Distance from the normalized flat vector on m points to its best s-sparse
// approximation: sqrt((m-s)/m).
double best_sparse_approx_error(std::int64_t m, std::int64_t s);

// Supports keep their size under the permutation action.
bool support_invariance_check(const FiniteQuotient& q, const Word& g,
                              const std::vector<std::uint32_t>& support);

}  // namespace towernorm
