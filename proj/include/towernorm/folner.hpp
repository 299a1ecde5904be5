#pragma once

#include <cstdint>
#include <vector>

#include "towernorm/power.hpp"
#include "towernorm/quotients.hpp"

namespace towernorm {

// Candidate almost-invariant set at one cover level: the points whose fiber
// coordinate keeps every bit above k at zero.
struct FolnerLevel {
  int level = 0;            // tower level of the ambient quotient
  int k = 0;                // free bits
  int unwound = 0;          // fiber rank m of the cover step
  int base_rank = 0;        // cotree rank of the base graph
  bool partial = false;     // m < base_rank
  std::vector<std::uint32_t> points;
  std::int64_t size = 0;
  std::int64_t boundary = 0;          // counted edge by edge
  std::int64_t boundary_formula = 0;  // 2 (m - k) 2^k
};

struct FolnerFamily {
  std::vector<FolnerLevel> levels;  // one per cover step, levels 1..depth
};

// k_n = r_n - min(r_n - 1, ceil(log2(|X_n| + 1))), clamped to [1, m_n - 1].
std::vector<int> choose_k(const QuotientTower& tower);

// Stored edges with exactly one endpoint in A.
std::int64_t boundary_count(const LabeledGraph& g,
                            const std::vector<std::uint32_t>& A);

// Builds the A sets for an AG tower (needs the Schreier graphs).
FolnerFamily build_A(const QuotientTower& tower, const std::vector<int>& k);

// Normalized indicator of A with exact per-generator movement counts:
// residual_g^2 = (edges leaving A along g, either direction) / |A|.
struct AlmostInvariantResult {
  CVec xi;
  std::vector<double> residuals;      // one per generator
  std::vector<std::int64_t> out_counts;  // directed crossings per letter
  double bound = 0;                   // sqrt(2 |boundary| / |A|)
  bool within_bound = true;
};

AlmostInvariantResult almost_invariant(const FolnerLevel& level,
                                       const FiniteQuotient& q,
                                       const LabeledGraph& g);

struct FolnerReportRow {
  int level;
  std::int64_t size;
  std::int64_t boundary;
  double ratio_boundary;   // boundary / size
  double ratio_volume;     // size / total
  double residual_a;
  double residual_b;
  double bound;            // sqrt(2 boundary / size)
  bool partial;
  double deficiency;       // filled only when requested, else -1
};

std::vector<FolnerReportRow> folner_report(const FolnerFamily& family,
                                           const QuotientTower& tower,
                                           bool with_deficiency = false);

}  // namespace towernorm
