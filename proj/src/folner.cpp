#include "towernorm/folner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "towernorm/sparse_norms.hpp"
#include "towernorm/spectra.hpp"

namespace towernorm {

std::vector<int> choose_k(const QuotientTower& tower) {
  if (tower.graphs().empty()) {
    throw ValidationError("choose_k needs the tower's Schreier graphs");
  }
  std::vector<int> ks;
  for (int n = 0; n < tower.depth(); ++n) {
    const LabeledGraph& base = tower.graphs()[n];
    const auto& cover = tower.level(n + 1).cover();
    if (!cover) throw ValidationError("level carries no cover structure");
    const int r = base.cotree_rank();
    const int m = static_cast<int>(cover->unwound);
    const std::uint64_t size = tower.level(n).size();
    const int log_term = static_cast<int>(std::bit_width(size));  // ceil(log2(size+1))
    int k = r - std::min(r - 1, log_term);
    k = std::max(1, std::min(k, m - 1));
    if (m < 2) {
      throw ValidationError("cover step " + std::to_string(n) +
                            " unwinds a single edge; no proper A exists");
    }
    ks.push_back(k);
  }
  return ks;
}

std::int64_t boundary_count(const LabeledGraph& g,
                            const std::vector<std::uint32_t>& A) {
  std::vector<char> in(g.vertices(), 0);
  for (std::uint32_t x : A) {
    if (x >= g.vertices()) throw ValidationError("set point out of range");
    in[x] = 1;
  }
  std::int64_t count = 0;
  for (const LabeledEdge& e : g.edges()) {
    if (in[e.src] != in[e.dst]) ++count;
  }
  return count;
}

FolnerFamily build_A(const QuotientTower& tower, const std::vector<int>& k) {
  if (tower.graphs().size() != tower.levels().size()) {
    throw ValidationError("build_A needs one Schreier graph per level");
  }
  if (static_cast<int>(k.size()) != tower.depth()) {
    throw ValidationError("need one k per cover step");
  }
  FolnerFamily family;
  for (int n = 0; n < tower.depth(); ++n) {
    const FiniteQuotient& upper = tower.level(n + 1);
    const auto& cover = upper.cover();
    if (!cover) throw ValidationError("level carries no cover structure");
    const int m = static_cast<int>(cover->unwound);
    if (k[n] < 1 || k[n] >= m) {
      throw ValidationError("k must satisfy 1 <= k < " + std::to_string(m) +
                            " at cover step " + std::to_string(n));
    }
    FolnerLevel lvl;
    lvl.level = n + 1;
    lvl.k = k[n];
    lvl.unwound = m;
    lvl.base_rank = static_cast<int>(cover->base_cotree_rank);
    lvl.partial = cover->unwound < cover->base_cotree_rank;
    const std::uint32_t fiber_mask = (1u << m) - 1;
    const std::uint32_t free_bound = 1u << k[n];
    for (std::uint32_t x = 0; x < upper.size(); ++x) {
      if ((x & fiber_mask) < free_bound) lvl.points.push_back(x);
    }
    lvl.size = static_cast<std::int64_t>(lvl.points.size());
    lvl.boundary = boundary_count(tower.graphs()[n + 1], lvl.points);
    lvl.boundary_formula = 2LL * (m - k[n]) * (1LL << k[n]);
    family.levels.push_back(std::move(lvl));
  }
  return family;
}

AlmostInvariantResult almost_invariant(const FolnerLevel& level,
                                       const FiniteQuotient& q,
                                       const LabeledGraph& g) {
  if (level.size == 0) throw ValidationError("empty set");
  AlmostInvariantResult res;
  std::vector<char> in(q.size(), 0);
  for (std::uint32_t x : level.points) in[x] = 1;
  const double amp = 1.0 / std::sqrt(static_cast<double>(level.size));
  res.xi.assign(q.size(), Complex(0.0));
  for (std::uint32_t x : level.points) res.xi[x] = amp;

  // Directed crossings per letter, counted exactly as integers.
  res.out_counts.assign(2 * q.n_gens(), 0);
  for (std::uint32_t x = 0; x < q.size(); ++x) {
    if (!in[x]) continue;
    for (int gen = 0; gen < q.n_gens(); ++gen) {
      if (!in[q.perm(gen)[x]]) ++res.out_counts[2 * gen];
      if (!in[q.inv_perm(gen)[x]]) ++res.out_counts[2 * gen + 1];
    }
  }
  // || lambda(g) xi - xi ||^2 = (out_g + out_{g^-1}) / |A|; identical for g
  // and its inverse.
  for (int gen = 0; gen < q.n_gens(); ++gen) {
    double sq = static_cast<double>(res.out_counts[2 * gen] +
                                    res.out_counts[2 * gen + 1]) /
                static_cast<double>(level.size);
    res.residuals.push_back(std::sqrt(sq));
  }
  std::int64_t boundary = boundary_count(g, level.points);
  res.bound = std::sqrt(2.0 * static_cast<double>(boundary) /
                        static_cast<double>(level.size));
  for (double r : res.residuals) {
    if (r > res.bound + 1e-12) res.within_bound = false;
  }
  return res;
}

std::vector<FolnerReportRow> folner_report(const FolnerFamily& family,
                                           const QuotientTower& tower,
                                           bool with_deficiency) {
  std::vector<FolnerReportRow> rows;
  for (const FolnerLevel& lvl : family.levels) {
    const FiniteQuotient& q = tower.level(lvl.level);
    const LabeledGraph& g = tower.graphs()[lvl.level];
    AlmostInvariantResult ai = almost_invariant(lvl, q, g);
    FolnerReportRow row;
    row.level = lvl.level;
    row.size = lvl.size;
    row.boundary = lvl.boundary;
    row.ratio_boundary = static_cast<double>(lvl.boundary) /
                         static_cast<double>(lvl.size);
    row.ratio_volume = static_cast<double>(lvl.size) /
                       static_cast<double>(q.size());
    row.residual_a = ai.residuals[0];
    row.residual_b = ai.residuals.size() > 1 ? ai.residuals[1] : 0.0;
    row.bound = ai.bound;
    row.partial = lvl.partial;
    row.deficiency = -1.0;
    if (with_deficiency) {
      SparseOperator m = assemble(averaging_element(q.n_gens()), q);
      row.deficiency = invariance_deficiency_on_support(m, lvl.points);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace towernorm
