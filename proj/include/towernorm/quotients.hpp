#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "towernorm/words.hpp"

namespace towernorm {

// Directed edge v --label--> w; label is a generator index.
struct LabeledEdge {
  std::uint32_t src;
  std::uint32_t dst;
  std::uint16_t label;
};

// How a covering graph sits over its base: vertices are indexed
// v * 2^unwound + alpha with v a base vertex and alpha a bit vector over the
// unwound cotree edges (bit j belongs to the j-th chosen edge in cotree
// order).
struct CoverStructure {
  std::uint32_t base_vertices;
  std::uint32_t unwound;
  std::uint32_t base_cotree_rank;
};

// Connected graph whose edges are labeled by generators so that every label
// acts as a permutation of the vertices.
class LabeledGraph {
 public:
  LabeledGraph(std::uint32_t vertices, std::vector<LabeledEdge> edges,
               int n_gens);

  std::uint32_t vertices() const { return vertices_; }
  const std::vector<LabeledEdge>& edges() const { return edges_; }
  int n_gens() const { return n_gens_; }

  const std::vector<std::uint32_t>& tree_edges() const { return tree_edges_; }
  const std::vector<std::uint32_t>& cotree_order() const { return cotree_order_; }
  int cotree_rank() const { return static_cast<int>(cotree_order_.size()); }

  const std::optional<CoverStructure>& cover() const { return cover_; }

 private:
  friend LabeledGraph ag_cover(const LabeledGraph&, const std::vector<std::uint32_t>&);
  std::uint32_t vertices_;
  std::vector<LabeledEdge> edges_;
  int n_gens_;
  std::vector<std::uint32_t> tree_edges_;   // BFS spanning tree, discovery order
  std::vector<std::uint32_t> cotree_order_; // remaining edge indices, ascending
  std::optional<CoverStructure> cover_;
};

// Wedge of two circles: one vertex, one loop per generator.
LabeledGraph ag_base();

// Z/2-homology cover unwinding the given cotree edges (indices into
// g.edges(), a subset of g.cotree_order(); pass all of it for the full
// cover).  Each unwound edge flips its own bit; tree and wound edges keep
// alpha fixed.
LabeledGraph ag_cover(const LabeledGraph& g,
                      const std::vector<std::uint32_t>& unwind);

// Transitive permutation action of the free group on {0..size-1} with a
// basepoint; letters act via per-generator permutations.
class FiniteQuotient {
 public:
  FiniteQuotient(int level, std::vector<std::vector<std::uint32_t>> perms,
                 std::uint32_t basepoint = 0);

  int level() const { return level_; }
  std::uint32_t size() const { return size_; }
  int n_gens() const { return static_cast<int>(perms_.size()); }
  std::uint32_t basepoint() const { return basepoint_; }

  std::uint32_t act_letter(Letter l, std::uint32_t x) const {
    return is_inverse(l) ? inv_perms_[generator_of(l)][x]
                         : perms_[generator_of(l)][x];
  }
  std::uint32_t act_word(const Word& w, std::uint32_t x) const;

  const std::vector<std::uint32_t>& perm(int gen) const { return perms_[gen]; }
  const std::vector<std::uint32_t>& inv_perm(int gen) const { return inv_perms_[gen]; }

  const std::optional<CoverStructure>& cover() const { return cover_; }
  void set_cover(CoverStructure c) { cover_ = c; }
  void set_level(int level) { level_ = level; }

 private:
  int level_;
  std::uint32_t size_;
  std::uint32_t basepoint_;
  std::vector<std::vector<std::uint32_t>> perms_;
  std::vector<std::vector<std::uint32_t>> inv_perms_;
  std::optional<CoverStructure> cover_;
};

// Reads the edge permutations off a labeled graph; validates transitivity.
FiniteQuotient graph_to_quotient(const LabeledGraph& g, int level);

// Surjection from an upper tower level onto the one below it, with equal
// fiber sizes.
struct TowerLink {
  std::vector<std::uint32_t> projection;  // upper index -> lower index
  std::uint32_t lower_size = 0;
  std::uint32_t upper_size = 0;
  std::uint32_t fiber_size = 0;
};

// Link induced by the cover structure of `upper`; checks equivariance,
// equal fibers and basepoint compatibility, throwing ValidationError on
// any failure.
TowerLink ag_link(const FiniteQuotient& lower, const FiniteQuotient& upper);

// Same checks for an arbitrary candidate projection.
TowerLink make_link(const FiniteQuotient& lower, const FiniteQuotient& upper,
                    std::vector<std::uint32_t> projection);

class QuotientTower {
 public:
  QuotientTower() = default;
  QuotientTower(std::string backend, std::vector<FiniteQuotient> levels,
                std::vector<TowerLink> links,
                std::vector<LabeledGraph> graphs = {});

  const std::string& backend() const { return backend_; }
  int depth() const { return static_cast<int>(levels_.size()) - 1; }
  const FiniteQuotient& level(int n) const { return levels_.at(n); }
  const std::vector<FiniteQuotient>& levels() const { return levels_; }
  // links()[n] projects level n+1 onto level n.
  const std::vector<TowerLink>& links() const { return links_; }
  // graphs()[n] is the Schreier graph of level n (AG backend only).
  const std::vector<LabeledGraph>& graphs() const { return graphs_; }

 private:
  std::string backend_;
  std::vector<FiniteQuotient> levels_;
  std::vector<TowerLink> links_;
  std::vector<LabeledGraph> graphs_;
};

// Iterated homology covers starting from the wedge of two circles; level 0
// is the trivial quotient.  unwind_counts[i] (optional) asks cover step i to
// unwind only the first so-many cotree edges; 0 or missing means all.
QuotientTower build_ag_tower(int levels, const std::vector<int>& unwind_counts = {});

struct Mat2 {
  std::int64_t a, b, c, d;
};
inline constexpr std::array<Mat2, 2> kSanovGenerators{{{1, 2, 0, 1}, {1, 0, 2, 1}}};

// Orbit of the identity under left multiplication by the generators mod m.
// Refuses moduli above 65536 (the exact-key packing bound) and orbits above
// ten million points.
FiniteQuotient sl2_quotient(std::int64_t modulus,
                            const std::array<Mat2, 2>& gens = kSanovGenerators,
                            int level = 1);

// Levels 0..levels with moduli 1, base, base^2, ...; links reduce entries.
QuotientTower build_sl2_tower(std::int64_t modulus_base, int levels,
                              const std::array<Mat2, 2>& gens = kSanovGenerators);

// Text format: "nu <N> gens <k>" header, one "<name> <N images>" line per
// generator, then "basepoint <i>".
FiniteQuotient load_quotient(const std::string& path);
FiniteQuotient read_quotient(std::istream& in, int level = 1);
void save_quotient(const FiniteQuotient& q, const std::string& path);
void write_quotient(const FiniteQuotient& q, std::ostream& out);

struct ValidationReport {
  struct Item {
    std::string check;
    int level;
    bool pass;
    std::string detail;
  };
  std::vector<Item> items;
  bool all_pass() const;
  std::string summary() const;
};

// Re-checks every structural invariant: permutations, transitivity, strictly
// increasing sizes with integer ratio >= 2, and link equivariance/fibers.
ValidationReport tower_validate(const QuotientTower& tower);

}  // namespace towernorm
