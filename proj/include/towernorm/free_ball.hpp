#pragma once

#include <cstdint>
#include <vector>

#include "towernorm/words.hpp"

namespace towernorm {

// Ball of radius R in the free group on n_gens generators, materialized as a
// move table: node 0 is the identity, spheres are contiguous in BFS order,
// and move(node, letter) walks one letter (or returns -1 outside the ball).
// Nodes are reduced words under prepending, so moves act by left
// multiplication.
class FreeBall {
 public:
  FreeBall(int radius, int n_gens, std::uint64_t node_cap);

  int radius() const { return radius_; }
  int n_letters() const { return n_letters_; }
  std::int64_t size() const { return static_cast<std::int64_t>(sphere_end_.back()); }
  std::int64_t sphere_begin(int r) const { return r == 0 ? 0 : sphere_end_[r - 1]; }
  std::int64_t sphere_end(int r) const { return sphere_end_[r]; }

  std::int64_t move(std::int64_t node, Letter l) const {
    return moves_[static_cast<std::size_t>(node) * n_letters_ + l];
  }
  // Applies the word's letters right to left (left multiplication).
  std::int64_t apply_word(std::int64_t node, const Word& w) const;
  int depth(std::int64_t node) const;

  static std::uint64_t ball_size(int radius, int n_gens);

 private:
  int radius_;
  int n_letters_;
  std::vector<std::int64_t> sphere_end_;
  std::vector<std::int32_t> moves_;
};

}  // namespace towernorm
