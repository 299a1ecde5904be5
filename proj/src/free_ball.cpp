#include "towernorm/free_ball.hpp"

#include <algorithm>

#include "towernorm/util.hpp"

namespace towernorm {

std::uint64_t FreeBall::ball_size(int radius, int n_gens) {
  // 1 + 2k * ((2k-1)^R - 1) / (2k-2); for k=1 the ball is a path.
  const std::uint64_t k2 = 2 * static_cast<std::uint64_t>(n_gens);
  if (n_gens == 1) return 2 * static_cast<std::uint64_t>(radius) + 1;
  std::uint64_t size = 1, sphere = 1;
  for (int r = 1; r <= radius; ++r) {
    sphere *= (r == 1) ? k2 : (k2 - 1);
    size += sphere;
    if (size > (1ULL << 62)) throw CapExceeded("free ball overflow");
  }
  return size;
}

FreeBall::FreeBall(int radius, int n_gens, std::uint64_t node_cap)
    : radius_(radius), n_letters_(2 * n_gens) {
  if (radius < 0) throw ValidationError("radius must be >= 0");
  if (n_gens < 1 || n_gens > kMaxGenerators) {
    throw ValidationError("unsupported generator count");
  }
  std::uint64_t total = ball_size(radius, n_gens);
  if (total > node_cap) {
    throw CapExceeded("free ball of radius " + std::to_string(radius) + " has " +
                      std::to_string(total) + " nodes, over the cap of " +
                      std::to_string(node_cap));
  }
  if (total > static_cast<std::uint64_t>(INT32_MAX)) {
    throw CapExceeded("free ball does not fit 32-bit node ids");
  }
  moves_.assign(static_cast<std::size_t>(total) * n_letters_, -1);
  std::vector<Letter> first(static_cast<std::size_t>(total), 255);
  sphere_end_.assign(radius + 1, 0);
  std::int64_t next = 1;
  sphere_end_[0] = 1;
  std::int64_t layer_begin = 0, layer_end = 1;
  for (int r = 1; r <= radius; ++r) {
    for (std::int64_t node = layer_begin; node < layer_end; ++node) {
      for (int l = 0; l < n_letters_; ++l) {
        if (first[node] != 255 && first[node] == inverse_letter(static_cast<Letter>(l))) {
          continue;  // that slot walks back toward the identity
        }
        std::int64_t child = next++;
        moves_[static_cast<std::size_t>(node) * n_letters_ + l] =
            static_cast<std::int32_t>(child);
        moves_[static_cast<std::size_t>(child) * n_letters_ +
               inverse_letter(static_cast<Letter>(l))] =
            static_cast<std::int32_t>(node);
        first[child] = static_cast<Letter>(l);
      }
    }
    sphere_end_[r] = next;
    layer_begin = layer_end;
    layer_end = next;
  }
}

std::int64_t FreeBall::apply_word(std::int64_t node, const Word& w) const {
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend() && node >= 0; ++it) {
    node = move(node, *it);
  }
  return node;
}

int FreeBall::depth(std::int64_t node) const {
  auto it = std::upper_bound(sphere_end_.begin(), sphere_end_.end(), node);
  return static_cast<int>(it - sphere_end_.begin());
}

}  // namespace towernorm
