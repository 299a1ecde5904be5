#include "towernorm/geometry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

namespace towernorm {

DistanceField distances(const FiniteQuotient& q, std::uint32_t origin) {
  if (origin >= q.size()) throw ValidationError("origin out of range");
  DistanceField f{origin, std::vector<std::int32_t>(q.size(), -1)};
  std::queue<std::uint32_t> bfs;
  f.dist[origin] = 0;
  bfs.push(origin);
  const int letters = 2 * q.n_gens();
  while (!bfs.empty()) {
    std::uint32_t x = bfs.front();
    bfs.pop();
    for (int l = 0; l < letters; ++l) {
      std::uint32_t y = q.act_letter(static_cast<Letter>(l), x);
      if (f.dist[y] < 0) {
        f.dist[y] = f.dist[x] + 1;
        bfs.push(y);
      }
    }
  }
  return f;
}

std::vector<std::uint32_t> ball(const FiniteQuotient& q, std::uint32_t center,
                                int R) {
  DistanceField f = distances(q, center);
  std::vector<std::uint32_t> out;
  for (std::uint32_t x = 0; x < q.size(); ++x) {
    if (f.dist[x] >= 0 && f.dist[x] <= R) out.push_back(x);
  }
  return out;
}

AlphaResult alpha(const FiniteQuotient& q, int length_cap) {
  AlphaResult res;
  if (q.size() == 1) {
    // Every letter already fixes the basepoint.
    Letter l = 0;
    res.alpha = 1;
    res.witness = Word::from_letters(std::span<const Letter>(&l, 1));
    res.found = true;
    res.normal = true;
    return res;
  }
  const int letters = 2 * q.n_gens();
  // State = point * letters + last letter applied.  Walks are reduced words
  // read right to left, so the next letter may not invert the last.
  const std::uint64_t n_states = static_cast<std::uint64_t>(q.size()) * letters;
  std::vector<std::int32_t> dist(n_states, -1);
  std::vector<std::uint32_t> pred(n_states);
  std::queue<std::uint64_t> bfs;
  for (int l = 0; l < letters; ++l) {
    std::uint32_t y = q.act_letter(static_cast<Letter>(l), q.basepoint());
    std::uint64_t s = static_cast<std::uint64_t>(y) * letters + l;
    if (dist[s] < 0) {
      dist[s] = 1;
      pred[s] = static_cast<std::uint32_t>(-1);
      bfs.push(s);
    }
  }
  // A length-1 witness would have shown up above only if some letter fixes
  // the basepoint; check that first.
  for (int l = 0; l < letters; ++l) {
    if (q.act_letter(static_cast<Letter>(l), q.basepoint()) == q.basepoint()) {
      Letter ll = static_cast<Letter>(l);
      res.alpha = 1;
      res.witness = Word::from_letters(std::span<const Letter>(&ll, 1));
      res.found = true;
      break;
    }
  }
  while (!res.found && !bfs.empty()) {
    std::uint64_t s = bfs.front();
    bfs.pop();
    if (dist[s] >= length_cap) break;
    std::uint32_t x = static_cast<std::uint32_t>(s / letters);
    int last = static_cast<int>(s % letters);
    for (int l = 0; l < letters; ++l) {
      if (l == (last ^ 1)) continue;  // keep the walk reduced
      std::uint32_t y = q.act_letter(static_cast<Letter>(l), x);
      std::uint64_t t = static_cast<std::uint64_t>(y) * letters + l;
      if (y == q.basepoint()) {
        // Reconstruct the walk; its letters in application order are
        // l, then the letters of s backwards.
        std::vector<Letter> applied;
        applied.push_back(static_cast<Letter>(l));
        std::uint64_t walk = s;
        while (walk != static_cast<std::uint64_t>(-1)) {
          applied.push_back(static_cast<Letter>(walk % letters));
          if (pred[walk] == static_cast<std::uint32_t>(-1)) break;
          walk = pred[walk];
        }
        // Word letters are written left to right but applied right to left.
        res.witness = Word::from_letters(applied);
        res.alpha = dist[s] + 1;
        res.found = true;
        break;
      }
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        pred[t] = static_cast<std::uint32_t>(s);
        bfs.push(t);
      }
    }
  }
  if (!res.found) {
    res.alpha = length_cap + 1;  // lower bound only
    return res;
  }
  res.normal = true;
  for (std::uint32_t x = 0; x < q.size(); ++x) {
    if (q.act_word(res.witness, x) != x) {
      res.normal = false;
      break;
    }
  }
  return res;
}

namespace {

// Reduced words of length <= R paired with their action on the basepoint.
void enumerate_ball_words(const FiniteQuotient& q, int R, std::uint64_t cap,
                          std::vector<Word>& words,
                          std::vector<std::uint32_t>& images) {
  words.clear();
  images.clear();
  words.push_back(Word());
  images.push_back(q.basepoint());
  const int letters = 2 * q.n_gens();
  std::size_t layer_begin = 0;
  for (int r = 1; r <= R; ++r) {
    std::size_t layer_end = words.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      const Word w = words[i];
      for (int l = 0; l < letters; ++l) {
        if (!w.letters().empty() && w.letters().back() == inverse_letter(l)) {
          continue;
        }
        std::vector<Letter> ls = w.letters();
        ls.push_back(static_cast<Letter>(l));
        if (words.size() >= cap) {
          throw CapExceeded("free ball of radius " + std::to_string(R) +
                            " exceeds the word cap");
        }
        words.push_back(Word::from_letters(ls));
        images.push_back(q.act_word(words.back(), q.basepoint()));
      }
    }
    layer_begin = layer_end;
  }
}

}  // namespace

LiftingReport check_isometric_lifting(const FiniteQuotient& q, int R,
                                      std::uint64_t word_cap) {
  LiftingReport rep;
  rep.radius = R;
  if (R < 0) throw ValidationError("radius must be >= 0");
  std::vector<Word> words;
  std::vector<std::uint32_t> images;
  enumerate_ball_words(q, R, word_cap, words, images);
  rep.ball_words = words.size();

  std::map<std::uint32_t, std::size_t> first_of;
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto [it, inserted] = first_of.try_emplace(images[i], i);
    if (!inserted) {
      rep.detail = "words '" + words[it->second].str() + "' and '" +
                   words[i].str() + "' collide at point " +
                   std::to_string(images[i]);
      return rep;
    }
  }
  std::vector<std::uint32_t> quotient_ball = ball(q, q.basepoint(), R);
  if (quotient_ball.size() != words.size()) {
    rep.detail = "ball sizes differ: " + std::to_string(words.size()) +
                 " words vs " + std::to_string(quotient_ball.size()) + " points";
    return rep;
  }
  // Pairwise distances: one BFS per image point.
  std::map<std::uint32_t, DistanceField> fields;
  for (std::size_t i = 0; i < words.size(); ++i) {
    fields.try_emplace(images[i], distances(q, images[i]));
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    const DistanceField& f = fields.at(images[i]);
    for (std::size_t j = 0; j < words.size(); ++j) {
      // Letters act on the left, so the Schreier metric matches the
      // right-invariant word metric |v u^-1|.
      int free_dist = (words[j] * words[i].inverse()).length();
      if (f.dist[images[j]] != free_dist) {
        rep.detail = "distance between '" + words[i].str() + "' and '" +
                     words[j].str() + "' drops from " +
                     std::to_string(free_dist) + " to " +
                     std::to_string(f.dist[images[j]]);
        return rep;
      }
    }
  }
  rep.pass = true;
  return rep;
}

std::vector<std::vector<std::uint32_t>> cluster_support(
    const FiniteQuotient& q, const std::vector<std::uint32_t>& A,
    int threshold) {
  for (std::uint32_t x : A) {
    if (x >= q.size()) throw ValidationError("support point out of range");
  }
  std::vector<std::size_t> parent(A.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < A.size(); ++i) {
    DistanceField f = distances(q, A[i]);
    for (std::size_t j = i + 1; j < A.size(); ++j) {
      if (f.dist[A[j]] >= 0 && f.dist[A[j]] < threshold) {
        parent[find(i)] = find(j);
      }
    }
  }
  std::map<std::size_t, std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < A.size(); ++i) groups[find(i)].push_back(A[i]);
  std::vector<std::vector<std::uint32_t>> parts;
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    parts.push_back(std::move(members));
  }
  std::sort(parts.begin(), parts.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
  return parts;
}

}  // namespace towernorm
