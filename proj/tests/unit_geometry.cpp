#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "towernorm/geometry.hpp"
#include "towernorm/quotients.hpp"
#include "towernorm/util.hpp"

using namespace towernorm;

TEST_CASE("distances: level-1 cover and symmetry") {
  QuotientTower t = build_ag_tower(1);
  DistanceField d = distances(t.level(1), 0);
  CHECK(d.dist == std::vector<std::int32_t>{0, 1, 1, 2});

  FiniteQuotient q = sl2_quotient(3);
  std::mt19937_64 rng(31);
  std::vector<DistanceField> fields;
  for (std::uint32_t x = 0; x < q.size(); ++x) fields.push_back(distances(q, x));
  for (int i = 0; i < 200; ++i) {
    std::uint32_t x = static_cast<std::uint32_t>(rng() % q.size());
    std::uint32_t y = static_cast<std::uint32_t>(rng() % q.size());
    CHECK(fields[x].dist[y] == fields[y].dist[x]);
    // Triangle inequality through the basepoint.
    CHECK(fields[x].dist[y] <= fields[x].dist[0] + fields[0].dist[y]);
  }
}

TEST_CASE("ball: radii on the level-1 cover") {
  QuotientTower t = build_ag_tower(1);
  const FiniteQuotient& q = t.level(1);
  CHECK(ball(q, 0, 0) == std::vector<std::uint32_t>{0});
  CHECK(ball(q, 0, 1) == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(ball(q, 0, 2) == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(ball(q, 0, 99).size() == q.size());
}

TEST_CASE("alpha: exact injectivity radii on the ag tower") {
  QuotientTower t = build_ag_tower(2);

  AlphaResult a0 = alpha(t.level(0));
  CHECK(a0.alpha == 1);
  CHECK(a0.found);
  CHECK(a0.witness.str() == "a");
  CHECK(a0.normal);

  AlphaResult a1 = alpha(t.level(1));
  CHECK(a1.alpha == 2);
  CHECK(a1.witness.str() == "aa");
  CHECK(a1.normal);

  AlphaResult a2 = alpha(t.level(2));
  CHECK(a2.alpha == 4);
  CHECK(a2.found);
  CHECK(a2.normal);
  CHECK(t.level(2).act_word(a2.witness, t.level(2).basepoint()) ==
        t.level(2).basepoint());
  // No shorter nontrivial word fixes the basepoint: exhaustive check over
  // reduced words of length < 4.
  const FiniteQuotient& q = t.level(2);
  std::vector<std::vector<Letter>> frontier{{}};
  for (int len = 1; len < 4; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& ls : frontier) {
      for (Letter l = 0; l < 4; ++l) {
        if (!ls.empty() && l == inverse_letter(ls.back())) continue;
        auto ext = ls;
        ext.push_back(l);
        CHECK(q.act_word(Word::from_letters(ext), q.basepoint()) != q.basepoint());
        next.push_back(std::move(ext));
      }
    }
    frontier = std::move(next);
  }
}

TEST_CASE("alpha: witness reports non-normal kernels") {
  // a = +1 and b = +3 on Z/8: every word acts as a translation, so a word
  // fixing 0 acts as the identity; the shortest such displacement needs four
  // letters (3+3+1+1 = 8).
  FiniteQuotient q = test::cyclic_quotient(8, 3);
  AlphaResult r = alpha(q);
  CHECK(r.found);
  CHECK(r.alpha == 4);
  CHECK(q.act_word(r.witness, q.basepoint()) == q.basepoint());
  CHECK(r.normal);

  // Genuinely non-normal: a = (0 1 2), b = (1 2): b fixes the basepoint but
  // swaps the other two points, so the stabilizer witness is not a kernel
  // element.
  using V = std::vector<std::uint32_t>;
  FiniteQuotient s3(1, {V{1, 2, 0}, V{0, 2, 1}});
  AlphaResult rs = alpha(s3);
  CHECK(rs.found);
  CHECK(rs.alpha == 1);
  CHECK(rs.witness.str() == "b");
  CHECK(s3.act_word(rs.witness, 0) == 0);
  CHECK(!rs.normal);
}

TEST_CASE("alpha: cap reports not found") {
  QuotientTower t = build_ag_tower(2);
  AlphaResult r = alpha(t.level(2), 3);  // true alpha is 4
  CHECK(!r.found);
  CHECK(r.alpha == 4);  // cap + 1: alpha exceeds the searched range
}

TEST_CASE("isometric lifting: passes below alpha/4, fails at collisions") {
  QuotientTower t = build_ag_tower(2);
  // Level 2 has alpha = 4; R = 0 is the only radius below alpha/4 and passes.
  CHECK(check_isometric_lifting(t.level(2), 0).pass);
  // Radius 1 still injects on level 2 (alpha = 4 kills length <= 2 words and
  // distance shortcuts need length <= 3 relations).
  LiftingReport r1 = check_isometric_lifting(t.level(2), 1);
  CHECK(r1.pass);
  CHECK(r1.ball_words == 5);
  // Level 1 has alpha = 2: a and a^-1 hit the same point, so radius 1 fails.
  LiftingReport bad = check_isometric_lifting(t.level(1), 1);
  CHECK(!bad.pass);
  CHECK(bad.detail.find("collide") != std::string::npos);
  // Radius 2 on level 2: a^4 lies in the kernel, so aa and AA collide.
  LiftingReport r2 = check_isometric_lifting(t.level(2), 2);
  CHECK(!r2.pass);
}

TEST_CASE("isometric lifting: word cap refuses huge balls") {
  QuotientTower t = build_ag_tower(1);
  CHECK_THROWS_AS(check_isometric_lifting(t.level(1), 12, 1000), CapExceeded);
}

TEST_CASE("cluster_support: single linkage parts") {
  FiniteQuotient q = test::cyclic_quotient(8, 1);  // both generators step by +1
  // Distances on the cycle: d(0,4) = 4 is the diameter.
  auto parts = cluster_support(q, {0, 4}, 4);
  CHECK(parts.size() == 2);
  parts = cluster_support(q, {0, 4}, 5);
  CHECK(parts.size() == 1);
  // Chain merging: 0-2-4 with threshold 3 joins through the middle.
  parts = cluster_support(q, {0, 2, 4}, 3);
  CHECK(parts.size() == 1);
  parts = cluster_support(q, {0, 2, 4}, 2);
  CHECK(parts.size() == 3);
  // Parts are sorted by smallest member.
  parts = cluster_support(q, {5, 0, 1}, 2);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0][0] == 0);
}
