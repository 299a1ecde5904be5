#include <doctest.h>

#include <array>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "towernorm/quotients.hpp"
#include "towernorm/util.hpp"

using namespace towernorm;

namespace {

// Order of SL2 over Z/m by brute enumeration of determinant-1 matrices.
std::int64_t sl2_order(std::int64_t m) {
  std::int64_t count = 0;
  for (std::int64_t a = 0; a < m; ++a)
    for (std::int64_t b = 0; b < m; ++b)
      for (std::int64_t c = 0; c < m; ++c)
        for (std::int64_t d = 0; d < m; ++d)
          if (((a * d - b * c) % m + m) % m == 1) ++count;
  return count;
}

}  // namespace

TEST_CASE("ag_base: wedge of two circles") {
  LabeledGraph g = ag_base();
  CHECK(g.vertices() == 1);
  CHECK(g.edges().size() == 2);
  CHECK(g.tree_edges().empty());
  CHECK(g.cotree_order().size() == 2);
}

TEST_CASE("ag tower: sizes, ranks, fibers, validation") {
  QuotientTower t = build_ag_tower(2);
  REQUIRE(t.depth() == 2);
  CHECK(t.level(0).size() == 1);
  CHECK(t.level(1).size() == 4);
  CHECK(t.level(2).size() == 128);

  // Cotree rank r = E - V + 1 at each graph.
  std::array<std::uint32_t, 3> want_rank{2, 5, 129};
  for (int n = 0; n <= 2; ++n) {
    const LabeledGraph& g = t.graphs()[n];
    CHECK(g.cotree_order().size() == want_rank[n]);
    CHECK(g.edges().size() - g.vertices() + 1 == want_rank[n]);
  }

  REQUIRE(t.links().size() == 2);
  CHECK(t.links()[0].fiber_size == 4);
  CHECK(t.links()[1].fiber_size == 32);

  ValidationReport rep = tower_validate(t);
  CHECK(rep.all_pass());
}

TEST_CASE("ag level 1: exact permutations") {
  QuotientTower t = build_ag_tower(1);
  const FiniteQuotient& q = t.level(1);
  REQUIRE(q.size() == 4);
  // Vertex = (bit for a-edge, bit for b-edge); a flips bit 0, b flips bit 1.
  CHECK(q.perm(0) == std::vector<std::uint32_t>{1, 0, 3, 2});
  CHECK(q.perm(1) == std::vector<std::uint32_t>{2, 3, 0, 1});
  // Both act as involutions, so inverses agree.
  CHECK(q.inv_perm(0) == q.perm(0));
  CHECK(q.inv_perm(1) == q.perm(1));
}

TEST_CASE("ag partial unwind: fiber sizes are prefix powers of two") {
  QuotientTower t = build_ag_tower(3, {0, 1, 3});
  CHECK(t.level(1).size() == 4);
  CHECK(t.level(2).size() == 8);    // one of five cotree edges unwound
  CHECK(t.level(3).size() == 64);   // three unwound at the next step
  CHECK(t.links()[1].fiber_size == 2);
  CHECK(t.links()[2].fiber_size == 8);
  CHECK(tower_validate(t).all_pass());
}

TEST_CASE("ag_cover: rejects bad unwind selections") {
  LabeledGraph base = ag_base();
  LabeledGraph lvl1 = ag_cover(base, {0, 1});
  // Level-1 graph: 4 vertices, 8 edges, 5 cotree edges; tree edges are not
  // unwindable.
  REQUIRE(lvl1.tree_edges().size() == 3);
  std::uint32_t tree_edge = lvl1.tree_edges()[0];
  CHECK_THROWS_AS(ag_cover(lvl1, {tree_edge}), ValidationError);
  std::uint32_t ce = lvl1.cotree_order()[0];
  CHECK_THROWS_AS(ag_cover(lvl1, {ce, ce}), ValidationError);
  CHECK_THROWS_AS(ag_cover(lvl1, {}), ValidationError);
}

TEST_CASE("FiniteQuotient: constructor validates") {
  using V = std::vector<std::uint32_t>;
  // Not a permutation: repeated image.
  CHECK_THROWS_AS(FiniteQuotient(1, {V{0, 0}, V{0, 1}}), ValidationError);
  // Out of range image.
  CHECK_THROWS_AS(FiniteQuotient(1, {V{0, 2}, V{0, 1}}), ValidationError);
  // Intransitive: both generators fix each point.
  CHECK_THROWS_AS(FiniteQuotient(1, {V{0, 1}, V{0, 1}}), ValidationError);
  // Basepoint out of range.
  CHECK_THROWS_AS(FiniteQuotient(1, {V{1, 0}, V{0, 1}}, 5), ValidationError);
  // Valid two-point quotient.
  FiniteQuotient q(1, {V{1, 0}, V{0, 1}});
  CHECK(q.size() == 2);
  CHECK(q.n_gens() == 2);
  CHECK(q.act_word(parse_word("ab"), 0) == 1);
}

TEST_CASE("act_word: rightmost letter first, matches raw tables") {
  QuotientTower t = build_ag_tower(2);
  const FiniteQuotient& q = t.level(2);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 200; ++i) {
    Word w = test::random_word(rng, static_cast<int>(rng() % 10));
    std::uint32_t x = static_cast<std::uint32_t>(rng() % q.size());
    CHECK(q.act_word(w, x) == test::act_raw(q, w, x));
  }
  // Composition law: (uv).x == u.(v.x).
  for (int i = 0; i < 200; ++i) {
    Word u = test::random_word(rng, 4), v = test::random_word(rng, 4);
    std::uint32_t x = static_cast<std::uint32_t>(rng() % q.size());
    CHECK(q.act_word(u * v, x) == q.act_word(u, q.act_word(v, x)));
  }
}

TEST_CASE("make_link: validates projections") {
  QuotientTower t = build_ag_tower(2);
  const FiniteQuotient& lo = t.level(1);
  const FiniteQuotient& hi = t.level(2);
  // The stored projection is valid by construction.
  std::vector<std::uint32_t> proj = t.links()[1].projection;
  CHECK_NOTHROW(make_link(lo, hi, proj));
  // Scrambling two images in the same fiber breaks equivariance or fibers.
  std::vector<std::uint32_t> bad = proj;
  bad[1] = (bad[1] + 1) % lo.size();
  CHECK_THROWS_AS(make_link(lo, hi, bad), ValidationError);
  // Wrong length.
  bad = proj;
  bad.pop_back();
  CHECK_THROWS_AS(make_link(lo, hi, bad), ValidationError);
}

TEST_CASE("sl2: orbit sizes match group orders for prime moduli") {
  // Sanov generators hit all of SL2 over Z/p for odd primes.
  for (std::int64_t p : {3, 5, 7}) {
    FiniteQuotient q = sl2_quotient(p);
    CHECK(q.size() == sl2_order(p));
  }
  CHECK(sl2_quotient(3).size() == 24);
  CHECK(sl2_quotient(5).size() == 120);
  CHECK(sl2_quotient(13).size() == 2184);
  // Mod 2 both generators reduce to the identity matrix; the orbit is a
  // point.
  CHECK(sl2_quotient(2).size() == 1);
}

TEST_CASE("sl2: generator matrices must be invertible mod m") {
  std::array<Mat2, 2> bad{{{1, 0, 0, 2}, {1, 0, 2, 1}}};  // det 2, singular mod 4
  CHECK_THROWS_AS(sl2_quotient(4, bad), ValidationError);
  CHECK_THROWS_AS(sl2_quotient(0), ValidationError);
  CHECK(sl2_quotient(1).size() == 1);  // everything collapses mod 1
}

TEST_CASE("sl2 tower: congruence levels and links") {
  QuotientTower t = build_sl2_tower(3, 2);
  REQUIRE(t.depth() == 2);
  CHECK(t.level(0).size() == 1);
  CHECK(t.level(1).size() == 24);
  CHECK(t.level(2).size() == 648);
  CHECK(t.links()[1].fiber_size == 27);
  CHECK(tower_validate(t).all_pass());
  // Moduli past the exact-key packing bound refuse rather than wrapping,
  // both directly and through the tower builder.
  CHECK_THROWS_AS(sl2_quotient(65537), CapExceeded);
  CHECK_THROWS_AS(build_sl2_tower(1'000'000'007, 3), CapExceeded);
}

TEST_CASE("quotient file IO: round trip and validation") {
  FiniteQuotient q = test::cyclic_quotient(8, 3);
  std::ostringstream out;
  write_quotient(q, out);
  std::istringstream in(out.str());
  FiniteQuotient back = read_quotient(in);
  CHECK(back.size() == q.size());
  CHECK(back.basepoint() == q.basepoint());
  for (int g = 0; g < 2; ++g) CHECK(back.perm(g) == q.perm(g));
}

TEST_CASE("quotient file IO: malformed inputs") {
  auto load = [](const std::string& text) {
    std::istringstream in(text);
    return read_quotient(in);
  };
  CHECK_THROWS_AS(load(""), ParseError);
  CHECK_THROWS_AS(load("nu 2 gens 2\na 0 0\nb 0 1\n"), ValidationError);
  CHECK_THROWS_AS(load("nu 2 gens 2\na 1 9\nb 0 1\n"), ValidationError);
  CHECK_THROWS_AS(load("nu 2 gens 2\na 1 0\nb 0 1\nbasepoint 7\n"), ValidationError);
  CHECK_THROWS_AS(load("nu 2 gens 2\na 1 0\n"), ParseError);      // missing row
  CHECK_THROWS_AS(load("bogus\n"), ParseError);
  // Intransitive two-orbit action.
  CHECK_THROWS_AS(load("nu 4 gens 2\na 1 0 3 2\nb 1 0 3 2\n"), ValidationError);
}

TEST_CASE("tower_validate: reports broken forged links") {
  FiniteQuotient a = test::cyclic_quotient(4);
  FiniteQuotient b = test::cyclic_quotient(4);
  TowerLink forged;
  forged.projection = {0, 1, 2, 3};
  forged.lower_size = 4;
  forged.upper_size = 4;
  forged.fiber_size = 1;
  QuotientTower t("file", {test::cyclic_quotient(1, 0), a, b}, {TowerLink{}, forged});
  ValidationReport rep = tower_validate(t);
  CHECK(!rep.all_pass());
}

TEST_CASE("cyclic helper quotient sanity") {
  // A one-point quotient is allowed (everything acts trivially).
  FiniteQuotient one = test::cyclic_quotient(1, 0);
  CHECK(one.size() == 1);
  FiniteQuotient q = test::cyclic_quotient(6, 2);
  CHECK(q.act_letter(0, 5) == 0);
  CHECK(q.act_letter(1, 5) == 4);  // inverse of a
  CHECK(q.act_letter(2, 5) == 1);  // b = +2
}
