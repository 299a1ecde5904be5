#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "towernorm/folner.hpp"
#include "towernorm/sparse_norms.hpp"
#include "towernorm/spectra.hpp"
#include "towernorm/util.hpp"

using namespace towernorm;

TEST_CASE("choose_k: spec examples and clamping") {
  CHECK(choose_k(build_ag_tower(2)) == std::vector<int>{1, 2});
  CHECK(choose_k(build_ag_tower(3, {0, 0, 7})) == std::vector<int>{1, 2, 6});
  // Tiny covers clamp k into [1, m-1].
  CHECK(choose_k(build_ag_tower(2, {0, 2})) == std::vector<int>{1, 1});
}

TEST_CASE("folner sets: exact counting at full unwinding") {
  QuotientTower t = build_ag_tower(2);
  // Exact counts: |A| = |X_prev| * 2^k and |boundary| = 2 (r_prev - k) 2^k,
  // for every valid k at level 2 (m = 5 unwound cotree edges).
  for (int k = 1; k <= 4; ++k) {
    FolnerFamily fam = build_A(t, {1, k});
    const FolnerLevel& lvl = fam.levels[1];
    CHECK(lvl.size == 4 * (1 << k));
    CHECK(lvl.boundary == 2 * (5 - k) * (1 << k));
    CHECK(lvl.boundary == lvl.boundary_formula);
    CHECK(lvl.boundary == boundary_count(t.graphs()[2], lvl.points));
    CHECK(!lvl.partial);
    // Level 1 below: m = 2, k = 1.
    const FolnerLevel& l1 = fam.levels[0];
    CHECK(l1.size == 2);
    CHECK(l1.boundary == 2 * (2 - 1) * 2);
  }
}

TEST_CASE("folner sets: partial covers use the generalized formula") {
  QuotientTower t = build_ag_tower(3, {0, 0, 7});
  std::vector<int> ks = choose_k(t);
  FolnerFamily fam = build_A(t, ks);
  const FolnerLevel& lvl = fam.levels[2];
  CHECK(lvl.partial);
  CHECK(lvl.unwound == 7);
  CHECK(lvl.size == 128 * (1 << 6));
  CHECK(lvl.boundary == 2 * (7 - 6) * (1 << 6));
  CHECK(lvl.boundary == boundary_count(t.graphs()[3], lvl.points));

  // Every choice of k at the partial level keeps the formula exact.
  for (int k = 1; k <= 6; ++k) {
    FolnerFamily f = build_A(t, {1, 1, k});
    CHECK(f.levels[2].size == 128 * (1 << k));
    CHECK(f.levels[2].boundary == 2 * (7 - k) * (1 << k));
    CHECK(f.levels[2].boundary ==
          boundary_count(t.graphs()[3], f.levels[2].points));
  }
}

TEST_CASE("build_A: the point set is the bit-prefix slab") {
  QuotientTower t = build_ag_tower(2);
  FolnerFamily fam = build_A(t, {1, 2});
  const FolnerLevel& l1 = fam.levels[0];
  CHECK(l1.points == std::vector<std::uint32_t>{0, 1});
  const FolnerLevel& l2 = fam.levels[1];
  // Fiber coordinate below 4 for each of the 4 base vertices.
  std::set<std::uint32_t> expect;
  for (std::uint32_t v = 0; v < 4; ++v) {
    for (std::uint32_t a = 0; a < 4; ++a) expect.insert(v * 32 + a);
  }
  CHECK(std::set<std::uint32_t>(l2.points.begin(), l2.points.end()) == expect);
  CHECK_THROWS_AS(build_A(t, {1, 5}), ValidationError);  // k must stay < m
  CHECK_THROWS_AS(build_A(t, {0, 2}), ValidationError);  // and >= 1
}

TEST_CASE("boundary_count: brute edge scan on tiny sets") {
  QuotientTower t = build_ag_tower(1);
  const LabeledGraph& g = t.graphs()[1];
  CHECK(boundary_count(g, {}) == 0);
  CHECK(boundary_count(g, {0, 1, 2, 3}) == 0);
  // One vertex: all four incident edge endpoints cross.
  CHECK(boundary_count(g, {0}) == 4);
  CHECK(boundary_count(g, {0, 1}) == 4);  // a-pair: only b-edges cross
}

TEST_CASE("almost_invariant: exact residuals and the boundary bound") {
  QuotientTower t = build_ag_tower(2);
  FolnerFamily fam = build_A(t, {1, 2});
  const FolnerLevel& lvl = fam.levels[1];
  AlmostInvariantResult r = almost_invariant(lvl, t.level(2), t.graphs()[2]);

  CHECK(norm2(r.xi) == doctest::Approx(1.0).epsilon(1e-14));
  REQUIRE(r.residuals.size() == 2);
  // Exact rational residuals: residual^2 = directed crossings / |A|.
  CHECK(r.residuals[0] * r.residuals[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.residuals[1] * r.residuals[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.bound == doctest::Approx(std::sqrt(2.0 * 24 / 16)).epsilon(1e-12));
  CHECK(r.within_bound);

  // Residuals against a direct sparse apply: || lambda(g) xi - xi ||.
  for (int gen = 0; gen < 2; ++gen) {
    GroupAlgebraElement g = GroupAlgebraElement::delta(
        Word::from_letters(std::array<Letter, 1>{static_cast<Letter>(2 * gen)}));
    SparseOperator m = assemble(g, t.level(2));
    CVec out(r.xi.size());
    m.apply(r.xi, out);
    double moved = 0;
    for (std::size_t i = 0; i < out.size(); ++i) moved += std::norm(out[i] - r.xi[i]);
    // || lambda(g) xi - xi ||^2 counts points covered by exactly one of A,
    // gA: precisely the crossings in both directions over |A|.
    CHECK(std::sqrt(moved) == doctest::Approx(r.residuals[gen]).epsilon(1e-10));
  }

  // The whole space is exactly invariant.
  FolnerLevel whole;
  whole.level = 2;
  whole.k = 5;
  whole.unwound = 5;
  whole.base_rank = 5;
  whole.size = t.level(2).size();
  whole.points.resize(t.level(2).size());
  std::iota(whole.points.begin(), whole.points.end(), 0);
  whole.boundary = 0;
  whole.boundary_formula = 0;
  AlmostInvariantResult rw = almost_invariant(whole, t.level(2), t.graphs()[2]);
  CHECK(rw.residuals[0] == 0.0);
  CHECK(rw.residuals[1] == 0.0);
}

TEST_CASE("folner_report: rows wire counts, ratios, and deficiency") {
  QuotientTower t = build_ag_tower(2);
  FolnerFamily fam = build_A(t, {1, 2});
  std::vector<FolnerReportRow> rows = folner_report(fam, t, true);
  REQUIRE(rows.size() == 2);
  const FolnerReportRow& r2 = rows[1];
  CHECK(r2.level == 2);
  CHECK(r2.size == 16);
  CHECK(r2.boundary == 24);
  CHECK(r2.ratio_boundary == doctest::Approx(24.0 / 16.0));
  CHECK(r2.ratio_volume == doctest::Approx(16.0 / 128.0));
  CHECK(r2.bound == doctest::Approx(std::sqrt(3.0)));

  // Deficiency column equals the direct evaluation on A.
  SparseOperator m = assemble(averaging_element(), t.level(2));
  CHECK(r2.deficiency ==
        doctest::Approx(invariance_deficiency_on_support(m, fam.levels[1].points))
            .epsilon(1e-9));

  // Without the flag the column is a sentinel.
  std::vector<FolnerReportRow> plain = folner_report(fam, t, false);
  CHECK(plain[1].deficiency == -1.0);
}
