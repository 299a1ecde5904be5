#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "towernorm/spectra.hpp"
#include "towernorm/util.hpp"

using namespace towernorm;
using test::dense_from_sparse;
using test::dense_mu2;
using test::dense_norm;
using test::dense_op;
using test::MatrixXcd;

namespace {

CVec random_vec(std::mt19937_64& rng, std::size_t n, bool complex_parts = true) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CVec v(n);
  for (auto& c : v) c = Complex(u(rng), complex_parts ? u(rng) : 0.0);
  return v;
}

// Eigenvalues of the radial tridiagonal compression of the averaging
// operator on the free-group ball: off-diagonal c * sqrt(|S_{r+1}|/|S_r|).
// The ball operator commutes with the sphere-transitive symmetries, so its
// top singular value is attained on radial vectors and equals this matrix's
// largest eigenvalue.
double radial_kesten(int R) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(R + 1, R + 1);
  for (int r = 0; r < R; ++r) {
    double ratio = (r == 0) ? 4.0 : 3.0;
    T(r, r + 1) = T(r + 1, r) = 0.25 * std::sqrt(ratio);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  return es.eigenvalues()(R);
}

}  // namespace

TEST_CASE("assemble: identity, against the dense oracle, homomorphism") {
  FiniteQuotient q = sl2_quotient(3);
  GroupAlgebraElement id = GroupAlgebraElement::delta(Word());
  MatrixXcd m = dense_from_sparse(assemble(id, q));
  CHECK((m - MatrixXcd::Identity(24, 24)).norm() == 0.0);

  std::mt19937_64 rng(41);
  for (int i = 0; i < 10; ++i) {
    GroupAlgebraElement a = test::random_element(rng, 5, 3, true);
    MatrixXcd lhs = dense_from_sparse(assemble(a, q));
    MatrixXcd rhs = dense_op(a, q);
    CHECK((lhs - rhs).norm() < 1e-14);
  }
  for (int i = 0; i < 10; ++i) {
    GroupAlgebraElement u = test::random_element(rng, 3, 2, true);
    GroupAlgebraElement v = test::random_element(rng, 3, 2, true);
    MatrixXcd prod = dense_from_sparse(assemble(u * v, q));
    MatrixXcd split = dense_op(u, q) * dense_op(v, q);
    CHECK((prod - split).norm() < 1e-12);
  }
  // Adjoint element gives the conjugate transpose matrix.
  GroupAlgebraElement a = test::random_element(rng, 5, 3, true);
  MatrixXcd ma = dense_from_sparse(assemble(a, q));
  MatrixXcd mastar = dense_from_sparse(assemble(a.adjoint(), q));
  CHECK((mastar - ma.adjoint()).norm() < 1e-14);
}

TEST_CASE("assemble: level-1 averaging matrix is doubly stochastic") {
  QuotientTower t = build_ag_tower(1);
  MatrixXcd m = dense_from_sparse(assemble(averaging_element(), t.level(1)));
  for (int j = 0; j < 4; ++j) {
    CHECK(m.col(j).sum() == Complex(1, 0));
    CHECK(m.row(j).sum() == Complex(1, 0));
  }
  // Exact entries: half on the two neighbors, zero elsewhere.
  CHECK(m(1, 0) == Complex(0.5, 0));
  CHECK(m(2, 0) == Complex(0.5, 0));
  CHECK(m(0, 0) == Complex(0, 0));
  CHECK(m(3, 0) == Complex(0, 0));
}

TEST_CASE("op_norm: identities and dense cross-check") {
  FiniteQuotient q = sl2_quotient(3);
  PowerOptions opts;

  // A single group element acts unitarily.
  SpectralResult unit = op_norm(assemble(GroupAlgebraElement::delta(parse_word("abA")), q), opts);
  CHECK(unit.converged);
  CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    GroupAlgebraElement a = test::random_element(rng, 5, 3, true);
    SparseOperator m = assemble(a, q);
    SpectralResult r = op_norm(m, opts);
    CHECK(r.converged);
    CHECK(r.residual <= opts.tol);
    CHECK(r.value == doctest::Approx(dense_norm(dense_from_sparse(m))).epsilon(1e-7));
  }
}

TEST_CASE("trivial_vector: unit norm, fixed by averaging") {
  for (int p : {3, 5}) {
    FiniteQuotient q = sl2_quotient(p);
    CVec xi = trivial_vector(q);
    CHECK(norm2(xi) == doctest::Approx(1.0).epsilon(1e-14));
    SparseOperator m = assemble(averaging_element(), q);
    CVec out(xi.size());
    m.apply(xi, out);
    double defect = 0;
    for (std::size_t i = 0; i < xi.size(); ++i) defect += std::norm(out[i] - xi[i]);
    CHECK(std::sqrt(defect) < 1e-13);
  }
}

TEST_CASE("spectral_gap: exact small spectra and dense oracles") {
  GroupAlgebraElement x = averaging_element();

  // Level 1: permutations a, b are the commuting involutions of the Klein
  // action; eigenvalues of (P_a + P_b)/2 over the characters are
  // {1, 0, 0, -1}, so mu2 = 0 and delta = 1.
  QuotientTower t = build_ag_tower(2);
  GapResult g1 = spectral_gap(t.level(1), x);
  CHECK(g1.mu2 == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(g1.delta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g1.detail.converged);

  // Level 2 against the dense eigenvalue oracle.
  GapResult g2 = spectral_gap(t.level(2), x);
  double mu2_oracle = dense_mu2(dense_op(x, t.level(2)));
  CHECK(g2.mu2 == doctest::Approx(mu2_oracle).epsilon(1e-8));
  CHECK(g2.mu2 == doctest::Approx(0.8090169943749475).epsilon(1e-9));
  CHECK(g2.delta == doctest::Approx(0.19098300562505255).epsilon(1e-7));

  // Congruence quotients.
  for (int p : {3, 5}) {
    FiniteQuotient q = sl2_quotient(p);
    GapResult g = spectral_gap(q, x);
    double oracle = dense_mu2(dense_op(x, q));
    CHECK(g.mu2 == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(g.delta > 0.0);
  }

  // One-point quotient is degenerate by convention.
  GapResult g0 = spectral_gap(t.level(0), x);
  CHECK(g0.degenerate);
  CHECK(g0.delta == doctest::Approx(2.0));

  // Non-self-adjoint elements are rejected.
  CHECK_THROWS_AS(spectral_gap(t.level(1), parse_element("1*a")), ValidationError);
}

TEST_CASE("uplift: isometry and intertwiner; projection contracts") {
  QuotientTower t = build_ag_tower(2);
  const TowerLink& link = t.links()[1];
  const FiniteQuotient& lo = t.level(1);
  const FiniteQuotient& hi = t.level(2);
  std::mt19937_64 rng(47);

  for (int i = 0; i < 50; ++i) {
    CVec eta = random_vec(rng, lo.size());
    CVec lifted = uplift(link, eta);
    CHECK(norm2(lifted) == doctest::Approx(norm2(eta)).epsilon(1e-13));
    // Projection restores exactly the lifted subspace.
    CVec back = project_old(link, lifted);
    double diff = 0;
    for (std::size_t j = 0; j < lifted.size(); ++j) diff += std::norm(back[j] - lifted[j]);
    CHECK(std::sqrt(diff) < 1e-13);
  }

  // The trivial vector lifts to the trivial vector.
  CVec lift0 = uplift(link, trivial_vector(lo));
  CVec triv = trivial_vector(hi);
  for (std::size_t j = 0; j < triv.size(); ++j) {
    CHECK(std::abs(lift0[j] - triv[j]) < 1e-15);
  }

  // Intertwines the actions: lambda_hi(a) U = U lambda_lo(a).
  for (int i = 0; i < 10; ++i) {
    GroupAlgebraElement a = test::random_element(rng, 4, 3, true);
    SparseOperator mlo = assemble(a, lo);
    SparseOperator mhi = assemble(a, hi);
    CVec eta = random_vec(rng, lo.size());
    CVec lo_applied(lo.size());
    mlo.apply(eta, lo_applied);
    CVec lhs = uplift(link, lo_applied);
    CVec lifted = uplift(link, eta);
    CVec rhs(hi.size());
    mhi.apply(lifted, rhs);
    double diff = 0;
    for (std::size_t j = 0; j < rhs.size(); ++j) diff += std::norm(lhs[j] - rhs[j]);
    CHECK(std::sqrt(diff) < 1e-12);
  }

  // Projection is idempotent and kills fiber-mean-zero vectors.
  CVec xi = random_vec(rng, hi.size());
  CVec p1 = project_old(link, xi);
  CVec p2 = project_old(link, p1);
  double diff = 0;
  for (std::size_t j = 0; j < p1.size(); ++j) diff += std::norm(p2[j] - p1[j]);
  CHECK(std::sqrt(diff) < 1e-13);
  CHECK(norm2(p1) <= norm2(xi) + 1e-12);

  // Sparse-vector bound: ||Q xi||^2 <= s (nu_lo/nu_hi) ||xi||^2.
  std::uniform_int_distribution<std::uint32_t> pick(0, hi.size() - 1);
  for (int i = 0; i < 100; ++i) {
    int s = 1 + static_cast<int>(rng() % 8);
    CVec sparse(hi.size(), Complex(0, 0));
    for (int j = 0; j < s; ++j) {
      sparse[pick(rng)] = Complex(std::uniform_real_distribution<double>(-1, 1)(rng),
                                  std::uniform_real_distribution<double>(-1, 1)(rng));
    }
    CVec q = project_old(link, sparse);
    double lhs = norm2(q) * norm2(q);
    double rhs = s * (static_cast<double>(lo.size()) / hi.size()) * norm2(sparse) *
                 norm2(sparse);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("rho_norm: complement compression against dense oracle") {
  QuotientTower t = build_ag_tower(2);
  GroupAlgebraElement x = averaging_element();

  // Level 1 over level 0: the complement of constants contains the parity
  // eigenvector with eigenvalue -1, so the compression has norm 1.
  SpectralResult r1 = rho_norm(x, t.level(1), t.links()[0]);
  CHECK(r1.converged);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-9));

  // Level 2 over level 1: drop the 32-dimensional lifted subspace.
  SpectralResult r2 = rho_norm(x, t.level(2), t.links()[1]);
  CHECK(r2.value == doctest::Approx(0.8090169943749475).epsilon(1e-8));

  // Dense oracle: P M P with P the projection onto the complement.
  const TowerLink& link = t.links()[1];
  const FiniteQuotient& hi = t.level(2);
  auto complement_norm = [&](const GroupAlgebraElement& a) {
    MatrixXcd m = dense_op(a, hi);
    MatrixXcd proj = MatrixXcd::Identity(hi.size(), hi.size());
    // Subtract the fiber-averaging projector.
    for (std::uint32_t x1 = 0; x1 < hi.size(); ++x1) {
      for (std::uint32_t x2 = 0; x2 < hi.size(); ++x2) {
        if (link.projection[x1] == link.projection[x2]) {
          proj(x1, x2) -= 1.0 / link.fiber_size;
        }
      }
    }
    return dense_norm(proj * m * proj);
  };
  CHECK(r2.value == doctest::Approx(complement_norm(x)).epsilon(1e-8));

  std::mt19937_64 rng(53);
  for (int i = 0; i < 5; ++i) {
    GroupAlgebraElement a = test::random_element(rng, 4, 3, true);
    SpectralResult r = rho_norm(a, hi, link);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(complement_norm(a)).epsilon(1e-7));
    // Dominated by the full quasi-regular norm.
    SpectralResult full = op_norm(assemble(a, hi));
    CHECK(r.value <= full.value + 1e-8);
  }
}

TEST_CASE("regular_norm: ball compressions against independent oracles") {
  GroupAlgebraElement x = averaging_element();

  // The radial reduction gives the exact ball norm for the averaging
  // element at every radius.
  for (int R : {1, 2, 3, 4, 8, 14}) {
    SpectralResult r = regular_norm(x, R);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(radial_kesten(R)).epsilon(1e-9));
  }
  // Frozen endpoints of the sweep.
  CHECK(regular_norm(x, 1).value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(regular_norm(x, 14).value == doctest::Approx(0.851167568411735).epsilon(1e-9));

  // Below the free-group norm sqrt(3)/2, monotone in R.
  double prev = 0;
  for (int R = 1; R <= 6; ++R) {
    double v = regular_norm(x, R).value;
    CHECK(v >= prev - 1e-12);
    CHECK(v <= std::sqrt(3.0) / 2.0 + 1e-9);
    prev = v;
  }

  // Identity acts with norm 1 already on the radius-0 ball.
  CHECK(regular_norm(GroupAlgebraElement::delta(Word()), 0).value ==
        doctest::Approx(1.0));

  // Dense oracle on small balls for general complex elements: matrix
  // C[y][x] = a(y x^-1) over reduced words in the ball.
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 6; ++trial) {
    GroupAlgebraElement a = test::random_element(rng, 4, 2, true);
    int R = 2 + static_cast<int>(trial % 2);
    // Enumerate ball words.
    std::vector<Word> words{Word()};
    std::map<Word, std::size_t> index{{Word(), 0}};
    std::size_t head = 0;
    std::vector<int> depth{0};
    while (head < words.size()) {
      Word w = words[head];
      int d = depth[head];
      ++head;
      if (d == R) continue;
      for (Letter l = 0; l < 4; ++l) {
        Word ext = w * Word::from_letters(std::span<const Letter>(&l, 1));
        if (ext.length() != w.length() + 1) continue;
        if (index.emplace(ext, words.size()).second) {
          words.push_back(ext);
          depth.push_back(d + 1);
        }
      }
    }
    MatrixXcd c = MatrixXcd::Zero(words.size(), words.size());
    for (std::size_t col = 0; col < words.size(); ++col) {
      for (const auto& [g, coeff] : a.terms()) {
        Word target = g * words[col];
        auto it = index.find(target);
        if (it != index.end()) c(it->second, col) += coeff;
      }
    }
    SpectralResult r = regular_norm(a, R);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(dense_norm(c)).epsilon(1e-7));
  }

  // Node cap refuses oversized balls.
  CHECK_THROWS_AS(regular_norm(x, 2, PowerOptions{}, 10), CapExceeded);
  CHECK_THROWS_AS(regular_norm(x, 15), CapExceeded);
}
