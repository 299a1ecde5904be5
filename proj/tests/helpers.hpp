#pragma once

// Shared test utilities: independent dense oracles built with Eigen so the
// library's sparse/iterative paths are checked against a second code path.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <vector>

#include "towernorm/quotients.hpp"
#include "towernorm/sparse_operator.hpp"
#include "towernorm/words.hpp"

namespace towernorm::test {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Applies a word to a point using the raw permutation tables directly,
// bypassing FiniteQuotient::act_word. Rightmost letter acts first.
inline std::uint32_t act_raw(const FiniteQuotient& q, const Word& w, std::uint32_t x) {
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
    Letter l = *it;
    int g = generator_of(l);
    x = is_inverse(l) ? q.inv_perm(g)[x] : q.perm(g)[x];
  }
  return x;
}

// Dense matrix of the quasi-regular action, assembled without SparseOperator.
inline MatrixXcd dense_op(const GroupAlgebraElement& a, const FiniteQuotient& q) {
  const auto n = static_cast<Eigen::Index>(q.size());
  MatrixXcd m = MatrixXcd::Zero(n, n);
  for (const auto& [w, c] : a.terms()) {
    for (std::uint32_t x = 0; x < q.size(); ++x) {
      m(static_cast<Eigen::Index>(act_raw(q, w, x)), static_cast<Eigen::Index>(x)) += c;
    }
  }
  return m;
}

inline MatrixXcd dense_from_sparse(const SparseOperator& op) {
  MatrixXcd m = MatrixXcd::Zero(static_cast<Eigen::Index>(op.dim()),
                                static_cast<Eigen::Index>(op.dim()));
  for (const auto& [r, c, v] : op.entries()) {
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v;
  }
  return m;
}

inline double dense_norm(const MatrixXcd& m) {
  return m.jacobiSvd().singularValues()(0);
}

inline double dense_smallest_singular(const MatrixXcd& m) {
  auto sv = m.jacobiSvd().singularValues();
  return sv(sv.size() - 1);
}

// Largest eigenvalue after removing the single eigenvalue closest to 1 (the
// constant vector of a connected transitive averaging action).  Input must
// be self-adjoint.
inline double dense_mu2(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  const auto& ev = es.eigenvalues();
  Eigen::Index skip = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 1.0) < std::abs(ev(skip) - 1.0)) skip = i;
  }
  double best = -2.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (i != skip) best = std::max(best, ev(i));
  }
  return best;
}

// Deterministic reduced word of exactly len letters.
inline Word random_word(std::mt19937_64& rng, int len, int n_gens = 2) {
  std::vector<Letter> ls;
  std::uniform_int_distribution<int> pick(0, 2 * n_gens - 1);
  while (static_cast<int>(ls.size()) < len) {
    Letter l = static_cast<Letter>(pick(rng));
    if (!ls.empty() && l == inverse_letter(ls.back())) continue;
    ls.push_back(l);
  }
  return Word::from_letters(ls);
}

inline GroupAlgebraElement random_element(std::mt19937_64& rng, int n_terms,
                                          int max_len, bool complex_coeffs,
                                          int n_gens = 2) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  GroupAlgebraElement a;
  for (int i = 0; i < n_terms; ++i) {
    Complex c(coeff(rng), complex_coeffs ? coeff(rng) : 0.0);
    a.add_term(random_word(rng, len(rng), n_gens), c);
  }
  return a;
}

inline GroupAlgebraElement random_self_adjoint(std::mt19937_64& rng, int n_terms,
                                               int max_len, bool complex_coeffs) {
  GroupAlgebraElement a = random_element(rng, n_terms, max_len, complex_coeffs);
  return Complex(0.5, 0.0) * (a + a.adjoint());
}

// Cyclic quotient: a rotates by +1, b rotates by +step.  Transitive for any
// step because a alone generates the cycle.
inline FiniteQuotient cyclic_quotient(std::uint32_t n, std::uint32_t step = 1) {
  std::vector<std::vector<std::uint32_t>> perms(2, std::vector<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < n; ++i) {
    perms[0][i] = (i + 1) % n;
    perms[1][i] = (i + step) % n;
  }
  return FiniteQuotient(1, std::move(perms), 0);
}

}  // namespace towernorm::test
