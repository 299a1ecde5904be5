#include "towernorm/sparse_norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <Eigen/Dense>

namespace towernorm {

GrowthFunction growth_iota(int levels) {
  if (levels < 1) throw std::invalid_argument("need at least one level");
  return GrowthFunction{std::vector<std::int64_t>(levels, 1)};
}

GrowthFunction growth_nu(const QuotientTower& tower) {
  GrowthFunction g;
  for (const FiniteQuotient& q : tower.levels()) g.values.push_back(q.size());
  return g;
}

GrowthFunction load_growth(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  GrowthFunction g;
  std::int64_t v;
  while (in >> v) {
    if (v <= 0) throw ValidationError("growth values must be positive");
    if (!g.values.empty() && v < g.values.back()) {
      throw ValidationError("growth values must be non-decreasing");
    }
    g.values.push_back(v);
  }
  if (!in.eof()) throw ValidationError("malformed growth file '" + path + "'");
  if (g.values.empty()) throw ValidationError("empty growth file '" + path + "'");
  return g;
}

namespace {

// Strict domination on this finite window: the ratio gamma/gamma2 strictly
// decreases and at least halves from the first level to the last.
bool window_prec(const GrowthFunction& gamma, const GrowthFunction& gamma2) {
  if (gamma.levels() < 2) return false;
  double prev = 0;
  for (int n = 0; n < gamma.levels(); ++n) {
    double r = static_cast<double>(gamma.at(n)) / static_cast<double>(gamma2.at(n));
    if (n > 0 && r >= prev) return false;
    prev = r;
  }
  double first = static_cast<double>(gamma.at(0)) / static_cast<double>(gamma2.at(0));
  return prev <= first / 2.0;
}

}  // namespace

GrowthComparison compare_growth(const GrowthFunction& gamma,
                                const GrowthFunction& gamma2) {
  if (gamma.levels() != gamma2.levels() || gamma.levels() == 0) {
    throw std::invalid_argument("growth functions must share a nonempty level range");
  }
  GrowthComparison cmp;
  for (int n = 0; n < gamma.levels(); ++n) {
    if (gamma.at(n) <= 0 || gamma2.at(n) <= 0) {
      throw std::invalid_argument("growth values must be positive");
    }
    cmp.ratios.push_back(static_cast<double>(gamma.at(n)) /
                         static_cast<double>(gamma2.at(n)));
  }
  cmp.ratio_min = *std::min_element(cmp.ratios.begin(), cmp.ratios.end());
  cmp.ratio_max = *std::max_element(cmp.ratios.begin(), cmp.ratios.end());
  cmp.prec = window_prec(gamma, gamma2);
  bool reverse = window_prec(gamma2, gamma);
  cmp.leq = !reverse;
  cmp.sim = !cmp.prec && !reverse;
  return cmp;
}

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXd;

std::vector<std::uint32_t> checked_support(std::uint32_t dim,
                                           std::span<const std::uint32_t> T) {
  std::vector<std::uint32_t> s(T.begin(), T.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw std::invalid_argument("support has repeated points");
  }
  if (!s.empty() && s.back() >= dim) {
    throw std::invalid_argument("support point out of range");
  }
  return s;
}

// Sparse column as parallel arrays, optionally with the identity subtracted.
struct Column {
  std::vector<std::uint32_t> rows;
  std::vector<Complex> values;
  double norm2 = 0;  // squared
};

Column materialize_column(const SparseOperator& m, std::uint32_t c, bool minus_id) {
  Column col;
  auto rows = m.col_rows(c);
  auto values = m.col_values(c);
  col.rows.assign(rows.begin(), rows.end());
  col.values.assign(values.begin(), values.end());
  if (minus_id) {
    auto it = std::lower_bound(col.rows.begin(), col.rows.end(), c);
    std::size_t pos = it - col.rows.begin();
    if (it != col.rows.end() && *it == c) {
      col.values[pos] -= 1.0;
      if (col.values[pos] == Complex(0.0, 0.0)) {
        col.rows.erase(it);
        col.values.erase(col.values.begin() + pos);
      }
    } else {
      col.rows.insert(it, c);
      col.values.insert(col.values.begin() + pos, Complex(-1.0));
    }
  }
  for (const Complex& v : col.values) col.norm2 += std::norm(v);
  return col;
}

Complex column_dot(const Column& a, const Column& b) {
  Complex s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.rows.size() && j < b.rows.size()) {
    if (a.rows[i] == b.rows[j]) {
      s += std::conj(a.values[i]) * b.values[j];
      ++i;
      ++j;
    } else if (a.rows[i] < b.rows[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

MatrixXcd gram_matrix(const SparseOperator& m,
                      const std::vector<std::uint32_t>& T, bool minus_id) {
  const std::size_t t = T.size();
  std::vector<Column> cols(t);
  for (std::size_t i = 0; i < t; ++i) cols[i] = materialize_column(m, T[i], minus_id);
  MatrixXcd g(t, t);
  for (std::size_t i = 0; i < t; ++i) {
    g(i, i) = cols[i].norm2;
    for (std::size_t j = i + 1; j < t; ++j) {
      Complex v = column_dot(cols[i], cols[j]);
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

constexpr std::size_t kDenseGramLimit = 1024;

// Extreme eigenvalue of the support compression of m*m (or (m-I)*(m-I)).
double compression_extreme(const SparseOperator& m,
                           const std::vector<std::uint32_t>& T, bool minus_id,
                           bool smallest, double tol) {
  const std::size_t t = T.size();
  if (t == 0) return 0;
  if (t <= kDenseGramLimit) {
    MatrixXcd g = gram_matrix(m, T, minus_id);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g, Eigen::EigenvaluesOnly);
    const VectorXd& ev = es.eigenvalues();
    return smallest ? ev(0) : ev(t - 1);
  }
  // Iterative path: power iteration on the compression (shifted for the
  // smallest eigenvalue).
  const std::uint32_t dim = m.dim();
  CVec full(dim), mid(dim);
  auto apply_b = [&](const CVec& in, CVec& out) {
    std::fill(full.begin(), full.end(), Complex(0.0));
    for (std::size_t i = 0; i < t; ++i) full[T[i]] = in[i];
    m.apply(full, mid);
    if (minus_id) {
      for (std::uint32_t x = 0; x < dim; ++x) mid[x] -= full[x];
    }
    m.apply_adjoint(mid, full);
    if (minus_id) {
      // full = m*(mid); subtract mid to finish (m - I)* mid
      for (std::uint32_t x = 0; x < dim; ++x) full[x] -= mid[x];
    }
    out.resize(t);
    for (std::size_t i = 0; i < t; ++i) out[i] = full[T[i]];
  };
  PowerOptions opts;
  opts.tol = tol;
  if (!smallest) {
    SpectralResult r = largest_eigenvalue(t, apply_b, 0.0, opts);
    return r.value;
  }
  double top = m.one_norm_bound() + (minus_id ? 1.0 : 0.0);
  const double c = top * top + 1.0;
  auto apply_flipped = [&](const CVec& in, CVec& out) {
    apply_b(in, out);
    for (std::size_t i = 0; i < t; ++i) out[i] = c * in[i] - out[i];
  };
  SpectralResult r = largest_eigenvalue(t, apply_flipped, 0.0, opts);
  return c - r.value;
}

}  // namespace

double sparse_norm_on_support(const SparseOperator& m,
                              std::span<const std::uint32_t> T, double tol) {
  std::vector<std::uint32_t> s = checked_support(m.dim(), T);
  double mu = compression_extreme(m, s, false, false, tol);
  return std::sqrt(std::max(0.0, mu));
}

double invariance_deficiency_on_support(const SparseOperator& m,
                                        std::span<const std::uint32_t> T) {
  std::vector<std::uint32_t> s = checked_support(m.dim(), T);
  if (s.empty()) return 0;
  double mu = compression_extreme(m, s, true, true, 1e-12);
  return std::sqrt(std::max(0.0, mu));
}

namespace {

// C(n, s), saturating at cap + 1.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t s, std::uint64_t cap) {
  if (s > n) return 0;
  s = std::min(s, n - s);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= s; ++i) {
    long double next = static_cast<long double>(result) * (n - s + i) / i;
    if (next > static_cast<long double>(cap) + 0.5) return cap + 1;
    result = result * (n - s + i) / i;
  }
  return result;
}

bool next_combination(std::vector<std::uint32_t>& idx, std::uint32_t n) {
  const std::size_t s = idx.size();
  for (std::size_t i = s; i-- > 0;) {
    if (idx[i] < n - (s - i)) {
      ++idx[i];
      for (std::size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

SupportValue sparse_norm_exhaustive(const SparseOperator& m, std::int64_t s,
                                    std::uint64_t cap, double tol) {
  if (s < 1) throw std::invalid_argument("budget must be >= 1");
  const std::uint32_t n = m.dim();
  if (static_cast<std::uint64_t>(s) >= n) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return {sparse_norm_on_support(m, all, tol), std::move(all)};
  }
  if (binomial_capped(n, s, cap) > cap) {
    throw CapExceeded("C(" + std::to_string(n) + "," + std::to_string(s) +
                      ") exceeds the exhaustive cap of " + std::to_string(cap));
  }
  std::vector<std::uint32_t> idx(s);
  std::iota(idx.begin(), idx.end(), 0);
  SupportValue best{-1.0, {}};
  do {
    double v = sparse_norm_on_support(m, idx, tol);
    if (v > best.value) {
      best.value = v;
      best.support = idx;
    }
  } while (next_combination(idx, n));
  return best;
}

namespace {

// Indices of the s largest magnitudes, ties to the lowest index, ascending.
std::vector<std::uint32_t> top_s_support(const CVec& z, std::int64_t s) {
  std::vector<std::uint32_t> idx(z.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto cmp = [&](std::uint32_t i, std::uint32_t j) {
    double ai = std::norm(z[i]), aj = std::norm(z[j]);
    if (ai != aj) return ai > aj;
    return i < j;
  };
  std::nth_element(idx.begin(), idx.begin() + s, idx.end(), cmp);
  idx.resize(s);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

SupportValue sparse_norm_truncated(const SparseOperator& m, std::int64_t s,
                                   int restarts, double tol, std::uint64_t seed) {
  if (s < 1) throw std::invalid_argument("budget must be >= 1");
  const std::uint32_t n = m.dim();
  if (static_cast<std::uint64_t>(s) >= n) {
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return {sparse_norm_on_support(m, all, tol), std::move(all)};
  }
  std::set<std::vector<std::uint32_t>> visited;
  const int max_iter = 300;
  // Dense starts (one deterministic, `restarts` random) explore the global
  // basin; one delta start per coordinate seeds every locally strong column
  // so isolated optima are not missed.
  const std::int64_t n_starts = 1 + restarts + n;
  for (std::int64_t r = 0; r < n_starts; ++r) {
    CVec v;
    if (r == 0) {
      v = deterministic_seed(n);
    } else if (r <= restarts) {
      v = random_seed(n, splitmix64(seed + static_cast<std::uint64_t>(r)));
    } else {
      v.assign(n, Complex(0.0));
      v[static_cast<std::size_t>(r - restarts - 1)] = 1.0;
    }
    double nv = norm2(v);
    if (nv == 0) continue;
    scale(v, 1.0 / nv);
    CVec w(n), z(n);
    std::vector<std::uint32_t> last;
    int stable = 0;
    for (int it = 0; it < max_iter && visited.size() < 4096; ++it) {
      m.apply(v, w);
      m.apply_adjoint(w, z);
      std::vector<std::uint32_t> support = top_s_support(z, s);
      visited.insert(support);
      // Keep only the selected entries and renormalize.
      CVec trimmed(n, Complex(0.0));
      for (std::uint32_t i : support) trimmed[i] = z[i];
      double tn = norm2(trimmed);
      if (tn == 0) break;
      scale(trimmed, 1.0 / tn);
      v.swap(trimmed);
      if (support == last) {
        if (++stable >= 3) break;
      } else {
        stable = 0;
        last = std::move(support);
      }
    }
  }
  std::vector<SupportValue> ranked;
  ranked.reserve(visited.size());
  for (const auto& support : visited) {
    ranked.push_back({sparse_norm_on_support(m, support, tol), support});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const SupportValue& a, const SupportValue& b) {
              return a.value > b.value || (a.value == b.value && a.support < b.support);
            });

  // Polish the strongest basins with a single-swap local search: replace one
  // selected coordinate by one outside as long as that strictly improves the
  // value.  The budget bounds the total number of exact evaluations.
  std::set<std::vector<std::uint32_t>> evaluated(visited.begin(), visited.end());
  std::uint64_t eval_budget = 20000;
  SupportValue best{-1.0, {}};
  const std::size_t polish_starts = std::min<std::size_t>(ranked.size(), 8);
  for (std::size_t start = 0; start < polish_starts; ++start) {
    SupportValue cur = ranked[start];
    bool improved = true;
    while (improved && eval_budget > 0) {
      improved = false;
      SupportValue next = cur;
      std::vector<bool> in_support(n, false);
      for (std::uint32_t i : cur.support) in_support[i] = true;
      for (std::size_t drop = 0; drop < cur.support.size(); ++drop) {
        for (std::uint32_t add = 0; add < n; ++add) {
          if (in_support[add]) continue;
          std::vector<std::uint32_t> cand = cur.support;
          cand[drop] = add;
          std::sort(cand.begin(), cand.end());
          if (!evaluated.insert(cand).second) continue;
          if (eval_budget == 0) break;
          --eval_budget;
          double value = sparse_norm_on_support(m, cand, tol);
          if (value > next.value + 1e-12) {
            next.value = value;
            next.support = cand;
          }
        }
      }
      if (next.value > cur.value + 1e-12) {
        cur = std::move(next);
        improved = true;
      }
    }
    if (cur.value > best.value) best = std::move(cur);
  }
  return best;
}

namespace {

// Smallest eigenvalue of the Gram matrix bordered by one extra column, via
// the secular equation in the eigenbasis of the current Gram.
double bordered_min_eigenvalue(const VectorXd& lambda, const MatrixXcd& vectors,
                               const Eigen::VectorXcd& b, double beta) {
  const Eigen::Index t = lambda.size();
  Eigen::VectorXcd w = vectors.adjoint() * b;
  const double scale = std::max({1.0, beta, lambda.cwiseAbs().maxCoeff()});
  const double eps_w = 1e-14 * scale;
  double cut = std::numeric_limits<double>::infinity();
  double coupled = 0;
  for (Eigen::Index i = 0; i < t; ++i) {
    double wi = std::abs(w(i));
    if (wi > eps_w) {
      cut = std::min(cut, lambda(i));
      coupled += wi * wi;
    }
  }
  if (!std::isfinite(cut)) return std::min(lambda(0), beta);
  auto f = [&](double x) {
    double s = beta - x;
    for (Eigen::Index i = 0; i < t; ++i) {
      double wi2 = std::norm(w(i));
      if (wi2 > eps_w * eps_w) s -= wi2 / (lambda(i) - x);
    }
    return s;
  };
  double lo = std::min(lambda(0), beta) - std::sqrt(coupled) - 1e-12 * scale;
  double hi = cut - 1e-15 * scale;
  if (f(lo) < 0) lo -= scale;  // defensive widening
  for (int it = 0; it < 200 && hi - lo > 1e-16 * scale; ++it) {
    double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<std::uint32_t> greedy_min_deficiency_support(const SparseOperator& m,
                                                         std::int64_t s) {
  const std::uint32_t n = m.dim();
  std::vector<Column> cols(n);
  for (std::uint32_t x = 0; x < n; ++x) cols[x] = materialize_column(m, x, true);
  std::vector<char> chosen(n, 0);
  std::vector<std::uint32_t> T;
  MatrixXcd gram(s, s);
  for (std::int64_t step = 0; step < s; ++step) {
    std::uint32_t best_x = n;
    double best_val = std::numeric_limits<double>::infinity();
    if (step == 0) {
      for (std::uint32_t x = 0; x < n; ++x) {
        if (cols[x].norm2 < best_val) {
          best_val = cols[x].norm2;
          best_x = x;
        }
      }
    } else {
      MatrixXcd g = gram.topLeftCorner(step, step);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(g);
      const VectorXd& lambda = es.eigenvalues();
      const MatrixXcd& vectors = es.eigenvectors();
      Eigen::VectorXcd b(step);
      for (std::uint32_t x = 0; x < n; ++x) {
        if (chosen[x]) continue;
        for (std::int64_t i = 0; i < step; ++i) {
          b(i) = column_dot(cols[T[i]], cols[x]);
        }
        double val = bordered_min_eigenvalue(lambda, vectors, b, cols[x].norm2);
        if (val < best_val) {
          best_val = val;
          best_x = x;
        }
      }
    }
    // Grow the Gram matrix with the winner.
    for (std::int64_t i = 0; i < step; ++i) {
      Complex v = column_dot(cols[T[i]], cols[best_x]);
      gram(i, step) = v;
      gram(step, i) = std::conj(v);
    }
    gram(step, step) = cols[best_x].norm2;
    chosen[best_x] = 1;
    T.push_back(best_x);
  }
  std::sort(T.begin(), T.end());
  return T;
}

}  // namespace

DeficiencyResult min_invariance_deficiency(
    const SparseOperator& m, std::int64_t s, const std::string& strategy,
    const std::vector<std::uint32_t>* seed_support, std::uint64_t cap) {
  if (strategy == "folner") {
    if (!seed_support) throw std::invalid_argument("folner strategy needs a seed set");
    DeficiencyResult res;
    res.support = *seed_support;
    std::sort(res.support.begin(), res.support.end());
    res.value = invariance_deficiency_on_support(m, res.support);
    res.strategy = "folner";
    return res;
  }
  if (s < 1) throw std::invalid_argument("budget must be >= 1");
  const std::uint32_t n = m.dim();
  if (static_cast<std::uint64_t>(s) >= n) {
    DeficiencyResult res;
    res.support.resize(n);
    std::iota(res.support.begin(), res.support.end(), 0);
    res.value = invariance_deficiency_on_support(m, res.support);
    res.strategy = "full";
    return res;
  }
  bool exhaustive_ok = binomial_capped(n, s, cap) <= cap;
  std::string pick = strategy;
  if (pick == "auto") pick = exhaustive_ok ? "exhaustive" : "greedy";
  if (pick == "exhaustive") {
    if (!exhaustive_ok) {
      throw CapExceeded("C(" + std::to_string(n) + "," + std::to_string(s) +
                        ") exceeds the exhaustive cap of " + std::to_string(cap));
    }
    std::vector<std::uint32_t> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    DeficiencyResult best;
    best.value = std::numeric_limits<double>::infinity();
    best.strategy = "exhaustive";
    do {
      double v = invariance_deficiency_on_support(m, idx);
      if (v < best.value) {
        best.value = v;
        best.support = idx;
      }
    } while (next_combination(idx, n));
    return best;
  }
  if (pick == "greedy") {
    DeficiencyResult res;
    res.support = greedy_min_deficiency_support(m, s);
    res.value = invariance_deficiency_on_support(m, res.support);
    res.strategy = "greedy";
    return res;
  }
  throw std::invalid_argument("unknown strategy '" + strategy + "'");
}

double tau_lower_bound(double delta, std::int64_t s, std::int64_t nu) {
  if (nu < 1) throw std::invalid_argument("nu must be >= 1");
  double frac = 1.0 - static_cast<double>(s) / static_cast<double>(nu);
  return delta * std::sqrt(std::max(0.0, frac));
}

double best_sparse_approx_error(std::int64_t m, std::int64_t s) {
  if (m < 1 || s < 0) throw std::invalid_argument("need m >= 1 and s >= 0");
  if (s >= m) return 0;
  return std::sqrt(static_cast<double>(m - s) / static_cast<double>(m));
}

bool support_invariance_check(const FiniteQuotient& q, const Word& g,
                              const std::vector<std::uint32_t>& support) {
  std::set<std::uint32_t> image;
  for (std::uint32_t x : support) {
    if (x >= q.size()) throw std::invalid_argument("support point out of range");
    image.insert(q.act_word(g, x));
  }
  return image.size() == support.size();
}

}  // namespace towernorm
