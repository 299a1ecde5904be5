#include "towernorm/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "towernorm/free_ball.hpp"

namespace towernorm {

SparseOperator assemble(const GroupAlgebraElement& a, const FiniteQuotient& q) {
  if (a.max_generator() >= q.n_gens()) {
    throw ValidationError("element uses a generator the quotient does not have");
  }
  std::vector<Triplet> triplets;
  triplets.reserve(a.terms().size() * q.size());
  for (const auto& [w, c] : a.terms()) {
    for (std::uint32_t x = 0; x < q.size(); ++x) {
      triplets.push_back({q.act_word(w, x), x, c});
    }
  }
  return SparseOperator::from_triplets(q.size(), std::move(triplets));
}

SpectralResult op_norm(const SparseOperator& m, const PowerOptions& opts) {
  auto apply = [&m](const CVec& in, CVec& out) { m.apply(in, out); };
  auto apply_adjoint = [&m](const CVec& in, CVec& out) { m.apply_adjoint(in, out); };
  return largest_singular_value(m.dim(), apply, apply_adjoint, opts);
}

CVec trivial_vector(const FiniteQuotient& q) {
  return CVec(q.size(), Complex(1.0 / std::sqrt(static_cast<double>(q.size()))));
}

GapResult spectral_gap(const FiniteQuotient& q, const GroupAlgebraElement& x,
                       const PowerOptions& opts) {
  if (!x.is_self_adjoint(1e-12)) {
    throw ValidationError("spectral gap needs a self-adjoint element");
  }
  GapResult res;
  if (q.size() == 1) {
    res.degenerate = true;
    res.mu2 = -1.0;
    res.delta = 2.0;
    res.detail.converged = true;
    res.detail.tol = opts.tol;
    return res;
  }
  SparseOperator m = assemble(x, q);
  const double shift = std::max(1.0, x.one_norm());
  const double unit = 1.0 / std::sqrt(static_cast<double>(q.size()));
  std::function<void(CVec&)> project = [unit](CVec& v) {
    Complex mean = 0;
    for (const Complex& c : v) mean += c;
    mean *= unit * unit;
    for (Complex& c : v) c -= mean;
  };
  auto apply_b = [&m](const CVec& in, CVec& out) { m.apply(in, out); };
  res.detail = largest_eigenvalue(q.size(), apply_b, shift, opts, &project);
  res.mu2 = res.detail.value;
  res.delta = 1.0 - res.mu2;
  return res;
}

CVec uplift(const TowerLink& link, const CVec& lower) {
  if (lower.size() != link.lower_size) {
    throw ValidationError("vector length does not match the lower level");
  }
  const double s = 1.0 / std::sqrt(static_cast<double>(link.fiber_size));
  CVec out(link.upper_size);
  for (std::uint32_t x = 0; x < link.upper_size; ++x) {
    out[x] = lower[link.projection[x]] * s;
  }
  return out;
}

CVec project_old(const TowerLink& link, const CVec& xi) {
  if (xi.size() != link.upper_size) {
    throw ValidationError("vector length does not match the upper level");
  }
  CVec sums(link.lower_size, Complex(0.0));
  for (std::uint32_t x = 0; x < link.upper_size; ++x) {
    sums[link.projection[x]] += xi[x];
  }
  const double inv_fiber = 1.0 / static_cast<double>(link.fiber_size);
  CVec out(link.upper_size);
  for (std::uint32_t x = 0; x < link.upper_size; ++x) {
    out[x] = sums[link.projection[x]] * inv_fiber;
  }
  return out;
}

SpectralResult rho_norm(const GroupAlgebraElement& a, const FiniteQuotient& upper,
                        const TowerLink& link, const PowerOptions& opts) {
  if (upper.size() != link.upper_size) {
    throw ValidationError("quotient does not match the link");
  }
  SparseOperator m = assemble(a, upper);
  CVec fiber_sums(link.lower_size);
  const double inv_fiber = 1.0 / static_cast<double>(link.fiber_size);
  auto complement = [&](CVec& v) {
    std::fill(fiber_sums.begin(), fiber_sums.end(), Complex(0.0));
    for (std::uint32_t x = 0; x < link.upper_size; ++x) {
      fiber_sums[link.projection[x]] += v[x];
    }
    for (std::uint32_t x = 0; x < link.upper_size; ++x) {
      v[x] -= fiber_sums[link.projection[x]] * inv_fiber;
    }
  };
  CVec tmp(upper.size());
  auto apply = [&](const CVec& in, CVec& out) {
    tmp = in;
    complement(tmp);
    m.apply(tmp, out);
    complement(out);
  };
  auto apply_adjoint = [&](const CVec& in, CVec& out) {
    tmp = in;
    complement(tmp);
    m.apply_adjoint(tmp, out);
    complement(out);
  };
  return largest_singular_value(upper.size(), apply, apply_adjoint, opts);
}

namespace {

// Walk sequences realizing left multiplication by each support word (gather
// form: out[y] accumulates coeff * in[w^{-1} y]).
struct BallTerm {
  std::vector<Letter> walk;  // letters of w, inverted, in original order
  Complex coeff;
};

std::vector<BallTerm> gather_terms(const GroupAlgebraElement& a) {
  std::vector<BallTerm> terms;
  terms.reserve(a.terms().size());
  for (const auto& [w, c] : a.terms()) {
    BallTerm t;
    t.coeff = c;
    t.walk.reserve(w.letters().size());
    for (Letter l : w.letters()) t.walk.push_back(inverse_letter(l));
    terms.push_back(std::move(t));
  }
  return terms;
}

template <typename Scalar>
void apply_ball(const FreeBall& ball, const std::vector<BallTerm>& terms,
                const std::vector<Scalar>& in, std::vector<Scalar>& out,
                bool conj) {
  const std::int64_t n = ball.size();
  std::fill(out.begin(), out.end(), Scalar(0));
  for (const BallTerm& t : terms) {
    Scalar c;
    if constexpr (std::is_same_v<Scalar, double>) {
      c = t.coeff.real();
    } else {
      c = conj ? std::conj(t.coeff) : t.coeff;
    }
    if (t.walk.size() == 1) {
      const Letter l = t.walk[0];
      for (std::int64_t y = 0; y < n; ++y) {
        std::int64_t u = ball.move(y, l);
        if (u >= 0) out[y] += c * in[u];
      }
    } else {
      for (std::int64_t y = 0; y < n; ++y) {
        std::int64_t u = y;
        for (Letter l : t.walk) {
          u = ball.move(u, l);
          if (u < 0) break;
        }
        if (u >= 0) out[y] += c * in[u];
      }
    }
  }
}

// Top eigenvector of the tridiagonal radial reduction of the averaging
// operator on the ball; used as a warm start when the element is a uniform
// real combination of all the letters.
std::optional<CVec> radial_warm_start(const GroupAlgebraElement& a,
                                      const FreeBall& ball, int n_gens) {
  if (a.support_size() != 2 * n_gens) return std::nullopt;
  double coeff = 0;
  bool first = true;
  for (const auto& [w, c] : a.terms()) {
    if (w.length() != 1) return std::nullopt;
    if (c.imag() != 0.0 || c.real() <= 0.0) return std::nullopt;
    if (first) {
      coeff = c.real();
      first = false;
    } else if (c.real() != coeff) {
      return std::nullopt;
    }
  }
  const int R = ball.radius();
  const int dim = R + 1;
  // Off-diagonal r<->r+1 coupling of the normalized radial vectors:
  // coeff * sqrt(|S_{r+1}| / |S_r|) with the branching counts.
  std::vector<double> off(dim > 1 ? dim - 1 : 0);
  for (int r = 0; r + 1 < dim; ++r) {
    double sphere_ratio =
        static_cast<double>(ball.sphere_end(r + 1) - ball.sphere_begin(r + 1)) /
        static_cast<double>(ball.sphere_end(r) - ball.sphere_begin(r));
    off[r] = coeff * std::sqrt(sphere_ratio);
  }
  // Power iteration on (T + I)^2 for the tiny tridiagonal T.
  std::vector<double> v(dim, 1.0), w(dim);
  auto apply_t = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (int r = 0; r < dim; ++r) {
      double s = x[r];
      if (r > 0) s += off[r - 1] * x[r - 1];
      if (r + 1 < dim) s += off[r] * x[r + 1];
      y[r] = s;
    }
  };
  for (int it = 0; it < 20000; ++it) {
    apply_t(v, w);
    double n2 = 0;
    for (double x : w) n2 += x * x;
    n2 = std::sqrt(n2);
    if (n2 == 0) return std::nullopt;
    for (int r = 0; r < dim; ++r) w[r] /= n2;
    double delta = 0;
    for (int r = 0; r < dim; ++r) delta = std::max(delta, std::abs(w[r] - v[r]));
    v.swap(w);
    if (delta < 1e-15) break;
  }
  CVec start(ball.size());
  for (int r = 0; r < dim; ++r) {
    double sphere = static_cast<double>(ball.sphere_end(r) - ball.sphere_begin(r));
    Complex value(v[r] / std::sqrt(sphere));
    for (std::int64_t node = ball.sphere_begin(r); node < ball.sphere_end(r); ++node) {
      start[node] = value;
    }
  }
  return start;
}

}  // namespace

SpectralResult regular_norm(const GroupAlgebraElement& a, int R,
                            const PowerOptions& opts, std::uint64_t node_cap) {
  const int n_gens = std::max(2, a.max_generator() + 1);
  FreeBall ball(R, n_gens, node_cap);
  const std::int64_t n = ball.size();
  std::vector<BallTerm> terms = gather_terms(a);
  std::vector<BallTerm> adj_terms = gather_terms(a.adjoint());

  std::optional<CVec> warm = radial_warm_start(a, ball, n_gens);

  if (a.all_real()) {
    // Real elements act by real matrices; iterate on double vectors.
    std::vector<double> rin(n), rout(n);
    auto apply = [&](const CVec& in, CVec& out) {
      for (std::int64_t i = 0; i < n; ++i) rin[i] = in[i].real();
      apply_ball(ball, terms, rin, rout, false);
      out.resize(n);
      for (std::int64_t i = 0; i < n; ++i) out[i] = rout[i];
    };
    auto apply_adjoint = [&](const CVec& in, CVec& out) {
      for (std::int64_t i = 0; i < n; ++i) rin[i] = in[i].real();
      apply_ball(ball, adj_terms, rin, rout, false);
      out.resize(n);
      for (std::int64_t i = 0; i < n; ++i) out[i] = rout[i];
    };
    return largest_singular_value(n, apply, apply_adjoint, opts,
                                  warm ? &*warm : nullptr);
  }
  auto apply = [&](const CVec& in, CVec& out) {
    out.resize(n);
    apply_ball(ball, terms, in, out, false);
  };
  auto apply_adjoint = [&](const CVec& in, CVec& out) {
    out.resize(n);
    apply_ball(ball, adj_terms, in, out, false);
  };
  return largest_singular_value(n, apply, apply_adjoint, opts,
                                warm ? &*warm : nullptr);
}

}  // namespace towernorm
