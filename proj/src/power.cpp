#include "towernorm/power.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace towernorm {

double norm2(const CVec& v) {
  double s = 0;
  for (const Complex& x : v) s += std::norm(x);
  return std::sqrt(s);
}

Complex dot(const CVec& u, const CVec& v) {
  Complex s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

void scale(CVec& v, double s) {
  for (Complex& x : v) x *= s;
}

CVec deterministic_seed(std::size_t dim) {
  CVec v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = 1.0 + 0.5 * (unit_double(splitmix64(i)) - 0.5);
  }
  return v;
}

CVec random_seed(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  CVec v(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    v[i] = Complex(unit_double(rng()) - 0.5, unit_double(rng()) - 0.5);
  }
  return v;
}

namespace {

struct RunOutcome {
  double value = 0;       // Rayleigh quotient of B at v
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};

// Power iteration on the PSD operator apply_b (+ optional projection).
RunOutcome run_psd_power(std::size_t dim,
                         const std::function<void(const CVec&, CVec&)>& apply_b,
                         const std::function<void(CVec&)>* project, CVec v,
                         double tol, int max_iter) {
  RunOutcome out;
  if (project) (*project)(v);
  double n = norm2(v);
  if (n == 0) return out;
  scale(v, 1.0 / n);
  CVec w(dim);
  for (int it = 1; it <= max_iter; ++it) {
    apply_b(v, w);
    if (project) (*project)(w);
    double mu = dot(v, w).real();
    double res = 0;
    for (std::size_t i = 0; i < dim; ++i) res += std::norm(w[i] - mu * v[i]);
    res = std::sqrt(res);
    out.value = mu;
    out.residual = res;
    out.iterations = it;
    if (res <= tol) {
      out.converged = true;
      return out;
    }
    double wn = norm2(w);
    if (wn == 0) return out;  // v is in the kernel; caller may restart
    v.swap(w);
    scale(v, 1.0 / wn);
  }
  return out;
}

}  // namespace

SpectralResult largest_singular_value(std::size_t dim, const ApplyFn& apply,
                                      const ApplyFn& apply_adjoint,
                                      const PowerOptions& opts,
                                      const CVec* warm_start) {
  CVec tmp(dim);
  auto apply_b = [&](const CVec& in, CVec& out) {
    apply(in, tmp);
    apply_adjoint(tmp, out);
  };
  SpectralResult best;
  best.tol = opts.tol;
  int total_iters = 0;
  for (int r = 0; r <= opts.restarts; ++r) {
    CVec start;
    if (r == 0 && warm_start) {
      start = *warm_start;
    } else if (r == 0) {
      start = deterministic_seed(dim);
    } else {
      start = random_seed(dim, splitmix64(opts.seed + r));
    }
    RunOutcome run = run_psd_power(dim, apply_b, nullptr, std::move(start),
                                   opts.tol, opts.max_iter);
    total_iters += run.iterations;
    bool better = (run.converged && !best.converged) ||
                  (run.converged == best.converged && run.value > best.value);
    if (better) {
      best.value = run.value;
      best.residual = run.residual;
      best.converged = run.converged;
    }
    // Restarts rescue kernel-trapped or stalled runs only.
    if (best.converged && best.value > 0) break;
  }
  best.iterations = total_iters;
  best.value = std::sqrt(std::max(0.0, best.value));
  return best;
}

SpectralResult largest_eigenvalue(std::size_t dim, const ApplyFn& apply_b,
                                  double shift, const PowerOptions& opts,
                                  const std::function<void(CVec&)>* project,
                                  const CVec* warm_start) {
  CVec tmp(dim);
  auto apply_shifted = [&](const CVec& in, CVec& out) {
    apply_b(in, out);
    for (std::size_t i = 0; i < dim; ++i) out[i] += shift * in[i];
  };
  SpectralResult best;
  best.tol = opts.tol;
  int total_iters = 0;
  for (int r = 0; r <= opts.restarts; ++r) {
    CVec start;
    if (r == 0 && warm_start) {
      start = *warm_start;
    } else if (r == 0) {
      start = deterministic_seed(dim);
    } else {
      start = random_seed(dim, splitmix64(opts.seed + r));
    }
    RunOutcome run = run_psd_power(dim, apply_shifted, project, std::move(start),
                                   opts.tol, opts.max_iter);
    total_iters += run.iterations;
    bool better = (run.converged && !best.converged) ||
                  (run.converged == best.converged && run.value > best.value);
    if (better) {
      best.value = run.value;
      best.residual = run.residual;
      best.converged = run.converged;
    }
    if (best.converged) break;
  }
  best.iterations = total_iters;
  best.value -= shift;
  return best;
}

}  // namespace towernorm
