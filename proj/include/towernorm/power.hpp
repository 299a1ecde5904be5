#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "towernorm/util.hpp"

namespace towernorm {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

struct PowerOptions {
  double tol = 1e-9;      // absolute residual target
  int max_iter = 200000;  // per run
  int restarts = 2;       // extra seeded random starts
  std::uint64_t seed = 1;
};

// value is a certified lower bound: it is a Rayleigh quotient of the actual
// operator, and `residual` is the norm of the eigen-equation defect at the
// returned vector.
struct SpectralResult {
  double value = 0;
  double residual = 0;
  int iterations = 0;
  double tol = 0;
  bool converged = false;
};

// 1 + small index-dependent offsets; the default start everywhere.
CVec deterministic_seed(std::size_t dim);
CVec random_seed(std::size_t dim, std::uint64_t seed);

using ApplyFn = std::function<void(const CVec&, CVec&)>;

// Largest singular value of A via power iteration on A*A.  Residual is
// ||A*A v - value^2 v||.
SpectralResult largest_singular_value(std::size_t dim, const ApplyFn& apply,
                                      const ApplyFn& apply_adjoint,
                                      const PowerOptions& opts,
                                      const CVec* warm_start = nullptr);

// Largest eigenvalue of a self-adjoint operator B with spectrum contained in
// [-shift, inf) via power iteration on B + shift.  If `project` is given it
// is applied to every iterate (B must commute with it); the result is then
// the largest eigenvalue on the projected subspace.  Residual is
// ||B v - value v||.
SpectralResult largest_eigenvalue(std::size_t dim, const ApplyFn& apply_b,
                                  double shift, const PowerOptions& opts,
                                  const std::function<void(CVec&)>* project = nullptr,
                                  const CVec* warm_start = nullptr);

double norm2(const CVec& v);
Complex dot(const CVec& u, const CVec& v);  // conjugate-linear in u
void scale(CVec& v, double s);

}  // namespace towernorm
