#pragma once

#include "qpb/lattice.hpp"
#include "qpb/trees.hpp"

namespace qpb {

/// Evaluates the explicit tree-indexed expansion of the k-th iterate at one
/// mode and time:
///   d_k(t, n) = sum over level-k labels, sum over leaf assignments with mu = n of
///                   C(m) f(m) I(t, m),
/// where C multiplies c(m) / c'(m) per leaf tag, f contributes
/// -i (mu.w)^2 / (2 lambda_mu) per internal node and I is the nested
/// oscillatory integral, quadratured with adaptive Gauss-Legendre panels
/// (8 points, bisection down to quad_depth, 1e-9 per level).
///
/// Assignments are restricted so every subtree sum stays inside the
/// truncation ball, mirroring the Galerkin projection applied by the
/// convolution at every iteration step.  Guarded to k <= 3, nu = 1, N <= 3.
cplx tree_expand_evaluate(int k, const MultiIndex& n, double t,
                          const CoefficientField& c0,
                          const CoefficientField& c0p,
                          const FrequencySystem& fs, int quad_depth = 12);

}  // namespace qpb
