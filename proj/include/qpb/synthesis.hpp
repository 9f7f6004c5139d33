#pragma once

#include <vector>

#include "qpb/bounds.hpp"
#include "qpb/evolution.hpp"
#include "qpb/lattice.hpp"

namespace qpb {

/// u(t, x) = sum_n c(n) exp(i x n.omega), stored modes in lexicographic order.
cplx evaluate_u(const CoefficientField& field, double x,
                const FrequencySystem& fs);

/// Spatial derivative: multiplies each mode by (i n.omega)^order, order 1..4.
CoefficientField derivative_field(const CoefficientField& field, int order,
                                  const FrequencySystem& fs);

/// Residual coefficients at interior node j (1 <= j <= J-1):
///   r(t_j, n) = D2 c + ((n.w)^4 + (n.w)^2) c(t_j, n) - A(t_j, n),
/// with D2 the second central difference.  A is dropped when
/// include_nonlinearity is false.
CoefficientField spectral_residual_field(const TrajectoryField& traj,
                                         const FrequencySystem& fs, int j,
                                         bool include_nonlinearity = true);

/// max over interior nodes and modes of |r|; per_node, when given, receives
/// the per-node maxima (index 1..J-1; endpoints are zero).  Requires J >= 4.
double max_spectral_residual(const TrajectoryField& traj,
                             const FrequencySystem& fs,
                             bool include_nonlinearity = true,
                             std::vector<double>* per_node = nullptr);

/// Window accepted as second-order convergence when the grid doubles.
inline constexpr double kResidualRatioLow = 3.5;
inline constexpr double kResidualRatioHigh = 4.5;

/// Richardson-style order check: the coarse/fine residual ratio must land in
/// [3.5, 4.5] when fine has twice the nodes of coarse.
BoundReport spectral_residual_order(const TrajectoryField& coarse,
                                    const TrajectoryField& fine,
                                    const FrequencySystem& fs);

}  // namespace qpb
