#include "qpb/synthesis.hpp"

#include <cmath>
#include <stdexcept>

namespace qpb {

cplx evaluate_u(const CoefficientField& field, double x,
                const FrequencySystem& fs) {
    cplx u{0.0, 0.0};
    for (const auto& [n, c] : field.entries())
        u += c * std::exp(cplx{0.0, x * fs.dot(n)});
    return u;
}

CoefficientField derivative_field(const CoefficientField& field, int order,
                                  const FrequencySystem& fs) {
    if (order < 1 || order > 4)
        throw std::invalid_argument("derivative_field: order must lie in 1..4");
    CoefficientField out(field.dimension(), field.radius());
    for (const auto& [n, c] : field.entries()) {
        const double d = fs.dot(n);
        cplx factor;
        switch (order) {
            case 1: factor = {0.0, d}; break;
            case 2: factor = {-d * d, 0.0}; break;
            case 3: factor = {0.0, -d * d * d}; break;
            default: factor = {d * d * d * d, 0.0}; break;
        }
        out.set(n, factor * c);
    }
    return out;
}

CoefficientField spectral_residual_field(const TrajectoryField& traj,
                                         const FrequencySystem& fs, int j,
                                         bool include_nonlinearity) {
    const int J = traj.grid.intervals();
    if (j < 1 || j >= J)
        throw std::invalid_argument("spectral_residual_field: interior nodes only");
    const double h = traj.grid.spacing();
    const CoefficientField& prev = traj.fields[j - 1];
    const CoefficientField& cur = traj.fields[j];
    const CoefficientField& next = traj.fields[j + 1];
    CoefficientField forcing(fs.dimension(), fs.truncation_radius());
    if (include_nonlinearity) forcing = weighted_self_convolution(cur, fs);

    CoefficientField out(fs.dimension(), fs.truncation_radius());
    for (const MultiIndex& n : fs.modes()) {
        const double d = fs.dot(n);
        const double lambda2 = d * d + d * d * d * d;
        const cplx second_diff =
            (next.at(n) - 2.0 * cur.at(n) + prev.at(n)) / (h * h);
        out.set(n, second_diff + lambda2 * cur.at(n) - forcing.at(n));
    }
    return out;
}

double max_spectral_residual(const TrajectoryField& traj,
                             const FrequencySystem& fs,
                             bool include_nonlinearity,
                             std::vector<double>* per_node) {
    const int J = traj.grid.intervals();
    if (J < 4)
        throw std::invalid_argument("max_spectral_residual: grid too coarse, need J >= 4");
    if (per_node) per_node->assign(J + 1, 0.0);
    double worst = 0.0;
    for (int j = 1; j < J; ++j) {
        const CoefficientField r =
            spectral_residual_field(traj, fs, j, include_nonlinearity);
        const double m = sup_abs(r);
        if (per_node) (*per_node)[j] = m;
        worst = std::max(worst, m);
    }
    return worst;
}

BoundReport spectral_residual_order(const TrajectoryField& coarse,
                                    const TrajectoryField& fine,
                                    const FrequencySystem& fs) {
    if (fine.grid.intervals() != 2 * coarse.grid.intervals() ||
        fine.grid.t_end() != coarse.grid.t_end())
        throw std::invalid_argument(
            "spectral_residual_order: fine grid must halve the coarse spacing");
    const double r_coarse = max_spectral_residual(coarse, fs);
    const double r_fine = max_spectral_residual(fine, fs);
    const double ratio = r_fine > 0.0 ? r_coarse / r_fine : 0.0;
    const double margin =
        std::min(ratio - kResidualRatioLow, kResidualRatioHigh - ratio);
    return finalize_report("residual-order", kResidualRatioLow,
                           "ratio " + std::to_string(ratio), margin, 0.0);
}

}  // namespace qpb
