#include "qpb/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qpb {

BoundReport finalize_report(std::string name, double threshold,
                            std::string worst, double margin, double abs_tol) {
    BoundReport r;
    r.name = std::move(name);
    r.threshold = threshold;
    r.worst = std::move(worst);
    r.margin = margin;
    r.abs_tol = abs_tol;
    r.pass = margin >= -abs_tol;
    return r;
}

double existence_time(const DecayEnvelope& env, const FrequencySystem& fs,
                      int divisor) {
    if (divisor < 1)
        throw std::invalid_argument("existence_time: divisor must be positive");
    const double nu = fs.dimension();
    return std::pow(env.kappa, nu) /
           (32.0 * env.B * std::pow(static_cast<double>(divisor), nu) *
            fs.omega_l1());
}

double uniqueness_time(double t0, double C1, double rho,
                       const FrequencySystem& fs) {
    if (!(C1 > 0.0) || !(rho > 0.0))
        throw std::invalid_argument("uniqueness_time: C1 and rho must be positive");
    const double nu = fs.dimension();
    const double second = std::pow(rho, nu) /
                          (C1 * std::pow(2.0, nu + 1.0) * std::pow(288.0, nu) *
                           fs.omega_l1());
    return std::min(t0, second);
}

BoundReport check_envelope(const CoefficientField& field,
                           const DecayEnvelope& env, double scale,
                           double rate_divisor, double abs_tol) {
    if (!(scale > 0.0) || !(rate_divisor > 0.0))
        throw std::invalid_argument("check_envelope: scale and divisor must be positive");
    double margin = std::numeric_limits<double>::infinity();
    std::string worst;
    for (const MultiIndex& n : ball(field.dimension(), field.radius())) {
        const double bound =
            scale * env.B * std::exp(-env.kappa * n.l1() / rate_divisor);
        const double m = bound - std::abs(field.at(n));
        if (m < margin) {
            margin = m;
            worst = n.to_string();
        }
    }
    return finalize_report("envelope", scale, worst, margin, abs_tol);
}

BoundReport check_contraction(const PicardDiagnostics& diag,
                              const DecayEnvelope& env,
                              const FrequencySystem& fs, const TimeGrid& grid,
                              double abs_tol) {
    const double nu = fs.dimension();
    const double rate = 8.0 * std::exp(1.0) * std::pow(96.0, nu) *
                        std::pow(env.kappa, -nu) * fs.omega_l1() *
                        grid.t_end() * env.B;
    double margin = 1.0 - rate;  // the certificate itself requires r < 1
    std::string worst = margin < 0.0 ? "ratio r >= 1" : "";

    // deltas[i] is |d_{k+1} - d_k| for k = i + 1.
    for (std::size_t i = 0; i < diag.deltas.size(); ++i) {
        const double k = static_cast<double>(i) + 1.0;
        const double bound =
            std::pow(env.B, k + 1.0) *
            std::pow(8.0 * std::exp(1.0) * std::pow(96.0, nu) *
                         std::pow(env.kappa, -nu) * fs.omega_l1() * grid.t_end(),
                     k);
        const double m = bound - diag.deltas[i];
        if (m < margin) {
            margin = m;
            worst = "delta_" + std::to_string(i + 1);
        }
    }

    // Ratios; skip once the differences sink into round-off.
    constexpr double floor = 1e-13;
    for (std::size_t i = 0; i + 1 < diag.deltas.size(); ++i) {
        if (diag.deltas[i] <= floor || diag.deltas[i + 1] <= floor) continue;
        const double m = rate - diag.deltas[i + 1] / diag.deltas[i];
        if (m < margin) {
            margin = m;
            worst = "ratio at step " + std::to_string(i + 1);
        }
    }
    return finalize_report("contraction", rate, worst, margin, abs_tol);
}

BoundReport uniqueness_compare(const TrajectoryField& a,
                               const TrajectoryField& b, double tol) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("uniqueness_compare: time grids differ");
    double worst_diff = 0.0;
    std::string worst;
    for (std::size_t j = 0; j < a.fields.size(); ++j) {
        const double d = sup_abs_diff(a.fields[j], b.fields[j]);
        if (d > worst_diff) {
            worst_diff = d;
            worst = "node " + std::to_string(j);
        }
    }
    return finalize_report("uniqueness", tol, worst, tol - worst_diff, 0.0);
}

}  // namespace qpb
