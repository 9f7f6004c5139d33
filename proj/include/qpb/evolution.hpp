#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qpb/lattice.hpp"

namespace qpb {

/// Uniform grid t_j = j * t_end / J on [0, t_end].  J must be even and >= 2
/// so composite Simpson weights exist on every even prefix.
class TimeGrid {
  public:
    TimeGrid(double t_end, int intervals);

    double t_end() const { return t_end_; }
    int intervals() const { return intervals_; }
    double spacing() const { return t_end_ / intervals_; }
    double node(int j) const { return j * t_end_ / intervals_; }

    bool operator==(const TimeGrid&) const = default;

  private:
    double t_end_;
    int intervals_;
};

/// One coefficient field per grid node; snapshots of an iterate or solution.
struct TrajectoryField {
    TimeGrid grid;
    std::vector<CoefficientField> fields;  // J + 1 snapshots

    const CoefficientField& at_node(int j) const { return fields.at(j); }
};

/// sup over nodes and modes of |a - b|; the grids must match.
double sup_distance(const TrajectoryField& a, const TrajectoryField& b);

struct PicardDiagnostics {
    std::vector<double> deltas;  // sup-norm difference per Picard step
    int iterations = 0;          // number of Picard steps applied
    bool converged = false;
};

struct PicardOptions {
    double tol = 1e-10;
    int kmax = 20;  // max iterates counting the linear flow as the first
    /// When set, t_end must not exceed the existence time of this envelope
    /// unless allow_beyond_existence_time is also set.
    std::optional<DecayEnvelope> envelope;
    bool allow_beyond_existence_time = false;
    bool keep_history = false;
};

struct PicardResult {
    TrajectoryField trajectory;
    PicardDiagnostics diagnostics;
    std::vector<TrajectoryField> iterates;  // filled when keep_history is set
};

/// Dispersion frequency lambda(n) = sqrt((n.w)^2 + (n.w)^4) = |n.w| sqrt(1+(n.w)^2).
double dispersion_lambda(const MultiIndex& n, const FrequencySystem& fs);
double dispersion_lambda_of(double n_dot_omega);

/// Linear flow of the mode oscillators:
///   c(n) cos(lambda t) + c'(n) sin(lambda t) / lambda,
/// with sin(lambda t)/lambda -> t at lambda = 0.
CoefficientField linear_flow(const CoefficientField& c0,
                             const CoefficientField& c0p, double t,
                             const FrequencySystem& fs);

TrajectoryField linear_flow_trajectory(const CoefficientField& c0,
                                       const CoefficientField& c0p,
                                       const TimeGrid& grid,
                                       const FrequencySystem& fs);

/// One Picard update: linear flow plus the Duhamel term
///   -i (n.w)^2 / (2 lambda) * int_0^t (e^{i l (tau-t)} - e^{i l (t-tau)})
///        sum_{m1+m2=n} prev(tau,m1) prev(tau,m2) dtau,
/// quadratured on the stored nodes with composite Simpson (3/8 tail on odd
/// prefixes so every node keeps fourth order).  Throws when
/// h * lambda_max > pi/4: the oscillatory kernel would be under-resolved.
TrajectoryField picard_step(const TrajectoryField& prev,
                            const CoefficientField& c0,
                            const CoefficientField& c0p,
                            const FrequencySystem& fs);

/// Iterates picard_step from the linear flow until the sup-norm step
/// difference drops below tol or kmax iterates have been produced.
PicardResult picard_solve(const CoefficientField& c0,
                          const CoefficientField& c0p, const TimeGrid& grid,
                          const FrequencySystem& fs,
                          const PicardOptions& options = {});

struct OdeReferenceOptions {
    int substeps = 1;
    bool include_nonlinearity = true;
};

/// Classical RK4 on the coupled mode system
///   dc/dt = v,   dv/dt = A(c)(n) - ((n.w)^4 + (n.w)^2) c(n),
/// with A recomputed from the current field at every stage.  Fixed step
/// h / substeps; snapshots are taken at the grid nodes.
TrajectoryField ode_reference_solve(const CoefficientField& c0,
                                    const CoefficientField& c0p,
                                    const TimeGrid& grid,
                                    const FrequencySystem& fs,
                                    const OdeReferenceOptions& options = {});

/// One-sided second-order difference (-3 f0 + 4 f1 - f2) / (2h) per mode.
CoefficientField time_derivative_at_zero(const TrajectoryField& traj);

}  // namespace qpb
