#pragma once

#include <string>
#include <vector>

#include "qpb/evolution.hpp"
#include "qpb/lattice.hpp"

namespace qpb {

/// Outcome of one quantitative check.  pass <=> margin >= -abs_tol, where
/// margin is the smallest (bound - value) seen over everything checked.
struct BoundReport {
    std::string name;
    double threshold = 0.0;
    std::string worst;  // worst mode / time, empty when nothing sticks out
    double margin = 0.0;
    double abs_tol = 1e-12;
    bool pass = true;
};

BoundReport finalize_report(std::string name, double threshold,
                            std::string worst, double margin,
                            double abs_tol = 1e-12);

/// Local existence threshold kappa^nu / (32 B divisor^nu |omega|).  The
/// divisor 192 is the most conservative of the printed thresholds; 24, 48
/// and 96 appear in intermediate statements and stay selectable.
double existence_time(const DecayEnvelope& env, const FrequencySystem& fs,
                      int divisor = 192);

/// Uniqueness window min(t0, rho^nu / (C1 2^{nu+1} 288^nu |omega|)).
double uniqueness_time(double t0, double C1, double rho,
                       const FrequencySystem& fs);

/// Checks |c(n)| <= scale * B * exp(-kappa |n| / rate_divisor) over the whole
/// ball of the field (absent modes count as zero).
BoundReport check_envelope(const CoefficientField& field,
                           const DecayEnvelope& env, double scale = 2.0,
                           double rate_divisor = 4.0, double abs_tol = 1e-12);

/// Checks the step differences against the printed contraction bound
///   delta_k <= B^{k+1} (8e)^k 96^{k nu} (kappa^{-nu} |omega| t_end)^k
/// and the observed ratios against r = 8e 96^nu kappa^{-nu} |omega| t_end B.
BoundReport check_contraction(const PicardDiagnostics& diag,
                              const DecayEnvelope& env,
                              const FrequencySystem& fs, const TimeGrid& grid,
                              double abs_tol = 1e-12);

/// sup over shared nodes and modes of |a - b| against tol.
BoundReport uniqueness_compare(const TrajectoryField& a,
                               const TrajectoryField& b, double tol = 1e-6);

}  // namespace qpb
