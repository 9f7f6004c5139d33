#pragma once

#include <complex>
#include <map>
#include <span>
#include <vector>

#include "qpb/multi_index.hpp"

namespace qpb {

using cplx = std::complex<double>;

/// Frequency vector omega in R^nu together with the truncation radius N of
/// the Galerkin ball |n| <= N.  Construction enumerates 0 < |n| <= 2N and
/// rejects frequency vectors with an exact resonance n.omega = 0; the
/// smallest |n.omega| seen is kept as the resonance floor.
class FrequencySystem {
  public:
    FrequencySystem(std::vector<double> omega, int truncation_radius);

    int dimension() const { return nu_; }
    int truncation_radius() const { return radius_; }
    std::span<const double> omega() const { return omega_; }

    /// l1 norm |omega|.
    double omega_l1() const { return omega_l1_; }

    /// min over 0 < |n| <= 2N of |n.omega|.
    double resonance_floor() const { return resonance_floor_; }

    double dot(const MultiIndex& n) const { return n.dot(omega_); }

    /// Cached lexicographic enumeration of |n| <= N.
    const std::vector<MultiIndex>& modes() const { return modes_; }

    /// max over the ball of the dispersion frequency lambda(n).
    double lambda_max() const { return lambda_max_; }

  private:
    int nu_;
    std::vector<double> omega_;
    int radius_;
    double omega_l1_;
    double resonance_floor_;
    double lambda_max_;
    std::vector<MultiIndex> modes_;
};

/// Exponential decay envelope |c(n)| <= B exp(-kappa |n| / 2).
struct DecayEnvelope {
    double B;
    double kappa;

    DecayEnvelope(double B_, double kappa_);
};

/// Sparse snapshot of Fourier coefficients {c(n)} on the ball |n| <= radius.
/// Absent keys are amplitude exactly zero.  Map iteration gives the
/// canonical lexicographic order.
class CoefficientField {
  public:
    CoefficientField(int nu, int radius);

    int dimension() const { return nu_; }
    int radius() const { return radius_; }

    /// Stores c(n) = value; erases the key when value is exactly zero.
    void set(const MultiIndex& n, cplx value);

    /// Adds delta to c(n).
    void accumulate(const MultiIndex& n, cplx delta);

    cplx at(const MultiIndex& n) const;

    const std::map<MultiIndex, cplx>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

  private:
    void check_key(const MultiIndex& n) const;

    int nu_;
    int radius_;
    std::map<MultiIndex, cplx> entries_;
};

/// sup_n |c(n)|.
double sup_abs(const CoefficientField& c);

/// sup_n |a(n) - b(n)| over the union of supports.
double sup_abs_diff(const CoefficientField& a, const CoefficientField& b);

/// Fourier coefficients of the nonlinearity (u^2)_xx:
///   A(n) = -2 (n.omega) sum_{m1+m2=n} (m1.omega) c(m1) c(m2),
/// with m1, m2 restricted to |.| <= c.radius and the output truncated to the
/// ball |n| <= fs.N.  The inner sum runs over m1 in lexicographic order.
CoefficientField weighted_self_convolution(const CoefficientField& c,
                                           const FrequencySystem& fs);

/// Plain self-convolution sum_{m1+m2=n} c(m1) c(m2), truncated to |n| <= N.
CoefficientField self_convolution(const CoefficientField& c,
                                  const FrequencySystem& fs);

}  // namespace qpb
