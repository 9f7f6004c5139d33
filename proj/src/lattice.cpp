#include "qpb/lattice.hpp"

#include <cmath>
#include <stdexcept>

namespace qpb {

namespace {

void extend_ball(std::vector<MultiIndex>& out, std::vector<int>& partial,
                 int nu, int budget) {
    if (static_cast<int>(partial.size()) == nu - 1) {
        for (int v = -budget; v <= budget; ++v) {
            partial.push_back(v);
            out.emplace_back(partial);
            partial.pop_back();
        }
        return;
    }
    for (int v = -budget; v <= budget; ++v) {
        partial.push_back(v);
        extend_ball(out, partial, nu, budget - std::abs(v));
        partial.pop_back();
    }
}

double lambda_of_dot(double x) { return std::abs(x) * std::sqrt(1.0 + x * x); }

}  // namespace

std::vector<MultiIndex> ball(int nu, int radius) {
    if (nu < 1) throw std::invalid_argument("ball: dimension must be >= 1");
    if (radius < 0) throw std::invalid_argument("ball: radius must be >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> partial;
    partial.reserve(nu);
    extend_ball(out, partial, nu, radius);
    return out;
}

FrequencySystem::FrequencySystem(std::vector<double> omega,
                                 int truncation_radius)
    : nu_(static_cast<int>(omega.size())),
      omega_(std::move(omega)),
      radius_(truncation_radius) {
    if (nu_ < 1)
        throw std::invalid_argument("FrequencySystem: empty frequency vector");
    if (radius_ < 1)
        throw std::invalid_argument("FrequencySystem: truncation radius must be >= 1");
    omega_l1_ = 0.0;
    for (double w : omega_) omega_l1_ += std::abs(w);
    if (!(omega_l1_ > 0.0))
        throw std::invalid_argument("FrequencySystem: |omega| must be positive");

    resonance_floor_ = 0.0;
    bool first = true;
    for (const MultiIndex& n : ball(nu_, 2 * radius_)) {
        if (n.is_zero()) continue;
        const double d = n.dot(omega_);
        if (d == 0.0)
            throw std::invalid_argument(
                "FrequencySystem: resonance n.omega = 0 at n = " + n.to_string());
        const double a = std::abs(d);
        if (first || a < resonance_floor_) {
            resonance_floor_ = a;
            first = false;
        }
    }

    modes_ = ball(nu_, radius_);
    lambda_max_ = 0.0;
    for (const MultiIndex& n : modes_)
        lambda_max_ = std::max(lambda_max_, lambda_of_dot(n.dot(omega_)));
}

DecayEnvelope::DecayEnvelope(double B_, double kappa_) : B(B_), kappa(kappa_) {
    if (!(B > 0.0)) throw std::invalid_argument("DecayEnvelope: B must be > 0");
    if (!(kappa > 0.0) || kappa > 1.0)
        throw std::invalid_argument("DecayEnvelope: kappa must lie in (0,1]");
}

CoefficientField::CoefficientField(int nu, int radius)
    : nu_(nu), radius_(radius) {
    if (nu_ < 1)
        throw std::invalid_argument("CoefficientField: dimension must be >= 1");
    if (radius_ < 0)
        throw std::invalid_argument("CoefficientField: radius must be >= 0");
}

void CoefficientField::check_key(const MultiIndex& n) const {
    if (n.dimension() != nu_)
        throw std::invalid_argument("CoefficientField: dimension mismatch at " +
                                    n.to_string());
    if (n.l1() > radius_)
        throw std::out_of_range("CoefficientField: |n| exceeds radius at " +
                                n.to_string());
}

void CoefficientField::set(const MultiIndex& n, cplx value) {
    check_key(n);
    if (value == cplx{0.0, 0.0}) {
        entries_.erase(n);
        return;
    }
    entries_[n] = value;
}

void CoefficientField::accumulate(const MultiIndex& n, cplx delta) {
    check_key(n);
    entries_[n] += delta;
}

cplx CoefficientField::at(const MultiIndex& n) const {
    auto it = entries_.find(n);
    return it == entries_.end() ? cplx{0.0, 0.0} : it->second;
}

double sup_abs(const CoefficientField& c) {
    double s = 0.0;
    for (const auto& [n, v] : c.entries()) s = std::max(s, std::abs(v));
    return s;
}

double sup_abs_diff(const CoefficientField& a, const CoefficientField& b) {
    double s = 0.0;
    for (const auto& [n, v] : a.entries()) s = std::max(s, std::abs(v - b.at(n)));
    for (const auto& [n, v] : b.entries()) s = std::max(s, std::abs(a.at(n) - v));
    return s;
}

namespace {

// Shared pair loop: for every stored (m1, m2) with |m1+m2| <= N accumulate
// weight(m1) * c(m1) * c(m2) into the output mode m1+m2.  The outer loop runs
// over m1 in map (lexicographic) order, which fixes the floating-point
// summation order per output mode.
template <typename Weight>
CoefficientField pair_sum(const CoefficientField& c, const FrequencySystem& fs,
                          Weight weight) {
    if (c.dimension() != fs.dimension())
        throw std::invalid_argument("convolution: dimension mismatch");
    if (c.radius() > fs.truncation_radius())
        throw std::invalid_argument("convolution: field radius exceeds lattice ball");
    CoefficientField out(fs.dimension(), fs.truncation_radius());
    const int N = fs.truncation_radius();
    for (const auto& [m1, a1] : c.entries()) {
        const cplx w1 = weight(m1) * a1;
        for (const auto& [m2, a2] : c.entries()) {
            MultiIndex n = m1 + m2;
            if (n.l1() > N) continue;
            out.accumulate(n, w1 * a2);
        }
    }
    return out;
}

}  // namespace

CoefficientField weighted_self_convolution(const CoefficientField& c,
                                           const FrequencySystem& fs) {
    CoefficientField inner = pair_sum(
        c, fs, [&fs](const MultiIndex& m) { return cplx{fs.dot(m), 0.0}; });
    CoefficientField out(fs.dimension(), fs.truncation_radius());
    for (const auto& [n, v] : inner.entries())
        out.set(n, -2.0 * fs.dot(n) * v);
    return out;
}

CoefficientField self_convolution(const CoefficientField& c,
                                  const FrequencySystem& fs) {
    return pair_sum(c, fs, [](const MultiIndex&) { return cplx{1.0, 0.0}; });
}

}  // namespace qpb
