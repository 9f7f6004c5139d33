#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>

namespace qpb {

/// Adaptive Gauss-Legendre quadrature for complex integrands on [a, b]:
/// each panel is accepted when the 8-point value agrees with its two halves
/// to tol, bisecting down to max_depth otherwise.
namespace quad {

inline constexpr std::array<double, 4> gl8_nodes = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
    0.9602898564975363};
inline constexpr std::array<double, 4> gl8_weights = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};

template <typename F>
std::complex<double> gl8(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::complex<double> s{0.0, 0.0};
    for (int i = 0; i < 4; ++i) {
        const double dx = half * gl8_nodes[i];
        s += gl8_weights[i] * (f(mid - dx) + f(mid + dx));
    }
    return half * s;
}

template <typename F>
std::complex<double> adaptive_panel(const F& f, double a, double b,
                                    std::complex<double> whole, double tol,
                                    int depth) {
    const double mid = 0.5 * (a + b);
    const std::complex<double> left = gl8(f, a, mid);
    const std::complex<double> right = gl8(f, mid, b);
    if (depth <= 0 || std::abs(left + right - whole) <= tol)
        return left + right;
    return adaptive_panel(f, a, mid, left, 0.5 * tol, depth - 1) +
           adaptive_panel(f, mid, b, right, 0.5 * tol, depth - 1);
}

template <typename F>
std::complex<double> integrate(const F& f, double a, double b,
                               double tol = 1e-9, int max_depth = 12) {
    if (a == b) return {0.0, 0.0};
    return adaptive_panel(f, a, b, gl8(f, a, b), tol, max_depth);
}

}  // namespace quad

}  // namespace qpb
