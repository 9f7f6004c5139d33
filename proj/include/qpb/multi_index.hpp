#pragma once

#include <compare>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

namespace qpb {

/// Lattice multi-index n = (n_1,...,n_nu) in Z^nu.  Ordering is plain
/// lexicographic on the components; that order is the canonical iteration
/// order for every summation in the library.
struct MultiIndex {
    std::vector<int> comp;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> c) : comp(std::move(c)) {}

    int dimension() const { return static_cast<int>(comp.size()); }

    /// l1 norm |n| = sum_j |n_j|.
    int l1() const {
        int s = 0;
        for (int v : comp) s += std::abs(v);
        return s;
    }

    bool is_zero() const {
        for (int v : comp)
            if (v != 0) return false;
        return true;
    }

    /// True when the first nonzero component is positive (or n = 0).
    bool lex_nonnegative() const {
        for (int v : comp) {
            if (v > 0) return true;
            if (v < 0) return false;
        }
        return true;
    }

    double dot(std::span<const double> omega) const {
        double s = 0.0;
        for (std::size_t j = 0; j < comp.size(); ++j) s += comp[j] * omega[j];
        return s;
    }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r = a;
        for (std::size_t j = 0; j < r.comp.size(); ++j) r.comp[j] += b.comp[j];
        return r;
    }
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r = a;
        for (std::size_t j = 0; j < r.comp.size(); ++j) r.comp[j] -= b.comp[j];
        return r;
    }
    MultiIndex operator-() const {
        MultiIndex r = *this;
        for (int& v : r.comp) v = -v;
        return r;
    }

    auto operator<=>(const MultiIndex&) const = default;

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t j = 0; j < comp.size(); ++j) {
            if (j) s += ',';
            s += std::to_string(comp[j]);
        }
        s += ')';
        return s;
    }
};

/// l1 norm as a free function, matching the lattice vocabulary.
inline int l1_norm(const MultiIndex& n) { return n.l1(); }

/// All n in Z^nu with |n| <= radius, in lexicographic order.
std::vector<MultiIndex> ball(int nu, int radius);

}  // namespace qpb
