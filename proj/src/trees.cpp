#include "qpb/trees.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qpb {

TreeLabel TreeLabel::leaf(int tag) {
    if (tag != 0 && tag != 1)
        throw std::invalid_argument("TreeLabel: leaf tag must be 0 or 1");
    auto n = std::make_shared<Node>();
    n->tag = tag;
    return TreeLabel(std::move(n));
}

TreeLabel TreeLabel::node(const TreeLabel& left, const TreeLabel& right) {
    auto n = std::make_shared<Node>();
    n->l = left.n_;
    n->r = right.n_;
    return TreeLabel(std::move(n));
}

int TreeLabel::tag() const {
    if (!is_leaf()) throw std::logic_error("TreeLabel: tag() on a node");
    return n_->tag;
}

TreeLabel TreeLabel::left() const {
    if (is_leaf()) throw std::logic_error("TreeLabel: left() on a leaf");
    return TreeLabel(n_->l);
}

TreeLabel TreeLabel::right() const {
    if (is_leaf()) throw std::logic_error("TreeLabel: right() on a leaf");
    return TreeLabel(n_->r);
}

int TreeLabel::level() const {
    if (is_leaf()) return 1;
    return 1 + std::max(left().level(), right().level());
}

std::string TreeLabel::to_string() const {
    if (is_leaf()) return std::to_string(tag());
    return "(" + left().to_string() + "," + right().to_string() + ")";
}

int TreeLabel::compare(const Node& a, const Node& b) {
    const bool la = a.tag >= 0, lb = b.tag >= 0;
    if (la != lb) return la ? -1 : 1;  // leaves order before nodes
    if (la) return a.tag - b.tag;
    if (int c = compare(*a.l, *b.l); c != 0) return c;
    return compare(*a.r, *b.r);
}

bool TreeLabel::operator==(const TreeLabel& other) const {
    return compare(*n_, *other.n_) == 0;
}

bool TreeLabel::operator<(const TreeLabel& other) const {
    return compare(*n_, *other.n_) < 0;
}

std::vector<TreeLabel> enumerate_labels(int k) {
    if (k < 1 || k > 4)
        throw std::invalid_argument("enumerate_labels: k must lie in 1..4");
    std::vector<TreeLabel> out{TreeLabel::leaf(0), TreeLabel::leaf(1)};
    if (k == 1) return out;
    const std::vector<TreeLabel> prev = enumerate_labels(k - 1);
    out.reserve(2 + prev.size() * prev.size());
    for (const TreeLabel& a : prev)
        for (const TreeLabel& b : prev) out.push_back(TreeLabel::node(a, b));
    return out;
}

Weights weights(const TreeLabel& label) {
    if (label.is_leaf()) return Weights{1, 0, label.tag(), 1};
    const Weights wl = weights(label.left());
    const Weights wr = weights(label.right());
    Weights w;
    w.sigma = wl.sigma + wr.sigma;
    w.ell = wl.ell + wr.ell + 1;
    w.hbar = wl.hbar + wr.hbar;
    w.frak_f = static_cast<std::int64_t>(w.ell) * wl.frak_f * wr.frak_f;
    return w;
}

std::vector<Composition> alpha_set(const TreeLabel& label) {
    if (weights(label).sigma > 12)
        throw std::invalid_argument("alpha_set: sigma(gamma) > 12");
    if (label.is_leaf()) return {Composition{0}};
    const std::vector<Composition> left = alpha_set(label.left());
    const std::vector<Composition> right = alpha_set(label.right());
    std::set<Composition> out;
    for (const Composition& a : left)
        for (const Composition& b : right) {
            Composition base = a;
            base.insert(base.end(), b.begin(), b.end());
            for (std::size_t i = 0; i < base.size(); ++i) {
                Composition c = base;
                ++c[i];
                out.insert(std::move(c));
            }
        }
    return {out.begin(), out.end()};
}

namespace {

// mu of the subtree rooted at label, consuming leaves left to right.
MultiIndex subtree_sum(const TreeLabel& label,
                       std::span<const MultiIndex> leaves, std::size_t& pos) {
    if (label.is_leaf()) return leaves[pos++];
    MultiIndex l = subtree_sum(label.left(), leaves, pos);
    MultiIndex r = subtree_sum(label.right(), leaves, pos);
    return l + r;
}

std::int64_t majorant_rec(const TreeLabel& label,
                          std::span<const MultiIndex> leaves,
                          std::size_t& pos) {
    if (label.is_leaf()) {
        ++pos;
        return 1;
    }
    std::size_t probe = pos;
    const MultiIndex mu = subtree_sum(label, leaves, probe);
    const std::int64_t pl = majorant_rec(label.left(), leaves, pos);
    const std::int64_t pr = majorant_rec(label.right(), leaves, pos);
    return static_cast<std::int64_t>(mu.l1()) * pl * pr;
}

std::int64_t ipow(std::int64_t base, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

const std::int64_t kFactorial[13] = {
    1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800,
    479001600};

}  // namespace

std::int64_t majorant(const TreeLabel& label,
                      std::span<const MultiIndex> leaves) {
    const Weights w = weights(label);
    if (static_cast<std::size_t>(w.sigma) != leaves.size())
        throw std::invalid_argument("majorant: assignment length != sigma(gamma)");
    std::size_t pos = 0;
    return majorant_rec(label, leaves, pos);
}

std::vector<Composition> alpha_multiset(const TreeLabel& label) {
    if (weights(label).sigma > 12)
        throw std::invalid_argument("alpha_multiset: sigma(gamma) > 12");
    if (label.is_leaf()) return {Composition{0}};
    const std::vector<Composition> left = alpha_multiset(label.left());
    const std::vector<Composition> right = alpha_multiset(label.right());
    std::vector<Composition> out;
    for (const Composition& a : left)
        for (const Composition& b : right) {
            Composition base = a;
            base.insert(base.end(), b.begin(), b.end());
            for (std::size_t i = 0; i < base.size(); ++i) {
                Composition c = base;
                ++c[i];
                out.push_back(std::move(c));
            }
        }
    return out;
}

bool check_majorant_bound(const TreeLabel& label,
                          std::span<const MultiIndex> leaves) {
    const Weights w = weights(label);
    if (w.sigma > 6)
        throw std::invalid_argument("check_majorant_bound: sigma(gamma) > 6");
    const std::int64_t lhs = majorant(label, leaves);
    std::int64_t rhs = 0;
    for (const Composition& alpha : alpha_multiset(label)) {
        std::int64_t term = 1;
        for (std::size_t i = 0; i < alpha.size(); ++i)
            term *= ipow(leaves[i].l1(), alpha[i]);
        rhs += term;
    }
    return lhs <= rhs;
}

double lattice_exp_sum(double kappa, int nu) {
    if (!(kappa > 0.0) || kappa > 1.0)
        throw std::invalid_argument("lattice_exp_sum: kappa must lie in (0,1]");
    if (nu < 1) throw std::invalid_argument("lattice_exp_sum: nu must be >= 1");
    const double e = std::exp(-kappa / 4.0);
    const double one_dim = 1.0 + 2.0 * e / (1.0 - e);
    const double value = std::pow(one_dim, nu);
    const double bound = std::pow(24.0 / kappa, nu);
    if (value > bound)
        throw std::logic_error("lattice_exp_sum: geometric sum exceeds (24/kappa)^nu");
    return value;
}

namespace {

// Unlabeled tree shapes at level k: tags do not enter the weighted sum, so the
// enumeration collapses the 0/1 leaf labelings.
std::vector<TreeLabel> enumerate_shapes(int k) {
    std::vector<TreeLabel> out{TreeLabel::leaf(0)};
    if (k == 1) return out;
    const std::vector<TreeLabel> prev = enumerate_shapes(k - 1);
    for (const TreeLabel& a : prev)
        for (const TreeLabel& b : prev) out.push_back(TreeLabel::node(a, b));
    return out;
}

// Canonical representative of alpha under the automorphisms of the shape:
// children of a node with identical subtree shapes may swap their blocks.
Composition canonical_alpha(const TreeLabel& shape,
                            std::span<const int> alpha) {
    if (shape.is_leaf()) return Composition{alpha[0]};
    const int nl = weights(shape.left()).sigma;
    Composition c1 = canonical_alpha(shape.left(), alpha.subspan(0, nl));
    Composition c2 = canonical_alpha(shape.right(), alpha.subspan(nl));
    if (shape.left() == shape.right() && c2 < c1) std::swap(c1, c2);
    c1.insert(c1.end(), c2.begin(), c2.end());
    return c1;
}

}  // namespace

Rational weighted_tree_sum(int k, const Rational& t) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("weighted_tree_sum: k must lie in 1..3");
    if (!(t > Rational(0)) || t > Rational(1, 16))
        throw std::invalid_argument("weighted_tree_sum: t must lie in (0, 1/16]");
    Rational total(0);
    for (const TreeLabel& shape : enumerate_shapes(k)) {
        const Weights w = weights(shape);
        std::set<Composition> orbit_reps;
        std::int64_t factorial_sum = 0;
        for (const Composition& alpha : alpha_set(shape)) {
            Composition canon = canonical_alpha(shape, alpha);
            if (!orbit_reps.insert(std::move(canon)).second) continue;
            std::int64_t prod = 1;
            for (int a : alpha) prod *= kFactorial[a];
            factorial_sum += prod;
        }
        total = total + (Rational(2) * t).pow(w.ell) / Rational(w.frak_f) *
                            Rational(factorial_sum);
    }
    return total;
}

namespace {

void composition_sum(int slots, int remaining, std::uint64_t partial,
                     std::uint64_t& total) {
    if (slots == 1) {
        total += partial * static_cast<std::uint64_t>(kFactorial[remaining]);
        return;
    }
    for (int a = 0; a <= remaining; ++a)
        composition_sum(slots - 1, remaining - a,
                        partial * static_cast<std::uint64_t>(kFactorial[a]),
                        total);
}

}  // namespace

std::uint64_t factorial_comp_bound(int N, int l) {
    std::uint64_t b = 1;
    for (int i = 0; i < l; ++i) b *= static_cast<std::uint64_t>(2 * N);
    return b;
}

std::uint64_t factorial_comp_sum(int N, int l) {
    if (l < 1 || N < l || N > 8)
        throw std::invalid_argument("factorial_comp_sum: need 1 <= l <= N <= 8");
    std::uint64_t total = 0;
    composition_sum(N, l, 1, total);
    if (total >= factorial_comp_bound(N, l))
        throw std::logic_error("factorial_comp_sum: bound (2N)^l violated");
    return total;
}

}  // namespace qpb
