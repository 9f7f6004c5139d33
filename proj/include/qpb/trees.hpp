#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qpb/multi_index.hpp"
#include "qpb/rational.hpp"

namespace qpb {

/// Finite binary tree with 0/1 leaves: one term label of the iterate
/// expansion.  Leaves tag initial-position (0) versus initial-velocity (1)
/// factors; a node stands for one Duhamel integral.  Values are immutable
/// and cheap to copy.
class TreeLabel {
  public:
    static TreeLabel leaf(int tag);
    static TreeLabel node(const TreeLabel& left, const TreeLabel& right);

    bool is_leaf() const { return n_->tag >= 0; }
    int tag() const;
    TreeLabel left() const;
    TreeLabel right() const;

    /// Smallest level the label belongs to: 1 for leaves, else
    /// 1 + max(level(left), level(right)).
    int level() const;

    std::string to_string() const;

    bool operator==(const TreeLabel& other) const;
    bool operator<(const TreeLabel& other) const;

  private:
    struct Node {
        int tag = -1;  // >= 0 for leaves
        std::shared_ptr<const Node> l, r;
    };
    explicit TreeLabel(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    static int compare(const Node& a, const Node& b);

    std::shared_ptr<const Node> n_;
};

/// The level-k label family in deterministic order: the two leaves followed
/// by all ordered pairs of level-(k-1) labels.  Supported for 1 <= k <= 4;
/// level 5 has 1446^2 + 2 members and is out of desk scale.
std::vector<TreeLabel> enumerate_labels(int k);

/// sigma = leaf count, ell = integral depth count, hbar = count of 1-leaves,
/// frak_f = the iterated-integral denominator product.
struct Weights {
    int sigma = 0;
    int ell = 0;
    int hbar = 0;
    std::int64_t frak_f = 1;
};

Weights weights(const TreeLabel& label);

using Composition = std::vector<int>;

/// The composition set A^(k,gamma): length sigma(gamma) nonnegative vectors,
/// one unit added per nesting level, duplicates removed, sorted.  Guarded to
/// sigma(gamma) <= 12.
std::vector<Composition> alpha_set(const TreeLabel& label);

/// Same compositions counted once per derivation path (with duplicates).
/// The majorant inequality below needs the multiplicities: collapsing them
/// breaks it, e.g. on ((0,0),(0,0)) with four equal leaves.
std::vector<Composition> alpha_multiset(const TreeLabel& label);

/// The majorant P: 1 on leaves, |mu(subtree)| P(left) P(right) on nodes,
/// exact integer arithmetic.  leaves lists the leaf lattice values in
/// canonical left-to-right order.
std::int64_t majorant(const TreeLabel& label,
                      std::span<const MultiIndex> leaves);

/// Exact integer check P(m) <= sum_alpha prod_i |m_i|^{alpha_i}, the sum
/// running over the composition multiset.  Guarded to sigma(gamma) <= 6.
bool check_majorant_bound(const TreeLabel& label,
                          std::span<const MultiIndex> leaves);

/// (1 + 2 e^{-kappa/4} / (1 - e^{-kappa/4}))^nu, checked against (24/kappa)^nu.
double lattice_exp_sum(double kappa, int nu);

/// The weighted tree sum sum_gamma (2t)^ell / F * sum_alpha prod alpha_i! in
/// exact rational arithmetic, with the sum running over distinct tree shapes
/// and the alpha sets quotiented by the shape automorphisms.  Supported for
/// 1 <= k <= 3 and rational 0 < t <= 1/16; the values are exactly 1 at k = 1
/// and 1 + 2t at k = 2.
Rational weighted_tree_sum(int k, const Rational& t);

/// Exact sum over all length-N nonnegative compositions of l of prod alpha_i!,
/// asserted < (2N)^l.  Supported for 1 <= l <= N <= 8.
std::uint64_t factorial_comp_sum(int N, int l);

/// (2N)^l companion bound for factorial_comp_sum.
std::uint64_t factorial_comp_bound(int N, int l);

}  // namespace qpb
