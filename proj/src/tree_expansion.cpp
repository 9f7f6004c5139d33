#include "qpb/tree_expansion.hpp"

#include <cmath>
#include <stdexcept>

#include "qpb/evolution.hpp"
#include "qpb/quadrature.hpp"

namespace qpb {

namespace {

constexpr double kPanelTol = 1e-9;

// One subtree of a label with its leaf assignment resolved: holds the
// dispersion frequency of the subtree sum and evaluates the nested integral
// I(tau, .) on demand.
struct SubtreeEval {
    bool leaf = true;
    int tag = 0;
    double lambda = 0.0;
    int depth_budget = 12;
    const SubtreeEval* l = nullptr;
    const SubtreeEval* r = nullptr;

    cplx value(double tau) const {
        if (leaf) {
            if (tag == 0) return {std::cos(lambda * tau), 0.0};
            return {lambda == 0.0 ? tau : std::sin(lambda * tau) / lambda, 0.0};
        }
        if (tau == 0.0) return {0.0, 0.0};
        return quad::integrate(
            [this, tau](double s) {
                const cplx kernel =
                    std::exp(cplx{0.0, lambda * (s - tau)}) -
                    std::exp(cplx{0.0, lambda * (tau - s)});
                return kernel * l->value(s) * r->value(s);
            },
            0.0, tau, kPanelTol, depth_budget);
    }
};

struct Assignment {
    std::vector<MultiIndex> leaves;
};

// All leaf tuples over the ball with total sum n, pruned by l1 feasibility.
void enumerate_assignments(const std::vector<MultiIndex>& lattice, int sigma,
                           const MultiIndex& target, int radius,
                           std::vector<MultiIndex>& partial, MultiIndex sum,
                           std::vector<Assignment>& out) {
    const int placed = static_cast<int>(partial.size());
    if (placed == sigma) {
        if (sum == target) out.push_back({partial});
        return;
    }
    const int remaining = sigma - placed;
    for (const MultiIndex& m : lattice) {
        MultiIndex next = sum + m;
        if ((target - next).l1() > (remaining - 1) * radius) continue;
        partial.push_back(m);
        enumerate_assignments(lattice, sigma, target, radius, partial,
                              std::move(next), out);
        partial.pop_back();
    }
}

// Builds the evaluator tree; returns false when an internal subtree sum
// leaves the truncation ball (the Galerkin projection drops that term).
bool build_eval(const TreeLabel& label, const FrequencySystem& fs,
                std::span<const MultiIndex> leaves, std::size_t& pos,
                int quad_depth, std::vector<std::unique_ptr<SubtreeEval>>& pool,
                SubtreeEval*& out, MultiIndex& mu, cplx& f_product) {
    auto node = std::make_unique<SubtreeEval>();
    node->depth_budget = quad_depth;
    if (label.is_leaf()) {
        mu = leaves[pos++];
        node->leaf = true;
        node->tag = label.tag();
        node->lambda = dispersion_lambda(mu, fs);
    } else {
        SubtreeEval *le = nullptr, *re = nullptr;
        MultiIndex mul, mur;
        if (!build_eval(label.left(), fs, leaves, pos, quad_depth, pool, le,
                        mul, f_product))
            return false;
        if (!build_eval(label.right(), fs, leaves, pos, quad_depth, pool, re,
                        mur, f_product))
            return false;
        mu = mul + mur;
        if (mu.l1() > fs.truncation_radius()) return false;
        const double d = fs.dot(mu);
        node->leaf = false;
        node->lambda = dispersion_lambda_of(d);
        node->l = le;
        node->r = re;
        // The symmetrized kernel scale -i (mu.w)^2 / (2 lambda).
        f_product *= d == 0.0
                         ? cplx{0.0, 0.0}
                         : cplx{0.0, -1.0} * (d * d) / (2.0 * node->lambda);
    }
    out = node.get();
    pool.push_back(std::move(node));
    return true;
}

}  // namespace

cplx tree_expand_evaluate(int k, const MultiIndex& n, double t,
                          const CoefficientField& c0,
                          const CoefficientField& c0p,
                          const FrequencySystem& fs, int quad_depth) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("tree_expand_evaluate: k must lie in 1..3");
    if (fs.dimension() != 1)
        throw std::invalid_argument("tree_expand_evaluate: nu must be 1");
    if (fs.truncation_radius() > 3)
        throw std::invalid_argument("tree_expand_evaluate: N must be <= 3");
    if (n.l1() > fs.truncation_radius())
        throw std::invalid_argument("tree_expand_evaluate: mode outside the ball");

    const std::vector<MultiIndex> lattice =
        ball(fs.dimension(), fs.truncation_radius());
    cplx total{0.0, 0.0};
    for (const TreeLabel& label : enumerate_labels(k)) {
        const int sigma = weights(label).sigma;
        std::vector<Assignment> assignments;
        std::vector<MultiIndex> partial;
        enumerate_assignments(lattice, sigma, n, fs.truncation_radius(),
                              partial, MultiIndex(std::vector<int>(fs.dimension(), 0)),
                              assignments);
        for (const Assignment& asg : assignments) {
            // C: one initial-data factor per leaf.
            cplx coeff{1.0, 0.0};
            {
                std::size_t li = 0;
                bool zero = false;
                // Left-to-right leaf visit.
                std::vector<TreeLabel> walk{label};
                while (!walk.empty()) {
                    TreeLabel cur = walk.back();
                    walk.pop_back();
                    if (cur.is_leaf()) {
                        const cplx c = cur.tag() == 0 ? c0.at(asg.leaves[li])
                                                      : c0p.at(asg.leaves[li]);
                        ++li;
                        if (c == cplx{0.0, 0.0}) {
                            zero = true;
                            break;
                        }
                        coeff *= c;
                    } else {
                        walk.push_back(cur.right());
                        walk.push_back(cur.left());
                    }
                }
                if (zero) continue;
            }

            cplx f_product{1.0, 0.0};
            std::vector<std::unique_ptr<SubtreeEval>> pool;
            SubtreeEval* root = nullptr;
            MultiIndex mu;
            std::size_t pos = 0;
            if (!build_eval(label, fs, asg.leaves, pos, quad_depth, pool, root,
                            mu, f_product))
                continue;
            if (f_product == cplx{0.0, 0.0}) continue;
            total += coeff * f_product * root->value(t);
        }
    }
    return total;
}

}  // namespace qpb
