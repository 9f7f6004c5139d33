#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "qpb/random.hpp"
#include "qpb/rational.hpp"
#include "qpb/trees.hpp"

using qpb::Composition;
using qpb::MultiIndex;
using qpb::Rational;
using qpb::TreeLabel;
using qpb::Weights;

namespace {

MultiIndex mi(std::vector<int> c) { return MultiIndex(std::move(c)); }

const TreeLabel L0 = TreeLabel::leaf(0);
const TreeLabel L1 = TreeLabel::leaf(1);

}  // namespace

TEST_CASE("label enumeration counts") {
    CHECK(qpb::enumerate_labels(1).size() == 2);
    CHECK(qpb::enumerate_labels(2).size() == 6);
    CHECK(qpb::enumerate_labels(3).size() == 38);
    CHECK(qpb::enumerate_labels(4).size() == 1446);
    CHECK_THROWS_AS(qpb::enumerate_labels(0), std::invalid_argument);
    CHECK_THROWS_AS(qpb::enumerate_labels(5), std::invalid_argument);

    // count(k) = 2 + count(k-1)^2 and all labels distinct.
    for (int k = 2; k <= 4; ++k) {
        const auto cur = qpb::enumerate_labels(k);
        const auto prev = qpb::enumerate_labels(k - 1);
        CHECK(cur.size() == 2 + prev.size() * prev.size());
        std::set<std::string> names;
        for (const TreeLabel& g : cur) names.insert(g.to_string());
        CHECK(names.size() == cur.size());
    }
}

TEST_CASE("label levels") {
    CHECK(L0.level() == 1);
    CHECK(TreeLabel::node(L0, L1).level() == 2);
    CHECK(TreeLabel::node(TreeLabel::node(L0, L0), L1).level() == 3);
}

TEST_CASE("weights") {
    const Weights wl = qpb::weights(L1);
    CHECK(wl.sigma == 1);
    CHECK(wl.ell == 0);
    CHECK(wl.hbar == 1);
    CHECK(wl.frak_f == 1);

    const Weights wp = qpb::weights(TreeLabel::node(L0, L1));
    CHECK(wp.sigma == 2);
    CHECK(wp.ell == 1);
    CHECK(wp.hbar == 1);
    CHECK(wp.frak_f == 1);

    const Weights wd = qpb::weights(
        TreeLabel::node(TreeLabel::node(L0, L0), L1));
    CHECK(wd.sigma == 3);
    CHECK(wd.ell == 2);
    CHECK(wd.hbar == 1);
    CHECK(wd.frak_f == 2);
}

TEST_CASE("weight identities over all level-4 labels") {
    for (const TreeLabel& g : qpb::enumerate_labels(4)) {
        const Weights w = qpb::weights(g);
        CHECK(w.sigma == w.ell + 1);
        CHECK(w.hbar <= w.sigma);
        CHECK(w.frak_f >= 1);
    }
}

TEST_CASE("alpha sets") {
    CHECK(qpb::alpha_set(L0) == std::vector<Composition>{{0}});

    const auto pair_set = qpb::alpha_set(TreeLabel::node(L0, L1));
    CHECK(pair_set == std::vector<Composition>{{0, 1}, {1, 0}});

    const TreeLabel g = TreeLabel::node(TreeLabel::node(L0, L0), L1);
    for (const Composition& a : qpb::alpha_set(g)) {
        CHECK(a.size() == 3);
        int sum = 0;
        for (int v : a) sum += v;
        CHECK(sum == 2);
    }

    // Length sigma and total ell across all level-3 labels.
    for (const TreeLabel& label : qpb::enumerate_labels(3)) {
        const Weights w = qpb::weights(label);
        for (const Composition& a : qpb::alpha_set(label)) {
            CHECK(static_cast<int>(a.size()) == w.sigma);
            int sum = 0;
            for (int v : a) sum += v;
            CHECK(sum == w.ell);
        }
    }
}

TEST_CASE("majorant") {
    const std::vector<MultiIndex> single{mi({3})};
    CHECK(qpb::majorant(L0, single) == 1);
    CHECK(qpb::majorant(L1, single) == 1);

    const std::vector<MultiIndex> pair{mi({1}), mi({2})};
    CHECK(qpb::majorant(TreeLabel::node(L0, L1), pair) == 3);

    // Hand-unrolled depth-2 product: |1+2-1| * |1+2| = 6.
    const TreeLabel g = TreeLabel::node(TreeLabel::node(L0, L0), L1);
    const std::vector<MultiIndex> leaves{mi({1}), mi({2}), mi({-1})};
    CHECK(qpb::majorant(g, leaves) == 6);
}

TEST_CASE("majorant composition bound") {
    // Leaves: both sides are 1.
    CHECK(qpb::check_majorant_bound(L0, std::vector<MultiIndex>{mi({7, -2})}));

    // Pair: |m1 + m2| <= |m1| + |m2|.
    CHECK(qpb::check_majorant_bound(TreeLabel::node(L0, L1),
                               std::vector<MultiIndex>{mi({3}), mi({-5})}));

    // The multiplicity matters: on ((0,0),(0,0)) with four equal leaves the
    // deduplicated sum undercounts and would sit below the majorant.
    {
        const TreeLabel pair = TreeLabel::node(L0, L0);
        const TreeLabel g = TreeLabel::node(pair, pair);
        const std::vector<MultiIndex> leaves{mi({5}), mi({5}), mi({5}), mi({5})};
        CHECK(qpb::majorant(g, leaves) == 2000);
        std::int64_t dedup_rhs = 0;
        for (const Composition& a : qpb::alpha_set(g)) {
            std::int64_t term = 1;
            for (std::size_t i = 0; i < a.size(); ++i)
                for (int p = 0; p < a[i]; ++p) term *= 5;
            dedup_rhs += term;
        }
        CHECK(dedup_rhs == 1500);
        CHECK(qpb::check_majorant_bound(g, leaves));
        CHECK(qpb::alpha_multiset(g).size() == 16);
    }

    // 200 random assignments per level-3 label, nu in {1, 2}.
    std::uint64_t draw = 0;
    for (const TreeLabel& label : qpb::enumerate_labels(3)) {
        const int sigma = qpb::weights(label).sigma;
        for (int rep = 0; rep < 200; ++rep) {
            const int nu = 1 + (rep % 2);
            std::vector<MultiIndex> leaves;
            for (int i = 0; i < sigma; ++i) {
                std::vector<int> comp;
                for (int d = 0; d < nu; ++d) {
                    const std::uint64_t key = qpb::rng::mix(++draw);
                    comp.push_back(
                        static_cast<int>(qpb::rng::uniform01(key, 0) * 11) - 5);
                }
                leaves.push_back(mi(comp));
            }
            CHECK(qpb::check_majorant_bound(label, leaves));
        }
    }
}

TEST_CASE("lattice geometric sum") {
    // Scalar oracle: 1 + 2 e^{-1/4} / (1 - e^{-1/4}).
    const double e = std::exp(-0.25);
    const double expected = 1.0 + 2.0 * e / (1.0 - e);
    CHECK(qpb::lattice_exp_sum(1.0, 1) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(qpb::lattice_exp_sum(1.0, 1) == doctest::Approx(8.0415).epsilon(1e-4));
    CHECK(qpb::lattice_exp_sum(0.5, 1) == doctest::Approx(16.0208).epsilon(1e-4));
    CHECK(qpb::lattice_exp_sum(1.0, 2) ==
          doctest::Approx(expected * expected).epsilon(1e-14));

    // 50-point kappa grid against the printed bound.
    for (int i = 1; i <= 50; ++i) {
        const double kappa = i / 50.0;
        const double v = qpb::lattice_exp_sum(kappa, 1);
        CHECK(v <= 24.0 / kappa + 1e-12);
    }
}

TEST_CASE("weighted tree sum") {
    SUBCASE("k = 1 is exactly one") {
        for (int i = 1; i <= 16; ++i)
            CHECK(qpb::weighted_tree_sum(1, Rational(i, 256)) == Rational(1));
    }
    SUBCASE("k = 2 is exactly 1 + 2t") {
        for (int i = 1; i <= 16; ++i) {
            const Rational t(i, 256);
            CHECK(qpb::weighted_tree_sum(2, t) ==
                  Rational(1) + Rational(2) * t);
        }
    }
    SUBCASE("k = 3 stays within both printed bounds") {
        for (int i = 1; i <= 16; ++i) {
            const Rational t(i, 256);
            const Rational v = qpb::weighted_tree_sum(3, t);
            CHECK(v <= Rational(2));
            CHECK(v <= Rational(1) + Rational(16) * t);
        }
    }
    SUBCASE("guards") {
        CHECK_THROWS_AS(qpb::weighted_tree_sum(4, Rational(1, 16)),
                        std::invalid_argument);
        CHECK_THROWS_AS(qpb::weighted_tree_sum(2, Rational(1, 8)),
                        std::invalid_argument);
        CHECK_THROWS_AS(qpb::weighted_tree_sum(2, Rational(0)),
                        std::invalid_argument);
    }
}

TEST_CASE("factorial composition sums") {
    CHECK(qpb::factorial_comp_sum(2, 1) == 2);
    CHECK(qpb::factorial_comp_sum(3, 2) == 9);
    CHECK(qpb::factorial_comp_sum(6, 6) < qpb::factorial_comp_bound(6, 6));
    CHECK(qpb::factorial_comp_bound(6, 6) == 2985984);
    CHECK_THROWS_AS(qpb::factorial_comp_sum(9, 2), std::invalid_argument);
    CHECK_THROWS_AS(qpb::factorial_comp_sum(3, 4), std::invalid_argument);

    // Independent oracle: S(N, l) = sum_a a! S(N-1, l-a) with S(1, l) = l!.
    const auto oracle = [](int N, int l) {
        std::vector<std::vector<std::uint64_t>> s(
            N + 1, std::vector<std::uint64_t>(l + 1, 0));
        std::uint64_t fact[9] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
        for (int j = 0; j <= l; ++j) s[1][j] = fact[j];
        for (int n = 2; n <= N; ++n)
            for (int j = 0; j <= l; ++j)
                for (int a = 0; a <= j; ++a) s[n][j] += fact[a] * s[n - 1][j - a];
        return s[N][l];
    };
    for (int N = 1; N <= 8; ++N)
        for (int l = 1; l <= N; ++l) {
            const std::uint64_t v = qpb::factorial_comp_sum(N, l);
            CHECK(v == oracle(N, l));
            CHECK(v < qpb::factorial_comp_bound(N, l));
        }
}

TEST_CASE("rational arithmetic") {
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
    CHECK(Rational(-4, -8) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(7, 3).to_string() == "7/3");
    CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rational(INT64_MAX, 1) * Rational(2, 1),
                    std::overflow_error);
}
