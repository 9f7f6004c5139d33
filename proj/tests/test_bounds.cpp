#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qpb/bounds.hpp"
#include "qpb/evolution.hpp"
#include "qpb/lattice.hpp"
#include "qpb/random.hpp"

using qpb::BoundReport;
using qpb::CoefficientField;
using qpb::cplx;
using qpb::DecayEnvelope;
using qpb::FrequencySystem;
using qpb::MultiIndex;
using qpb::TimeGrid;

namespace {

MultiIndex mi(std::vector<int> c) { return MultiIndex(std::move(c)); }

CoefficientField enveloped_field(int nu, int radius, double B, double kappa,
                                 std::uint64_t seed,
                                 const std::vector<double>& omega,
                                 double extra = 1.0) {
    CoefficientField f(nu, radius);
    (void)omega;
    for (const MultiIndex& n : qpb::ball(nu, radius)) {
        const std::uint64_t key = qpb::rng::mode_key(seed, n);
        const double rho = qpb::rng::uniform01(key, 0);
        const double theta = 6.283185307179586 * qpb::rng::uniform01(key, 1);
        f.set(n, extra * B * std::exp(-kappa * n.l1() / 2.0) * rho *
                     std::exp(cplx{0.0, theta}));
    }
    return f;
}

}  // namespace

TEST_CASE("existence time") {
    const DecayEnvelope env(1.0, 1.0);
    SUBCASE("printed value at nu = 1") {
        const FrequencySystem fs({1.0}, 4);
        CHECK(qpb::existence_time(env, fs) ==
              doctest::Approx(1.0 / 6144.0).epsilon(1e-15));
        CHECK(qpb::existence_time(env, fs) ==
              doctest::Approx(1.6276e-4).epsilon(1e-4));
    }
    SUBCASE("nu = 2 with an irrational pair") {
        const FrequencySystem fs({1.0, std::sqrt(2.0)}, 2);
        const double expected =
            1.0 / (32.0 * 192.0 * 192.0 * (1.0 + std::sqrt(2.0)));
        CHECK(qpb::existence_time(env, fs) ==
              doctest::Approx(expected).epsilon(1e-15));
        CHECK(qpb::existence_time(env, fs) ==
              doctest::Approx(3.511e-7).epsilon(1e-3));
    }
    SUBCASE("doubling B halves t0 exactly") {
        const FrequencySystem fs({1.0}, 4);
        const DecayEnvelope env2(2.0, 1.0);
        CHECK(qpb::existence_time(env2, fs) ==
              qpb::existence_time(env, fs) / 2.0);
    }
    SUBCASE("divisor knob") {
        const FrequencySystem fs({1.0}, 4);
        CHECK(qpb::existence_time(env, fs, 24) ==
              doctest::Approx(8.0 / 6144.0).epsilon(1e-15));
    }
}

TEST_CASE("uniqueness time") {
    const FrequencySystem fs({1.0}, 4);
    CHECK(qpb::uniqueness_time(1.0, 1.0, 1.0, fs) ==
          doctest::Approx(1.0 / 1152.0).epsilon(1e-15));
    CHECK(qpb::uniqueness_time(1e-6, 1.0, 1.0, fs) == 1e-6);
    const double full = qpb::uniqueness_time(1.0, 1.0, 1.0, fs);
    const double halved = qpb::uniqueness_time(1.0, 1.0, 0.5, fs);
    CHECK(halved == doctest::Approx(full / 2.0).epsilon(1e-15));
}

TEST_CASE("monotonicity of the time thresholds") {
    const FrequencySystem fs({1.0}, 4);
    double prev = 1e300;
    for (double B : {0.5, 1.0, 2.0, 4.0}) {
        const double t0 = qpb::existence_time(DecayEnvelope(B, 1.0), fs);
        CHECK(t0 > 0.0);
        CHECK(t0 < prev);
        prev = t0;
    }
    prev = 0.0;
    for (double kappa : {0.25, 0.5, 0.75, 1.0}) {
        const double t0 = qpb::existence_time(DecayEnvelope(1.0, kappa), fs);
        CHECK(t0 > prev);
        prev = t0;
    }
}

TEST_CASE("envelope check") {
    const DecayEnvelope env(1.0, 1.0);
    SUBCASE("zero field passes with the smallest bound as margin") {
        const CoefficientField zero(1, 4);
        const BoundReport r = qpb::check_envelope(zero, env, 2.0, 4.0);
        CHECK(r.pass);
        CHECK(r.margin ==
              doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("enveloped data passes the initial-data bound") {
        const CoefficientField c =
            enveloped_field(1, 6, 1.0, 1.0, 51, {1.0});
        const BoundReport r = qpb::check_envelope(c, env, 1.0, 2.0);
        CHECK(r.pass);
    }
    SUBCASE("violations are caught with the offending mode") {
        CoefficientField c(1, 4);
        c.set(mi({3}), cplx{1.0, 0.0});  // far above B exp(-3/2)
        const BoundReport r = qpb::check_envelope(c, env, 1.0, 2.0);
        CHECK_FALSE(r.pass);
        CHECK(r.worst == "(3)");
    }
}

TEST_CASE("contraction certificate") {
    const FrequencySystem fs({1.0}, 6);
    const DecayEnvelope env(1.0, 1.0);
    const double t0 = qpb::existence_time(env, fs);

    SUBCASE("zero data passes trivially") {
        qpb::PicardDiagnostics diag;
        diag.deltas = {0.0};
        diag.converged = true;
        const BoundReport r =
            qpb::check_contraction(diag, env, fs, TimeGrid(t0, 16));
        CHECK(r.pass);
        CHECK(r.threshold < 1.0);
    }
    SUBCASE("desk-scale run passes well inside the bound") {
        const CoefficientField c0 =
            enveloped_field(1, 6, 1.0, 1.0, 52, {1.0});
        const CoefficientField c0p =
            enveloped_field(1, 6, 1.0, 1.0, 53, {1.0});
        const TimeGrid grid(t0, 128);
        qpb::PicardOptions opts;
        opts.envelope = env;
        const auto result = qpb::picard_solve(c0, c0p, grid, fs, opts);
        REQUIRE(result.diagnostics.converged);
        const BoundReport r =
            qpb::check_contraction(result.diagnostics, env, fs, grid);
        CHECK(r.pass);
    }
    SUBCASE("far beyond the existence time the certificate fails") {
        qpb::PicardDiagnostics diag;
        diag.deltas = {1e-3, 1e-4};
        const BoundReport r =
            qpb::check_contraction(diag, env, fs, TimeGrid(100.0 * t0, 16));
        CHECK_FALSE(r.pass);  // r >= 1 is the expected signal out here
    }
}

TEST_CASE("uniqueness comparison") {
    const FrequencySystem fs({1.0}, 4);
    const DecayEnvelope env(1.0, 1.0);
    const double t0 = qpb::existence_time(env, fs);
    const CoefficientField c0 = enveloped_field(1, 4, 1.0, 1.0, 54, {1.0});
    const CoefficientField c0p = enveloped_field(1, 4, 1.0, 1.0, 55, {1.0});
    const TimeGrid grid(t0, 64);
    qpb::PicardOptions opts;
    opts.envelope = env;
    const auto picard = qpb::picard_solve(c0, c0p, grid, fs, opts);

    SUBCASE("identical trajectories") {
        const BoundReport r =
            qpb::uniqueness_compare(picard.trajectory, picard.trajectory);
        CHECK(r.pass);
        CHECK(r.margin == 1e-6);
    }
    SUBCASE("Picard limit against the RK4 reference") {
        const auto rk = qpb::ode_reference_solve(c0, c0p, grid, fs);
        const BoundReport r = qpb::uniqueness_compare(picard.trajectory, rk);
        CHECK(r.pass);
    }
    SUBCASE("a perturbed mode is flagged at its magnitude") {
        CoefficientField bumped = c0;
        bumped.set(mi({1}), c0.at(mi({1})) + cplx{1e-3, 0.0});
        const auto other = qpb::picard_solve(bumped, c0p, grid, fs, opts);
        const BoundReport r =
            qpb::uniqueness_compare(picard.trajectory, other.trajectory);
        CHECK_FALSE(r.pass);
        CHECK(r.margin == doctest::Approx(1e-6 - 1e-3).epsilon(1e-2));
    }
    SUBCASE("grid mismatch throws") {
        const TimeGrid other_grid(t0, 32);
        const auto other = qpb::picard_solve(c0, c0p, other_grid, fs, opts);
        CHECK_THROWS_AS(
            qpb::uniqueness_compare(picard.trajectory, other.trajectory),
            std::invalid_argument);
    }
}
