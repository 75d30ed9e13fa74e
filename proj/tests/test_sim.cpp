#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arproc/sim.hpp"

using namespace arproc;

namespace {

ModelSpec example1() {
    return {ModelKind::I, MultiplierSpec::NegativeAtoms({{-1.0, 1.0}}),
            DistSpec::Exponential(1.0), DistSpec::Exponential(1.0), 0.0};
}

SimConfig small_cfg() {
    SimConfig c;
    c.replications = 20000;
    c.path_length = 2000;
    c.burn_in = 200;
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("deterministic alternating path") {
    ModelSpec spec{ModelKind::I, MultiplierSpec::NegativeAtoms({{-1.0, 1.0}}),
                   DistSpec::Deterministic(0.0), DistSpec::Deterministic(1.0), 0.0};
    RngStream rng(1, 0);
    auto path = simulate_path(spec, 6, rng);
    REQUIRE(path.size() == 7);
    for (size_t i = 0; i < path.size(); ++i) CHECK(path[i] == (i % 2 == 0 ? 0.0 : 1.0));
}

TEST_CASE("paths are nonnegative with exact zeros") {
    RngStream rng(5, 0);
    auto path = simulate_path(example1(), 2000, rng);
    bool saw_zero = false;
    for (double w : path) {
        CHECK(w >= 0.0);
        if (w == 0.0) saw_zero = true;
    }
    CHECK(saw_zero);  // reflection must produce exact zeros, not epsilon-zeros
}

TEST_CASE("strongly negative multiplier alternates between zero and a band") {
    ModelSpec spec{ModelKind::I, MultiplierSpec::NegativeAtoms({{-2.0, 0.5}, {-3.0, 0.5}}),
                   DistSpec::Deterministic(0.0), DistSpec::Uniform(1.0, 2.0), 0.0};
    RngStream rng(9, 0);
    auto path = simulate_path(spec, 200, rng);
    for (size_t i = 0; i < path.size(); ++i) {
        if (i % 2 == 0)
            CHECK(path[i] == 0.0);
        else {
            CHECK(path[i] >= 1.0);
            CHECK(path[i] <= 2.0);
        }
    }
}

TEST_CASE("identical seeds give identical estimates") {
    SimConfig cfg = small_cfg();
    cfg.replications = 500;
    auto a = estimate_stationary(example1(), cfg, {0.5, 1.0});
    auto b = estimate_stationary(example1(), cfg, {0.5, 1.0});
    CHECK(a.atom.value == b.atom.value);
    CHECK(a.mean.value == b.mean.value);
    CHECK(a.lst.at(0.5).value == b.lst.at(0.5).value);
    CHECK(a.atom.std_error == b.atom.std_error);

    auto g1 = estimate_geometric_transform(example1(), 0.5, 1.0, cfg);
    auto g2 = estimate_geometric_transform(example1(), 0.5, 1.0, cfg);
    CHECK(g1.value == g2.value);
}

TEST_CASE("stationary estimates recover the known law") {
    auto est = estimate_stationary(example1(), small_cfg(), {1.0});
    CHECK(std::abs(est.atom.value - 0.6) < 4.0 * est.atom.std_error);
    CHECK(std::abs(est.mean.value - 0.4) < 4.0 * est.mean.std_error);
    CHECK(std::abs(est.lst.at(1.0).value - 0.8) < 4.0 * est.lst.at(1.0).std_error);
    CHECK(est.atom.std_error > 0.0);
    CHECK(est.atom.n_effective > 0);
}

TEST_CASE("geometric-epoch estimator basics") {
    SimConfig cfg = small_cfg();
    cfg.replications = 5000;
    // s = 0: every draw contributes exactly 1
    auto z = estimate_geometric_transform(example1(), 0.5, 0.0, cfg);
    CHECK(z.value == 1.0);
    CHECK(z.std_error == 0.0);

    // r tiny: the epoch is almost surely 0, estimate is e^{-s w0}
    ModelSpec shifted = example1();
    shifted.w0 = 2.0;
    auto e = estimate_geometric_transform(shifted, 1e-12, 1.0, cfg);
    CHECK(e.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}

TEST_CASE("geometric-epoch estimator matches the known transform value") {
    // analytic: (1-r) Psi(r,s) with Psi = 1 + (a0 + a1 s)/(1+s), a0 = 1, a1 = 5/9 at r = 1/2
    SimConfig cfg = small_cfg();
    cfg.replications = 60000;
    double a0 = 1.0, a1 = 5.0 / 9.0;
    double target = 0.5 * (1.0 + (a0 + a1) / 2.0);
    auto est = estimate_geometric_transform(example1(), 0.5, 1.0, cfg);
    CHECK(std::abs(est.value - target) < 4.0 * est.std_error);
}

TEST_CASE("transient atom estimator") {
    SimConfig cfg = small_cfg();
    cfg.replications = 20000;
    auto p0 = estimate_transient_atom(example1(), 0, cfg);
    CHECK(p0.value == 1.0);

    ModelSpec shifted = example1();
    shifted.w0 = 1.0;
    auto q0 = estimate_transient_atom(shifted, 0, cfg);
    CHECK(q0.value == 0.0);

    // uniform multiplier, one step from zero: P(W_1 = 0) = Phi_B(lambda) = 1/2
    ModelSpec m3{ModelKind::III, MultiplierSpec::Uniform01(), DistSpec::Exponential(1.0),
                 DistSpec::Exponential(1.0), 0.0};
    auto p1 = estimate_transient_atom(m3, 1, cfg);
    CHECK(std::abs(p1.value - 0.5) < 4.0 * p1.std_error);
}

TEST_CASE("antithetic mode preserves the estimator mean") {
    SimConfig plain = small_cfg();
    plain.replications = 40000;
    SimConfig anti = plain;
    anti.antithetic = true;
    anti.seed = 4242;
    auto a = estimate_geometric_transform(example1(), 0.5, 1.0, plain);
    auto b = estimate_geometric_transform(example1(), 0.5, 1.0, anti);
    double comb = std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
    CHECK(std::abs(a.value - b.value) < 4.0 * comb);
}

TEST_CASE("standard errors scale like the inverse root of the budget") {
    SimConfig cfg = small_cfg();
    cfg.replications = 8000;
    cfg.path_length = 400;
    cfg.burn_in = 100;
    auto lo = estimate_geometric_transform(example1(), 0.5, 1.0, cfg);
    SimConfig cfg4 = cfg;
    cfg4.replications = 4 * cfg.replications;
    auto hi = estimate_geometric_transform(example1(), 0.5, 1.0, cfg4);
    double ratio = lo.std_error / hi.std_error;
    CHECK(ratio > 2.0 * 0.8);
    CHECK(ratio < 2.0 * 1.2);
}
