#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "arproc/dist.hpp"
#include "arproc/errors.hpp"
#include "arproc/multiplier.hpp"

using namespace arproc;

namespace {

std::vector<DistSpec> rational_specs() {
    return {
        DistSpec::Exponential(1.0),
        DistSpec::Exponential(2.5),
        DistSpec::Erlang(3, 2.0),
        DistSpec::HyperExponential({0.5, 0.5}, {1.0, 2.0}),
        DistSpec::CoxianChain({1.0, 3.0}, {0.4, 1.0}),
    };
}

}  // namespace

TEST_CASE("symbolic rational transforms") {
    RationalLST e = DistSpec::Exponential(1.0).lst();
    REQUIRE(e.poles.size() == 1);
    CHECK(std::abs(e.poles[0] - Complex(-1.0)) < 1e-14);
    CHECK(std::abs(e.numerator(Complex(0.0)) - Complex(1.0)) < 1e-14);

    RationalLST er = DistSpec::Erlang(2, 3.0).lst();
    REQUIRE(er.poles.size() == 2);
    CHECK(std::abs(er.poles[0] - Complex(-3.0)) < 1e-12);
    CHECK(std::abs(er.poles[1] - Complex(-3.0)) < 1e-12);
    CHECK(std::abs(er.numerator(Complex(0.0)) - Complex(9.0)) < 1e-12);

    DistSpec h = DistSpec::HyperExponential({0.5, 0.5}, {1.0, 2.0});
    Complex s(0.7);
    Complex direct = 0.5 / (s + 1.0) + 0.5 * 2.0 / (s + 2.0);
    CHECK(std::abs(h.lst().eval(s) - direct) < 1e-12);
    CHECK(std::abs(h.lst_eval(s) - direct) < 1e-12);
}

TEST_CASE("transform invariants hold for every constructible spec") {
    for (const DistSpec& d : rational_specs()) {
        RationalLST r = d.lst();
        CHECK_NOTHROW(r.validate());
        CHECK(std::abs(r.eval(Complex(0.0)) - Complex(1.0)) < 1e-10);
        for (const Complex& p : r.poles) CHECK(p.real() < 0.0);
    }
    CHECK_THROWS_AS(DistSpec::Deterministic(1.0).lst(), NotRational);
    CHECK_THROWS_AS(DistSpec::Uniform(0.0, 1.0).lst(), NotRational);
}

TEST_CASE("pointwise transform evaluation") {
    CHECK(DistSpec::Deterministic(2.0).lst_eval(Complex(0.0)) == Complex(1.0));
    CHECK(std::abs(DistSpec::Exponential(1.0).lst_eval(Complex(1.0)) - Complex(0.5)) < 1e-14);
    Complex u = DistSpec::Uniform(0.0, 1.0).lst_eval(Complex(1.0));
    CHECK(std::abs(u - Complex(1.0 - std::exp(-1.0))) < 1e-12);
    // |transform| <= 1 on the right half-plane
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> re(0.0, 8.0), im(-8.0, 8.0);
    for (const DistSpec& d : rational_specs())
        for (int i = 0; i < 1000; ++i)
            CHECK(std::abs(d.lst_eval(Complex(re(gen), im(gen)))) <= 1.0 + 1e-12);
}

TEST_CASE("transform of the increment Y = B - A") {
    ModelSpec spec{ModelKind::I, MultiplierSpec::NegativeAtoms({{-1.0, 1.0}}),
                   DistSpec::Exponential(1.0), DistSpec::Exponential(1.0), 0.0};
    CHECK(std::abs(spec.y_lst(Complex(0.0)) - Complex(1.0)) < 1e-14);
    CHECK(std::abs(spec.y_lst(Complex(0.5)) - Complex(4.0 / 3.0)) < 1e-12);

    ModelSpec spec2{ModelKind::I, MultiplierSpec::NegativeAtoms({{-1.0, 1.0}}),
                    DistSpec::Deterministic(1.0), DistSpec::Exponential(1.0), 0.0};
    CHECK(std::abs(spec2.y_lst(Complex(1.0)) - Complex(0.5 * std::exp(1.0))) < 1e-12);

    CHECK_THROWS_AS(spec.y_lst(Complex(1.0, 0.0) * Complex(-1.0)), PoleHit);
    Poly ny = spec.y_num(), dy = spec.y_den();
    // N_Y(0)/D_Y(0) = 1
    CHECK(std::abs(ny(Complex(0.0)) / dy(Complex(0.0)) - Complex(1.0)) < 1e-12);
}

TEST_CASE("negative-part integration of the multiplier") {
    QuadRule rule;
    auto a1 = MultiplierSpec::NegativeAtoms({{-1.0, 1.0}});
    CHECK(std::abs(a1.integrate_negative([](double y) { return Complex(y); }, rule) -
                   Complex(-1.0)) < 1e-14);

    auto a2 = MultiplierSpec::NegativeAtoms({{-2.0, 0.5}, {-0.5, 0.5}});
    CHECK(std::abs(a2.integrate_negative([](double y) { return Complex(y * y); }, rule) -
                   Complex(2.125)) < 1e-14);

    auto mixed = MultiplierSpec::MixedAtom(1.0, 0.3, MultiplierSpec::NegativeAtoms({{-1.0, 1.0}}));
    CHECK(std::abs(mixed.integrate_negative([](double) { return Complex(1.0); }, rule) -
                   Complex(1.0)) < 1e-14);

    // conditional negative part is a probability measure for every variant
    std::vector<MultiplierSpec> vs = {
        a1, a2, mixed, MultiplierSpec::NegativeScaledDist(2.0, DistSpec::Exponential(1.0)),
        MultiplierSpec::MixedAtom(0.5, 0.4,
                                  MultiplierSpec::NegativeScaledDist(1.0, DistSpec::Erlang(2, 1.0)))};
    for (const auto& v : vs)
        CHECK(std::abs(v.integrate_negative([](double) { return Complex(1.0); }, rule) -
                       Complex(1.0)) < 1e-8);
}

TEST_CASE("exact samplers match their targets") {
    RngStream rng(123, 0);
    for (int i = 0; i < 50; ++i) CHECK(DistSpec::Deterministic(2.0).sample(rng) == 2.0);

    const long n = 200000;
    double sum = 0.0, sumsq = 0.0;
    DistSpec e = DistSpec::Exponential(1.0);
    for (long i = 0; i < n; ++i) {
        double x = e.sample(rng);
        sum += x;
        sumsq += x * x;
    }
    double mean = sum / double(n);
    double se = std::sqrt((sumsq / double(n) - mean * mean) / double(n));
    CHECK(std::abs(mean - 1.0) < 4.0 * se);

    auto u01 = MultiplierSpec::Uniform01();
    long c25 = 0, c50 = 0, c75 = 0;
    const long m = 100000;
    for (long i = 0; i < m; ++i) {
        double v = u01.sample(rng);
        c25 += v < 0.25;
        c50 += v < 0.5;
        c75 += v < 0.75;
    }
    auto within = [&](long c, double p) {
        double se_p = std::sqrt(p * (1.0 - p) / double(m));
        return std::abs(double(c) / double(m) - p) < 4.0 * se_p;
    };
    CHECK(within(c25, 0.25));
    CHECK(within(c50, 0.5));
    CHECK(within(c75, 0.75));
}

TEST_CASE("empirical transform agrees with the analytic transform") {
    RngStream rng(99, 0);
    const long n = 100000;
    for (const DistSpec& d : rational_specs()) {
        for (double s : {0.1, 1.0, 3.0}) {
            double sum = 0.0, sumsq = 0.0;
            RngStream local(99, uint64_t(s * 1000.0));
            for (long i = 0; i < n; ++i) {
                double v = std::exp(-s * d.sample(local));
                sum += v;
                sumsq += v * v;
            }
            double mean = sum / double(n);
            double se = std::sqrt((sumsq / double(n) - mean * mean) / double(n));
            CHECK(std::abs(mean - d.lst_eval(Complex(s)).real()) < 5.0 * se + 1e-12);
        }
    }
    (void)rng;
}

TEST_CASE("moments and distribution functions") {
    CHECK(DistSpec::Exponential(2.0).mean() == doctest::Approx(0.5));
    CHECK(DistSpec::Erlang(3, 2.0).mean() == doctest::Approx(1.5));
    CHECK(DistSpec::Uniform(1.0, 2.0).mean() == doctest::Approx(1.5));
    CHECK(DistSpec::Exponential(1.0).cdf(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
    CHECK(DistSpec::Deterministic(2.0).cdf(1.9) == 0.0);
    CHECK(DistSpec::Deterministic(2.0).cdf(2.0) == 1.0);
}

TEST_CASE("repeated poles are split on request") {
    bool pert = false;
    DistSpec er = DistSpec::Erlang(3, 2.0);
    DistSpec split = er.with_distinct_poles(1e-6, &pert);
    CHECK(pert);
    RationalLST r = split.lst();
    for (size_t i = 0; i < r.poles.size(); ++i)
        for (size_t j = i + 1; j < r.poles.size(); ++j)
            CHECK(std::abs(r.poles[i] - r.poles[j]) > 1e-7);
    // the perturbed law is close in transform
    CHECK(std::abs(split.lst_eval(Complex(1.0)) - er.lst_eval(Complex(1.0))) < 1e-4);

    pert = true;
    DistSpec e = DistSpec::Exponential(1.0).with_distinct_poles(1e-6, &pert);
    CHECK_FALSE(pert);
    (void)e;
}

TEST_CASE("raw rational transforms are analytic-only") {
    DistSpec raw = DistSpec::RawRational(Poly{Complex(1.0)}, {Complex(-1.0)});
    CHECK_FALSE(raw.simulable());
    CHECK(std::abs(raw.lst_eval(Complex(1.0)) - Complex(0.5)) < 1e-12);
    RngStream rng(1, 0);
    CHECK_THROWS(raw.sample(rng));
}
