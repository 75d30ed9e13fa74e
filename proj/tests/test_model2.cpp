#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "arproc/errors.hpp"
#include "arproc/model2.hpp"
#include "arproc/sim.hpp"

using namespace arproc;

namespace {

ModelSpec mixed_spec(double a, double p, double la = 1.0, double mu = 1.0, double w0 = 0.0) {
    return {ModelKind::II,
            MultiplierSpec::MixedAtom(a, p, MultiplierSpec::NegativeAtoms({{-1.0, 1.0}})),
            DistSpec::Exponential(la), DistSpec::Exponential(mu), w0};
}

Complex y_transform(const ModelSpec& spec, Complex s) { return spec.y_lst(s); }

}  // namespace

TEST_CASE("right-half-plane roots: count and defining equation") {
    ModelSpec spec = mixed_spec(1.0, 0.5);
    DeltaRoots dr = m2_find_deltas(spec, 0.5);
    REQUIRE(dr.roots.size() == 1);
    CHECK(dr.roots[0].real() > 0.0);
    // defining equation 1 - r p Phi_Y(delta) = 0
    Complex phi = y_transform(spec, dr.roots[0]);
    CHECK(std::abs(1.0 - 0.5 * 0.5 * phi) < 1e-8);

    for (int i = 0; i < 20; ++i) {
        double a = 1.0;
        double p = 0.1 + 0.04 * i;
        double r = 0.15 + 0.04 * i;
        double la = 0.5 + 0.1 * i, mu = 2.0 - 0.05 * i;
        ModelSpec s2 = mixed_spec(a, p, la, mu);
        DeltaRoots d2 = m2_find_deltas(s2, r);
        CHECK(d2.roots.size() == 1);  // one pole of the interarrival transform
        for (Complex d : d2.roots)
            CHECK(std::abs(1.0 - r * p * y_transform(s2, d)) < 1e-8);
    }
}

TEST_CASE("vanishing-p root limit") {
    ModelSpec spec = mixed_spec(1.0, 1e-8, 2.0, 1.0);
    DeltaRoots dr = m2_find_deltas(spec, 0.5);
    REQUIRE(dr.roots.size() == 1);
    // as p -> 0 the positive root approaches the reflected interarrival rate
    CHECK(std::abs(dr.roots[0] - Complex(2.0)) < 1e-6);
}

TEST_CASE("unit-atom transform: normalization and root cancellation") {
    ModelSpec spec = mixed_spec(1.0, 0.4, 2.0, 1.0, 0.0);
    for (double r : {0.3, 0.6}) {
        CoeffVector cv = m2_transient_coeffs_a1(spec, r);
        CHECK(m2_transient_lst_a1(spec, r, Complex(0.0), cv).real() ==
              doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-9));
        // numerator vanishes at each right-half-plane root
        DeltaRoots dr = m2_find_deltas(spec, r);
        Poly dy = spec.y_den();
        for (Complex d : dr.roots) {
            Complex num = dy(d) * std::exp(-d * spec.w0);
            Complex dk = 1.0;
            for (const Complex& ak : cv.coeffs) {
                num += ak * dk;
                dk *= d;
            }
            CHECK(std::abs(num) <= 1e-7 * (1.0 + dy.max_abs_coeff()));
        }
        // evaluation right at a root goes through the deflated form
        Complex at_root = m2_transient_lst_a1(spec, r, dr.roots[0], cv);
        Complex nearby = m2_transient_lst_a1(spec, r, dr.roots[0] + Complex(1e-4), cv);
        CHECK(std::abs(at_root - nearby) < 1e-2);
    }
}

TEST_CASE("unit-atom solver degenerates to the purely negative model") {
    double r = 0.5;
    double a0 = 1.0, a1 = 5.0 / 9.0;  // closed form for the negative-atom spec at r = 1/2
    double prev_err = 1e300;
    for (double p : {1e-3, 1e-4, 1e-5, 1e-6}) {
        ModelSpec m2spec = mixed_spec(1.0, p, 1.0, 1.0);
        CoeffVector cv2 = m2_transient_coeffs_a1(m2spec, r);
        double worst = 0.0;
        for (double s : {0.5, 2.0, 3.0}) {
            double expect = 1.0 + (a0 + a1 * s) / (1.0 + s);
            worst = std::max(worst,
                             std::abs(m2_transient_lst_a1(m2spec, r, Complex(s), cv2).real() -
                                      expect));
        }
        CHECK(worst < prev_err);
        prev_err = worst;
    }
    CHECK(prev_err < 1e-6);  // residual error is O(p)
}

TEST_CASE("series transform: normalization, degenerate limits") {
    ModelSpec spec = mixed_spec(0.5, 0.3, 2.0, 1.0, 0.0);
    double r = 0.5;
    SeriesControl ctl;
    CoeffVector cv = m2_transient_coeffs_alt(spec, r, {}, ctl);
    SeriesControl ectl;
    CHECK(m2_transient_lst_alt(spec, r, Complex(0.0), cv, ectl).real() ==
          doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-9));

    // r -> 0: transform collapses to e^{-s w0}
    ModelSpec shifted = mixed_spec(0.5, 0.3, 2.0, 1.0, 1.2);
    SeriesControl sctl;
    CoeffVector tiny = m2_transient_coeffs_alt(shifted, 1e-9, {}, sctl);
    for (double s : {0.5, 1.0})
        CHECK(m2_transient_lst_alt(shifted, 1e-9, Complex(s), tiny, sctl).real() ==
              doctest::Approx(std::exp(-s * 1.2)).epsilon(1e-7));
}

TEST_CASE("series truncation control is honest") {
    ModelSpec spec = mixed_spec(0.5, 0.3, 2.0, 1.0, 0.0);
    double r = 0.6;
    SeriesControl ctl;
    CoeffVector cv = m2_transient_coeffs_alt(spec, r, {}, ctl);
    SeriesControl loose;
    loose.tail_tol = 1e-6;
    Complex v1 = m2_transient_lst_alt(spec, r, Complex(1.0), cv, loose);
    double reported = loose.tail_bound;
    SeriesControl tight;
    tight.tail_tol = 1e-14;
    Complex v2 = m2_transient_lst_alt(spec, r, Complex(1.0), cv, tight);
    CHECK(std::abs(v1 - v2) <= reported + 1e-13);
    CHECK(tight.achieved_terms >= loose.achieved_terms);
}

TEST_CASE("transform identity on the imaginary axis") {
    QuadRule rule;
    for (double a : {1.0, 0.5}) {
        ModelSpec spec = mixed_spec(a, 0.35, 1.5, 1.0, 0.4);
        bool unit = a == 1.0;
        for (double r : {0.3, 0.7}) {
            SeriesControl ctl;
            CoeffVector cv = unit ? m2_transient_coeffs_a1(spec, r)
                                  : m2_transient_coeffs_alt(spec, r, rule, ctl);
            auto psi = [&](Complex s) {
                SeriesControl e;
                return unit ? m2_transient_lst_a1(spec, r, s, cv)
                            : m2_transient_lst_alt(spec, r, s, cv, e);
            };
            // Psi(r,0) = 1/(1-r) and conjugate symmetry on the axis
            CHECK(std::abs(psi(Complex(0.0)) - 1.0 / (1.0 - r)) < 1e-8);
            for (double t : {0.3, 0.9, 1.7}) {
                Complex up = psi(Complex(0.0, t)), dn = psi(Complex(0.0, -t));
                CHECK(std::abs(up - std::conj(dn)) < 1e-8);
                CHECK(std::abs(up) <= 1.0 / (1.0 - r) + 1e-8);
            }
        }
    }
}

TEST_CASE("unit-atom transform matches the geometric-epoch oracle") {
    ModelSpec spec = mixed_spec(1.0, 0.4, 2.0, 1.0, 0.0);
    double r = 0.5;
    CoeffVector cv = m2_transient_coeffs_a1(spec, r);
    SimConfig cfg;
    cfg.replications = 40000;
    cfg.seed = 21;
    for (double s : {0.5, 1.0}) {
        double analytic = (1.0 - r) * m2_transient_lst_a1(spec, r, Complex(s), cv).real();
        SimEstimate est = estimate_geometric_transform(spec, r, s, cfg);
        CHECK(std::abs(est.value - analytic) < 4.0 * est.std_error);
    }
}

TEST_CASE("series transform matches the geometric-epoch oracle") {
    ModelSpec spec = mixed_spec(0.5, 0.3, 2.0, 1.0, 0.0);
    double r = 0.5;
    SeriesControl ctl;
    CoeffVector cv = m2_transient_coeffs_alt(spec, r, {}, ctl);
    SimConfig cfg;
    cfg.replications = 40000;
    cfg.seed = 23;
    for (double s : {0.5, 1.0}) {
        SeriesControl e;
        double analytic = (1.0 - r) * m2_transient_lst_alt(spec, r, Complex(s), cv, e).real();
        SimEstimate est = estimate_geometric_transform(spec, r, s, cfg);
        CHECK(std::abs(est.value - analytic) < 4.0 * est.std_error);
    }
}

TEST_CASE("stationary law: normalization, atom, oracle agreement") {
    for (double a : {1.0, 0.5}) {
        ModelSpec spec = mixed_spec(a, a == 1.0 ? 0.4 : 0.3, 2.0, 1.0, 0.0);
        M2Stationary st = m2_stationary(spec);
        SeriesControl ctl;
        CHECK(m2_stationary_lst(spec, Complex(0.0), st.coeffs, ctl).real() ==
              doctest::Approx(1.0).epsilon(1e-8));
        CHECK(st.atom > 0.0);
        CHECK(st.atom < 1.0);
        SimConfig cfg;
        cfg.replications = 4000;
        cfg.path_length = 3000;
        cfg.burn_in = 300;
        cfg.seed = 31;
        auto est = estimate_stationary(spec, cfg, {1.0});
        CHECK(std::abs(est.atom.value - st.atom) < 4.0 * est.atom.std_error);
        SeriesControl e2;
        double phi1 = m2_stationary_lst(spec, Complex(1.0), st.coeffs, e2).real();
        CHECK(std::abs(est.lst.at(1.0).value - phi1) < 4.0 * est.lst.at(1.0).std_error);
    }
}

TEST_CASE("expanding multipliers are rejected") {
    ModelSpec spec = mixed_spec(1.5, 0.3, 2.0, 1.0);
    SeriesControl ctl;
    CHECK_THROWS_AS(m2_transient_coeffs_alt(spec, 0.5, {}, ctl), UnsupportedParameter);
    CHECK_THROWS_AS(m2_stationary(spec), UnsupportedParameter);
}
