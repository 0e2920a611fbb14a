#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "periodscope/criteria.hpp"
#include "periodscope/period.hpp"

using namespace pscope;

namespace {

LienardSystem harmonic() { return LienardSystem(parse("0"), parse("x")); }

LienardSystem km(double a3) {
    char g[64];
    std::snprintf(g, sizeof(g), "x + %.17g*x^3", a3);
    return LienardSystem(parse("-3*x/(1+x^2)"), parse(g));
}

LienardSystem duffing() { return LienardSystem(parse("0"), parse("x + x^3"), Interval{-4.0, 4.0}); }

// closed form of N = u'' for the duffing system (mu = 1)
double duffing_N(double x) {
    const double x2 = x * x;
    return 3.0 * (x2 * x2 + 4.0 * x2 - 1.0) / (2.0 * std::pow(1.0 + x2, 4));
}

}  // namespace

TEST_CASE("N vanishes for the harmonic oscillator") {
    const LienardSystem sys = harmonic();
    const NFunction nf(sys);
    for (double x : {1e-5, 1e-3, 0.2, 0.8, -0.6, -2e-5}) {
        const NTerms t = nf.components(x);
        CHECK(std::abs(t.total) <= 1e-9 * std::max(t.magnitude(), 1.0));
    }
}

TEST_CASE("N matches the closed form on a conservative cubic system") {
    const LienardSystem sys = duffing();
    const NFunction nf(sys);
    // frozen closed-form values of u'' = 3(x^4+4x^2-1)/(2(1+x^2)^4)
    CHECK(nf(0.1) == doctest::Approx(-1.383667549003583).epsilon(1e-9));
    CHECK(nf(1.0) == doctest::Approx(0.375).epsilon(1e-9));
    // series path below 1e-4 agrees with the closed form and is continuous
    // across the seam
    CHECK(nf(5e-5) == doctest::Approx(duffing_N(5e-5)).epsilon(1e-9));
    CHECK(nf(-7e-5) == doctest::Approx(duffing_N(-7e-5)).epsilon(1e-9));
    CHECK(nf(1.0001e-4) == doctest::Approx(nf(0.9999e-4)).epsilon(1e-7));
    // u(0) = 1/(2 V''(0)) = 1/2: N(0) = u''(0) sqrt(mu) + 2 u(0) (sqrt mu)''
    // reduces to u''(0) = -3/2 here
    CHECK(nf(0.0) == doctest::Approx(-1.5).epsilon(1e-10));
}

TEST_CASE("N vanishes identically on the section-3 isochronous family") {
    const LienardSystem sys(parse("-2*x/(1+x^2)"), parse("(1+x^2)*atan(x)"));
    const NFunction nf(sys);
    for (double x : {3e-5, 1e-3, 0.1, 0.5, 1.0, -0.8}) {
        const NTerms t = nf.components(x);
        CHECK(std::abs(t.total) <= 1e-9 * std::max(t.magnitude(), 1e-12));
    }
}

TEST_CASE("G two ways: expanded A/B/C form equals (2/h')N") {
    const LienardSystem h = harmonic();
    const auto [a0, b0] = G_two_ways(h, 0.5);
    CHECK(std::abs(a0) < 1e-10);
    CHECK(std::abs(b0) < 1e-10);

    const LienardSystem sys = km(0.96);
    const auto [a1, b1] = G_two_ways(sys, 0.3);
    CHECK(a1 == doctest::Approx(b1).epsilon(1e-8));

    CHECK_THROWS_AS((void)G_two_ways(sys, 1e-6), DomainError);
}

TEST_CASE("G identity on random conservative polynomial systems") {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> uc(-0.4, 0.4);
    for (int trial = 0; trial < 10; ++trial) {
        char g[96];
        std::snprintf(g, sizeof(g), "x + %.17g*x^3 + %.17g*x^5", uc(rng), 0.1 * uc(rng));
        const LienardSystem sys(parse("0"), parse(g), Interval{-2.0, 2.0});
        const double e = 0.5 * sys.energy_ceiling();
        const OrbitWindow w = sys.turning_points(e);
        double g_scale = 0.0;
        std::vector<std::pair<double, double>> vals;
        for (int i = 1; i <= 20; ++i) {
            const double x = w.x1 + (w.x2 - w.x1) * i / 21.0;
            if (std::abs(x) < 1e-3) continue;
            const auto [ga, gs] = G_two_ways(sys, x);
            vals.emplace_back(ga, gs);
            g_scale = std::max({g_scale, std::abs(ga), std::abs(gs)});
        }
        for (const auto& [ga, gs] : vals) {
            if (std::max(std::abs(ga), std::abs(gs)) >= 1e-6 * g_scale)
                CHECK(std::abs(ga - gs) <= 1e-8 * std::max(std::abs(ga), std::abs(gs)));
            else
                CHECK(std::abs(ga - gs) <= 1e-10 * std::max(g_scale, 1e-30));
        }
    }
}

TEST_CASE("monotonicity classification of the rational-mass family") {
    CHECK(classify_monotonicity(km(1.055), 0.05).verdict == Monotonicity::Decreasing);
    CHECK(classify_monotonicity(km(1.001), 0.05).verdict == Monotonicity::Decreasing);
    CHECK(classify_monotonicity(km(0.999), 0.05).verdict == Monotonicity::Increasing);
    CHECK(classify_monotonicity(km(0.96), 0.05).verdict == Monotonicity::Increasing);
    CHECK(classify_monotonicity(km(1.0), 0.05).verdict == Monotonicity::Isochronous);
    CHECK(classify_monotonicity(harmonic(), 1.0).verdict == Monotonicity::Isochronous);
}

TEST_CASE("indefinite verdict when N changes sign inside the window") {
    // duffing N flips sign at x ~ 0.4859; with E = 0.2 the window reaches
    // past it on both sides
    const MonotonicityReport rep = classify_monotonicity(duffing(), 0.2);
    CHECK(rep.verdict == Monotonicity::Indefinite);
    CHECK(rep.min_N < 0.0);
    CHECK(rep.max_N > 0.0);
    // small window stays on the concave-down side: decreasing period
    CHECK(classify_monotonicity(duffing(), 0.05).verdict == Monotonicity::Decreasing);
}

TEST_CASE("monotonicity report bookkeeping") {
    const MonotonicityReport rep = classify_monotonicity(km(0.96), 0.05, 32, 1e-9);
    CHECK(rep.samples.size() == 32);
    CHECK(rep.tol_iso == 1e-9);
    CHECK(rep.scale > 0.0);
    CHECK(rep.min_N <= rep.max_N);
    CHECK(rep.energy == 0.05);
    CHECK_THROWS_AS((void)classify_monotonicity(km(0.96), 0.05, 8), Error);  // too few samples
}

TEST_CASE("isochrony residual") {
    // harmonic: P = 1, R == 0
    const LienardSystem h = harmonic();
    for (double x : {0.1, 0.7, -1.0}) CHECK(isochrony_residual(h, x) == 0.0);

    // conservative cubic: hand value R(1) = 5*4*36 - 3*16*6 = 432
    const LienardSystem d = duffing();
    CHECK(isochrony_residual(d, 1.0) == doctest::Approx(432.0).epsilon(1e-12));

    // the KM family at a3 = 1 satisfies g' + f g = 1 (P == 1), so R == 0
    const LienardSystem k = km(1.0);
    for (double x : {0.3, 1.0, -0.9}) {
        const auto [r, scale] = isochrony_residual_scaled(k, x);
        CHECK(std::abs(r) <= 1e-12 * scale);
    }
}

TEST_CASE("isochrony guards") {
    // harmonic: P = 1, P' = 0 -> W = 3, C = 0, 2D = 1
    const GuardValues gv = isochrony_guards(harmonic(), 0.8);
    CHECK(gv.W == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(gv.C == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(2.0 * gv.D == doctest::Approx(1.0).epsilon(1e-12));
    // guard2 = g e^F + 2P int e^F = x + 2x = 3x for the harmonic case
    CHECK(gv.guard2 == doctest::Approx(3.0 * 0.8).epsilon(1e-12));

    // conservative cubic: W(1) = 3*16 - 2*6 = 36
    CHECK(isochrony_guards(duffing(), 1.0).W == doctest::Approx(36.0).epsilon(1e-13));
}

TEST_CASE("isochrony report on the isochronous and non-isochronous sides") {
    const IsochronyReport yes = isochrony_report(km(1.0), 0.2);
    CHECK(yes.verdict);
    CHECK(yes.max_abs_residual <= 1e-9 * yes.residual_scale);
    CHECK(yes.C_spread <= 1e-8);
    CHECK(yes.D_spread <= 1e-8);
    CHECK(yes.min_abs_W > 0.0);

    const IsochronyReport no = isochrony_report(km(0.9), 0.2);
    CHECK(!no.verdict);
    CHECK(no.max_abs_residual > 1e-6 * no.residual_scale);

    const IsochronyReport h = isochrony_report(harmonic(), 1.0);
    CHECK(h.verdict);

    // section-3 family: P == 1 again
    const LienardSystem s3(parse("-2*x/(1+x^2)"), parse("(1+x^2)*atan(x)"));
    CHECK(isochrony_report(s3, 0.5).verdict);
}

TEST_CASE("schaaf criterion in the conservative case") {
    const LienardSystem h = harmonic();
    for (double x : {0.2, 1.5}) CHECK(schaaf_value(h, x) == 0.0);

    const LienardSystem d = duffing();
    CHECK(schaaf_value(d, 1.0) == doctest::Approx(432.0).epsilon(1e-13));

    // quadratic g: 5 g' g''^2 - 3 g'^2 g''' = 20(1+2x)
    const LienardSystem q(parse("0"), parse("x + x^2"), Interval{-0.45, 10.0});
    for (double x : {0.0, 0.3, -0.3})
        CHECK(schaaf_value(q, x) == doctest::Approx(20.0 * (1.0 + 2.0 * x)).epsilon(1e-13));

    CHECK_THROWS_AS((void)schaaf_value(km(1.0), 0.5), NotConservative);
}

TEST_CASE("conservative reduction: residual equals the schaaf combination exactly") {
    const LienardSystem d = duffing();
    const LienardSystem q(parse("0"), parse("x + x^2"), Interval{-0.45, 10.0});
    for (double x : {0.1, 0.5, 1.0, 1.9, -0.2}) {
        CHECK(isochrony_residual(d, x) == schaaf_value(d, x));
        if (x > -0.4) CHECK(isochrony_residual(q, x) == schaaf_value(q, x));
    }
}

TEST_CASE("theorem-1 consistency: verdicts match measured period ordering") {
    // increasing side
    const LienardSystem inc = km(0.96);
    const double e = 0.05;
    REQUIRE(classify_monotonicity(inc, e).verdict == Monotonicity::Increasing);
    double prev = 0.0;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
        const double t = period_theta_quadrature(inc, frac * e).period;
        CHECK(t >= prev);
        prev = t;
    }
    // decreasing side
    const LienardSystem dec = km(1.055);
    REQUIRE(classify_monotonicity(dec, e).verdict == Monotonicity::Decreasing);
    prev = 1e12;
    for (double frac : {0.25, 0.5, 0.75, 1.0}) {
        const double t = period_theta_quadrature(dec, frac * e).period;
        CHECK(t <= prev);
        prev = t;
    }
}

TEST_CASE("P == 1 systems are isochronous end to end") {
    // g' + f g = 1 holds for the KM family at a3 = 1; residual vanishes and
    // the ODE oracle sees a flat period across energies
    const LienardSystem k = km(1.0);
    const IsochronyReport rep = isochrony_report(k, 0.2);
    CHECK(rep.verdict);
    const double t1 = period_ode_return(k, 0.05).period;
    const double t2 = period_ode_return(k, 0.1).period;
    const double t3 = period_ode_return(k, 0.2).period;
    CHECK(std::abs(t1 - t2) <= 1e-5 * t1);
    CHECK(std::abs(t2 - t3) <= 1e-5 * t2);
}
