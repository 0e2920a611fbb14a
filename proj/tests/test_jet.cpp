#include <doctest.h>

#include <cmath>
#include <random>

#include "periodscope/jet.hpp"

using namespace pscope;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace

TEST_CASE("variable and constant jets") {
    const Jet x = Jet::variable(3.0, 2);
    CHECK(x.value() == 3.0);
    CHECK(x.coeff(1) == 1.0);
    CHECK(x.coeff(2) == 0.0);
    const Jet c = Jet::constant(7.5, 3.0, 2);
    CHECK(c.value() == 7.5);
    CHECK(c.derivative(1) == 0.0);
}

TEST_CASE("polynomial jets are exact") {
    // (x^2)' = 2x, (x^2)'' = 2 at x = 3: coefficients (9, 6, 1)
    const Jet x = Jet::variable(3.0, 2);
    const Jet p = x * x;
    CHECK(p.coeff(0) == 9.0);
    CHECK(p.coeff(1) == 6.0);
    CHECK(p.coeff(2) == 1.0);

    // degree-4 polynomial at order 4, all coefficients exact
    const Jet y = Jet::variable(2.0, 4);
    const Jet q = y * y * y * y - 3.0 * y * y + 1.0;
    CHECK(q.coeff(0) == 16.0 - 12.0 + 1.0);
    CHECK(q.derivative(1) == 4.0 * 8.0 - 6.0 * 2.0);
    CHECK(q.derivative(2) == 12.0 * 4.0 - 6.0);
    CHECK(q.derivative(3) == 24.0 * 2.0);
    CHECK(q.derivative(4) == 24.0);
}

TEST_CASE("exp jet at 0") {
    const Jet e = jet_exp(Jet::variable(0.0, 4));
    CHECK(e.coeff(0) == 1.0);
    CHECK(e.coeff(1) == 1.0);
    CHECK(e.coeff(2) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(e.coeff(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(e.coeff(4) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
}

TEST_CASE("division and integer powers") {
    const Jet x = Jet::variable(2.0, 3);
    const Jet r = 1.0 / x;
    CHECK(r.value() == 0.5);
    CHECK(r.derivative(1) == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(r.derivative(2) == doctest::Approx(0.25).epsilon(1e-15));

    const Jet p = jet_pow_int(x, -2);
    CHECK(p.value() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(p.derivative(1) == doctest::Approx(-2.0 / 8.0).epsilon(1e-14));

    const Jet z = jet_pow_int(Jet::variable(-2.0, 2), 3);  // negative base is fine
    CHECK(z.value() == -8.0);
    CHECK(z.derivative(1) == 12.0);

    CHECK_THROWS_AS((void)(x / Jet::constant(0.0, 2.0, 3)), DomainError);
}

TEST_CASE("real power recurrence matches closed forms") {
    const Jet x = Jet::variable(1.7, 3);
    const Jet p = jet_pow(x, 1.5);
    CHECK(rel_err(p.value(), std::pow(1.7, 1.5)) < 1e-15);
    CHECK(rel_err(p.derivative(1), 1.5 * std::pow(1.7, 0.5)) < 1e-14);
    CHECK(rel_err(p.derivative(2), 0.75 * std::pow(1.7, -0.5)) < 1e-14);
    CHECK_THROWS_AS((void)jet_pow(Jet::variable(-1.0, 2), 0.5), DomainError);
}

TEST_CASE("elementary functions against 4th-order finite differences") {
    // derivative orders 1..3 of each function of a mildly composed argument
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ux(-0.8, 0.8);

    using Fn = Jet (*)(const Jet&);
    struct Case {
        Fn fn;
        double (*ref)(double);
        double lo, hi;  // safe evaluation interval
    };
    const Case cases[] = {
        {jet_sin, std::sin, -1.5, 1.5},   {jet_cos, std::cos, -1.5, 1.5},
        {jet_tan, std::tan, -0.9, 0.9},   {jet_atan, std::atan, -1.5, 1.5},
        {jet_exp, std::exp, -1.5, 1.5},   {jet_ln, std::log, 0.3, 3.0},
        {jet_sqrt, std::sqrt, 0.3, 3.0},  {jet_sinh, std::sinh, -1.5, 1.5},
        {jet_cosh, std::cosh, -1.5, 1.5}, {jet_tanh, std::tanh, -1.5, 1.5},
    };

    for (const auto& c : cases) {
        for (int trial = 0; trial < 20; ++trial) {
            std::uniform_real_distribution<double> uin(c.lo, c.hi);
            const double x = uin(rng);
            const Jet j = c.fn(Jet::variable(x, 4));

            const double h1 = 1e-3, h2 = 2.5e-3, h3 = 5e-3;
            const auto f = c.ref;
            const double d1 =
                (f(x - 2 * h1) - 8 * f(x - h1) + 8 * f(x + h1) - f(x + 2 * h1)) / (12 * h1);
            const double d2 = (-f(x - 2 * h2) + 16 * f(x - h2) - 30 * f(x) + 16 * f(x + h2) -
                               f(x + 2 * h2)) /
                              (12 * h2 * h2);
            const double d3 = (-13.0 * (f(x + h3) - f(x - h3)) + 8.0 * (f(x + 2 * h3) - f(x - 2 * h3)) -
                               (f(x + 3 * h3) - f(x - 3 * h3))) /
                              (8 * h3 * h3 * h3);

            CHECK(std::abs(j.derivative(1) - d1) <=
                  1e-8 + 1e-6 * std::max(std::abs(d1), std::abs(j.derivative(1))));
            CHECK(std::abs(j.derivative(2) - d2) <=
                  1e-8 + 1e-6 * std::max(std::abs(d2), std::abs(j.derivative(2))));
            CHECK(std::abs(j.derivative(3) - d3) <=
                  1e-6 + 1e-5 * std::max(std::abs(d3), std::abs(j.derivative(3))));
        }
    }
}

TEST_CASE("chain rule through composition") {
    // d/dx sin(x^2) = 2x cos(x^2), second derivative 2cos - 4x^2 sin
    const double x = 0.7;
    const Jet j = jet_sin(Jet::variable(x, 2) * Jet::variable(x, 2));
    CHECK(rel_err(j.derivative(1), 2 * x * std::cos(x * x)) < 1e-14);
    CHECK(rel_err(j.derivative(2), 2 * std::cos(x * x) - 4 * x * x * std::sin(x * x)) < 1e-14);
}

TEST_CASE("derivative and integral jets") {
    const Jet x = Jet::variable(2.0, 4);
    const Jet p = x * x * x;  // x^3
    const Jet dp = p.derivative_jet();
    CHECK(dp.order() == 3);
    CHECK(dp.value() == 12.0);      // 3x^2
    CHECK(dp.derivative(1) == 12.0);  // 6x

    const Jet back = Jet::integral_of(dp, p.value());
    for (int k = 0; k <= 4; ++k) CHECK(back.coeff(k) == doctest::Approx(p.coeff(k)).epsilon(1e-15));
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS((void)jet_ln(Jet::variable(-1.0, 2)), DomainError);
    CHECK_THROWS_AS((void)jet_ln(Jet::variable(0.0, 2)), DomainError);
    CHECK_THROWS_AS((void)jet_sqrt(Jet::variable(-0.5, 2)), DomainError);
    CHECK_THROWS_AS((void)jet_pow_int(Jet::constant(0.0, 0.0, 2), -1), DomainError);
}
