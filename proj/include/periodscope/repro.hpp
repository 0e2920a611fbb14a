// Hard-coded reproductions of two worked families with closed-form
// cross-checks.
//
// KM family (rational mass, p = 3/2): f = -3x/(1+x^2), g = x + a3 x^3, so
// mu = (1+x^2)^{-3} and
//
//   V  = x^2 (1 + (1+a3) x^2 / 2) / (2 (1+x^2)^2),
//   V' = x (1 + a3 x^2) / (1+x^2)^3,
//   u  = V/V'^2 = (1+x^2)^4 (1 + (1+a3) x^2 / 2) / (2 (1 + a3 x^2)^2),
//
// with u' = x u K, u'' = u (K + x^2 K^2 + x K'). The monotonicity function
// reduces to the sign of an even degree-10 polynomial with coefficients
// C0..C5 in a3; all six vanish at a3 = 1 (the isochronous point).
//
// Sect-3 family: for even positive w(x), the system xdot = w(x) y,
// ydot = -U(x) with U = int_0^x ds/w is the pair (f, g) = (-w'/w, w U);
// then mu = (w(0)/w)^2, V = (w(0) U)^2 / 2, and N == 0 identically.
#pragma once

#include <span>
#include <vector>

#include "periodscope/lienard.hpp"

namespace pscope::repro {

struct KMClosedForms {
    double V;
    double Vp;
    double u;
    double K;
    double M_over_u;
};

KMClosedForms km_closed_forms(double a3, double x);

struct KMCoefficients {
    double c0, c1, c2, c3, c4, c5;
};

KMCoefficients km_coefficients(double a3);

// Compares M/u times the even denominator pattern
// (1+x^2)^2 (1+a3 x^2)^2 (1+(1+a3)x^2/2)^2 against the C-polynomial, after
// fitting the single positive prefactor by least squares (the prefactor is
// reported; the sign claims are independent of it).
struct KMPolynomialCheck {
    double prefactor;
    double max_abs_discrepancy;
};

KMPolynomialCheck km_polynomial_check(double a3, std::span<const double> grid);

// 64 points on [0.05, 2.5], skipping any point with |1 + a3 x^2| < 1e-6.
std::vector<double> km_default_grid(double a3);

// The KM system as a LienardSystem (expression-backed).
LienardSystem km_system(double a3, Interval domain = {}, double quad_tol = 1e-10);

// Builds the sect-3 system for an even positive w; throws NotEven /
// NotPositive if the hypotheses fail, and cross-checks the closed forms of
// mu and V against the generic quadrature path at construction.
LienardSystem sect3_family(const Expr& w, Interval domain = {}, double quad_tol = 1e-10);

}  // namespace pscope::repro
