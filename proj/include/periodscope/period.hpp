// The period function T(E) of the center at the origin, computed three
// independent ways, plus its energy derivative:
//
//   T = sqrt(2) int_{x1*}^{x2*} sqrt(mu) dx / sqrt(E - V)        (x form)
//   T = sqrt(2) int_{-pi/2}^{pi/2} sqrt(mu(u)) / h'(u) dtheta,
//       u = h^{-1}(sqrt(E) sin theta), h = sign(x) sqrt(V)       (theta form)
//   T = return time of the Hamiltonian flow to {p = 0, x > 0}    (ODE oracle)
//
//   dT/dE = (1/sqrt(2)) int G(u) cos^2 theta dtheta, G = 2 N / h'
//
// The x-form handles the inverse-square-root endpoint singularities by the
// substitution x = x2* - t^2 (resp. x1* + t^2); the theta form is regular
// throughout, with ratios near x = 0 evaluated from Taylor series at the
// origin.
#pragma once

#include <array>

#include "periodscope/lienard.hpp"

namespace pscope {

enum class PeriodMethod {
    XQuadrature,
    ThetaQuadrature,
    OdeReturn,
    DerivativeQuadrature,
    FiniteDifference,
};

const char* to_string(PeriodMethod m);

struct PeriodSample {
    double energy = 0.0;
    double period = 0.0;
    double dT_dE = 0.0;      // NaN for plain period methods
    PeriodMethod method = PeriodMethod::XQuadrature;
    double est_error = 0.0;  // self-reported estimate, not a bound
};

// Taylor coefficients at the origin of the signed branch function
// h(x) = sign(x) sqrt(V(x)):  h(x) = sum_k c[k] x^{k+1}.
std::array<double, 7> h_series_at_origin(const LienardSystem& sys);

// The increasing map h on [x1*, x2*] with a Newton/bisection inverter.
class BranchInverter {
  public:
    BranchInverter(const LienardSystem& sys, double energy);

    double h(double x) const;
    double h_prime(double x) const;
    double h_second(double x) const;
    double invert(double r) const;  // h(result) = r within 1e-13 * max(1, |r|)
    double sqrt_mass_over_h_prime(double x) const;
    const OrbitWindow& window() const { return win_; }

  private:
    const LienardSystem* sys_;
    OrbitWindow win_;
    std::array<double, 7> hc_;
};

PeriodSample period_x_quadrature(const LienardSystem& sys, double energy);
PeriodSample period_theta_quadrature(const LienardSystem& sys, double energy);
PeriodSample period_ode_return(const LienardSystem& sys, double energy);

// dT/dE by the derivative quadrature; the sample also carries T from the
// theta form (same inverter, second integral).
PeriodSample dT_dE(const LienardSystem& sys, double energy);

// S = (h'' mu - mu' h' / 2) / (h'^3 sqrt(mu)); the integration-by-parts
// companion of the derivative quadrature, exposed for identity tests.
double S_function(const LienardSystem& sys, double x);

}  // namespace pscope
