// Position-dependent-mass system built from the pair (f, g) of the
// quadratic-velocity equation x'' + f(x) x'^2 + g(x) = 0:
//
//   F(x) = int_0^x f,   mu(x) = exp(2 F(x)),   V(x) = int_0^x mu g,
//
// with the Hamiltonian H = p^2/(2 mu) + V. Construction validates that the
// origin is a nondegenerate center (g(0) = 0, g'(0) > 0) and precomputes
// checkpointed antiderivative caches for F, V and int_0^x e^F over the whole
// working domain, so the object is immutable afterwards and safe to share
// across threads.
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "periodscope/expr.hpp"
#include "periodscope/jet.hpp"
#include "periodscope/quadrature.hpp"

namespace pscope {

struct Interval {
    double lo = -10.0;
    double hi = 10.0;
};

// A smooth scalar field: jet of the function at x up to the given order.
using JetFn = std::function<Jet(double x, int order)>;

JetFn field_from_expr(Expr e);

// Checkpointed antiderivative A(x) = int_0^x integrand. Prefix integrals are
// precomputed on a fixed grid at construction; evaluation integrates only
// the short tail from the nearest checkpoint toward zero.
class AntiderivativeCache {
  public:
    AntiderivativeCache(std::function<double(double)> integrand, Interval dom,
                        double step, double panel_tol);

    double operator()(double x) const;
    double step() const { return step_; }

  private:
    std::function<double(double)> integrand_;
    Interval dom_;
    double step_;
    double panel_tol_;
    std::vector<double> pos_;  // A(k*step), k = 0..n_pos
    std::vector<double> neg_;  // A(-k*step)
};

// Turning points of the orbit at a given energy, together with the
// admissible ceiling E* found for the system.
struct OrbitWindow {
    double e_star;
    double energy;
    double x1;  // < 0
    double x2;  // > 0
};

class LienardSystem {
  public:
    LienardSystem(Expr f, Expr g, Interval domain = {}, double quad_tol = 1e-10);
    LienardSystem(JetFn f, JetFn g, Interval domain = {}, double quad_tol = 1e-10);

    Interval domain() const { return dom_; }
    double quad_tol() const { return tol_; }

    double f_value(double x) const { return f_(x, 0).value(); }
    Jet f_jet(double x, int order) const { return f_(x, order); }
    double g_value(double x) const { return g_(x, 0).value(); }
    Jet g_jet(double x, int order) const { return g_(x, order); }

    // F(x) = int_0^x f, from the checkpointed cache.
    double antiderivative_F(double x) const;

    // mu = exp(2F); jet derivatives are analytic from the jet of f
    // (mu' = 2 f mu and so on), never finite differences of the quadrature.
    double mass(double x) const;
    Jet mass_jet(double x, int order) const;

    // V(x) = int_0^x mu g; jet derivatives from V' = mu g.
    double potential(double x) const;
    Jet potential_jet(double x, int order) const;

    // int_0^x e^F, used by the isochronicity guards.
    double exp_F_integral(double x) const;

    double energy_ceiling() const { return e_star_; }
    OrbitWindow turning_points(double energy) const;

    // H(x, p) = p^2 / (2 mu) + V.
    double hamiltonian(double x, double p) const;

    double v_second_at_origin() const { return vpp0_; }

  private:
    void validate_and_build();
    void check_domain(double x) const;
    double scan_side_ceiling(double direction) const;

    JetFn f_, g_;
    Interval dom_;
    double tol_;
    double vpp0_ = 0.0;
    double e_star_ = 0.0;
    std::shared_ptr<const AntiderivativeCache> F_, V_, IeF_;
};

}  // namespace pscope
