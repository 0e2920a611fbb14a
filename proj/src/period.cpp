#include "periodscope/period.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "periodscope/criteria.hpp"
#include "periodscope/quadrature.hpp"

namespace pscope {

namespace {

constexpr double kEps0 = 1e-4;        // below this |x| the series paths take over
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kHalfPi = std::numbers::pi / 2.0;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

const char* to_string(PeriodMethod m) {
    switch (m) {
        case PeriodMethod::XQuadrature: return "x-quadrature";
        case PeriodMethod::ThetaQuadrature: return "theta-quadrature";
        case PeriodMethod::OdeReturn: return "ode-return";
        case PeriodMethod::DerivativeQuadrature: return "derivative-quadrature";
        case PeriodMethod::FiniteDifference: return "finite-difference";
    }
    return "?";
}

// h = sign(x) sqrt(V) extends to a smooth increasing function through the
// nondegenerate minimum: with V = x^2 q(x), q(0) = V''(0)/2 > 0, we have
// h = x sqrt(q(x)), and the sqrt-jet of q at 0 gives the coefficients.
std::array<double, 7> h_series_at_origin(const LienardSystem& sys) {
    const Jet v = sys.potential_jet(0.0, 8);
    Jet q = Jet::constant(0.0, 0.0, 6);
    for (int k = 0; k <= 6; ++k) q.set_coeff(k, v.coeff(k + 2));
    const Jet s = jet_sqrt(q);
    std::array<double, 7> c{};
    for (int k = 0; k <= 6; ++k) c[k] = s.coeff(k);
    return c;
}

// ---------------------------------------------------------------------------
// BranchInverter
// ---------------------------------------------------------------------------

BranchInverter::BranchInverter(const LienardSystem& sys, double energy)
    : sys_(&sys), win_(sys.turning_points(energy)), hc_(h_series_at_origin(sys)) {}

double BranchInverter::h(double x) const {
    if (std::abs(x) < kEps0) {
        double s = 0.0;
        for (int k = 6; k >= 0; --k) s = hc_[k] + x * s;
        return x * s;
    }
    const double v = sys_->potential(x);
    return (x > 0 ? 1.0 : -1.0) * std::sqrt(std::max(v, 0.0));
}

double BranchInverter::h_prime(double x) const {
    if (std::abs(x) < kEps0) {
        double s = 0.0;
        for (int k = 6; k >= 0; --k) s = (k + 1) * hc_[k] + x * s;
        return s;
    }
    const Jet v = sys_->potential_jet(x, 1);
    const double sign = x > 0 ? 1.0 : -1.0;
    return sign * v.derivative(1) / (2.0 * std::sqrt(v.value()));
}

double BranchInverter::h_second(double x) const {
    if (std::abs(x) < kEps0) {
        double s = 0.0;
        for (int k = 6; k >= 1; --k) s = (k + 1) * k * hc_[k] + x * s;
        return s;
    }
    const Jet v = sys_->potential_jet(x, 2);
    const double vv = v.value(), vp = v.derivative(1), vpp = v.derivative(2);
    const double sign = x > 0 ? 1.0 : -1.0;
    return sign * (2.0 * vv * vpp - vp * vp) / (4.0 * std::pow(vv, 1.5));
}

double BranchInverter::invert(double r) const {
    if (r == 0.0) return 0.0;
    double a = r > 0 ? 0.0 : win_.x1;
    double b = r > 0 ? win_.x2 : 0.0;
    const double ha = h(a), hb = h(b);
    if (r <= ha) return a;
    if (r >= hb) return b;
    const double tol = 1e-13 * std::max(1.0, std::abs(r));
    // secant through the bracket endpoints as the initial guess
    double x = a + (r - ha) * (b - a) / (hb - ha);
    for (int it = 0; it < 80; ++it) {
        const double fx = h(x) - r;
        if (std::abs(fx) <= tol) return x;
        if (fx > 0.0) b = x; else a = x;
        const double hp = h_prime(x);
        double next = hp != 0.0 ? x - fx / hp : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - x) < 1e-17 * (1.0 + std::abs(x))) return next;
        x = next;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "branch inversion did not converge at r = %.17g", r);
    throw InversionFailure(buf);
}

double BranchInverter::sqrt_mass_over_h_prime(double x) const {
    return std::sqrt(sys_->mass(x)) / h_prime(x);
}

// ---------------------------------------------------------------------------
// Period: singular x-quadrature
// ---------------------------------------------------------------------------

PeriodSample period_x_quadrature(const LienardSystem& sys, double energy) {
    const OrbitWindow win = sys.turning_points(energy);
    const double xm = 0.5 * (win.x1 + win.x2);

    // One side at a time, turning point mapped to t = 0 by x = x* -/+ t^2 so
    // the integrand 2t sqrt(mu)/sqrt(E - V) stays bounded. The side energy is
    // re-anchored to the cached V at the refined turning point: E - V then
    // vanishes exactly at t = 0 instead of inheriting the root residual,
    // which would otherwise bias T by its square root.
    auto side = [&](double x_star, double inward) {
        const double e_side = sys.potential(x_star);
        const double vp_star = std::abs(sys.potential_jet(x_star, 1).derivative(1));
        auto f = [&](double t) {
            const double x = x_star + inward * t * t;
            double d = e_side - sys.potential(x);
            if (d <= 0.0) d = vp_star * t * t;  // roundoff right at the endpoint
            return 2.0 * t * std::sqrt(sys.mass(x) / d);
        };
        return quad::gl64_adaptive(f, 0.0, std::sqrt(std::abs(x_star - xm)));
    };

    const quad::Result right = side(win.x2, -1.0);
    const quad::Result left = side(win.x1, +1.0);
    PeriodSample s;
    s.energy = energy;
    s.period = kSqrt2 * (right.value + left.value);
    s.dT_dE = kNaN;
    s.method = PeriodMethod::XQuadrature;
    s.est_error = kSqrt2 * (right.abs_error + left.abs_error);
    return s;
}

// ---------------------------------------------------------------------------
// Period: regular theta-quadrature
// ---------------------------------------------------------------------------

PeriodSample period_theta_quadrature(const LienardSystem& sys, double energy) {
    const BranchInverter inv(sys, energy);
    const double sqrt_e = std::sqrt(energy);
    auto f = [&](double theta) {
        return inv.sqrt_mass_over_h_prime(inv.invert(sqrt_e * std::sin(theta)));
    };
    const quad::Result r = quad::gl64_adaptive(f, -kHalfPi, kHalfPi);
    PeriodSample s;
    s.energy = energy;
    s.period = kSqrt2 * r.value;
    s.dT_dE = kNaN;
    s.method = PeriodMethod::ThetaQuadrature;
    s.est_error = kSqrt2 * r.abs_error;
    return s;
}

// ---------------------------------------------------------------------------
// Period: ODE return-time oracle
// ---------------------------------------------------------------------------

namespace {

using OdeState = std::array<double, 2>;  // (x, p)

struct HamiltonianRhs {
    const LienardSystem* sys;
    void operator()(const OdeState& y, OdeState& dydt, double) const {
        const Jet mu = sys->mass_jet(y[0], 1);
        const double m = mu.value();
        const double mp = mu.derivative(1);
        const double p = y[1];
        dydt[0] = p / m;
        dydt[1] = mp * p * p / (2.0 * m * m) - m * sys->g_value(y[0]);
    }
};

using ErrorStepper = boost::numeric::odeint::runge_kutta_fehlberg78<OdeState>;
using Controlled = boost::numeric::odeint::controlled_runge_kutta<ErrorStepper>;

// Advances (t, y) to exactly t_target with the controlled stepper.
void advance_to(Controlled& stepper, const HamiltonianRhs& rhs, OdeState& y, double& t,
                double t_target, double dt_hint) {
    namespace od = boost::numeric::odeint;
    double dt = dt_hint;
    int guard = 0;
    while (t < t_target - 1e-16 * (1.0 + t_target)) {
        double trial = std::min(dt, t_target - t);
        (void)stepper.try_step(rhs, y, t, trial);
        dt = trial;  // on rejection try_step already shrank the trial size
        if (++guard > 2000000) throw IntegrationFailure("time stepping stalled");
    }
}

// Root of the cubic Hermite interpolant of p(t) over [t0, t1].
double hermite_root(double t0, double p0, double dp0, double t1, double p1, double dp1) {
    const double h = t1 - t0;
    auto value = [&](double s) {
        const double s2 = s * s, s3 = s2 * s;
        return p0 * (2 * s3 - 3 * s2 + 1) + h * dp0 * (s3 - 2 * s2 + s) +
               p1 * (-2 * s3 + 3 * s2) + h * dp1 * (s3 - s2);
    };
    double a = 0.0, b = 1.0, fa = value(a);
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = value(m);
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return t0 + 0.5 * (a + b) * h;
}

}  // namespace

PeriodSample period_ode_return(const LienardSystem& sys, double energy) {
    namespace od = boost::numeric::odeint;
    const OrbitWindow win = sys.turning_points(energy);
    const HamiltonianRhs rhs{&sys};

    Controlled stepper = od::make_controlled<ErrorStepper>(1e-12, 1e-12);
    OdeState y = {win.x2, 0.0};
    const double h0 = sys.hamiltonian(y[0], y[1]);
    double t = 0.0;
    double dt = 0.05 / std::sqrt(sys.v_second_at_origin());

    OdeState y_prev = y;
    double t_prev = t;
    int steps = 0;
    while (true) {
        if (++steps > 2000000) throw IntegrationFailure("no return to the section");
        double trial = dt;
        const auto res = stepper.try_step(rhs, y, t, trial);
        dt = trial;
        if (res != od::controlled_step_result::success) continue;

        const bool crossed = (y_prev[1] < 0.0 && y[1] >= 0.0) || (y_prev[1] > 0.0 && y[1] <= 0.0);
        if (crossed && t_prev > 0.0) {
            OdeState d_prev, d_now;
            rhs(y_prev, d_prev, t_prev);
            rhs(y, d_now, t);
            double t_ev = hermite_root(t_prev, y_prev[1], d_prev[1], t, y[1], d_now[1]);
            // Newton polish on p(t_ev), re-integrating the short arc each time.
            OdeState y_ev = y;
            for (int it = 0; it < 8; ++it) {
                y_ev = y_prev;
                double tt = t_prev;
                Controlled fine = od::make_controlled<ErrorStepper>(1e-13, 1e-13);
                advance_to(fine, rhs, y_ev, tt, t_ev, t_ev - t_prev);
                OdeState d_ev;
                rhs(y_ev, d_ev, t_ev);
                if (d_ev[1] == 0.0) break;
                const double dt_corr = y_ev[1] / d_ev[1];
                t_ev -= dt_corr;
                t_ev = std::clamp(t_ev, t_prev, t);
                if (std::abs(dt_corr) < 1e-14 * std::max(1.0, t_ev)) break;
            }
            if (y_ev[0] > 0.0) {
                PeriodSample s;
                s.energy = energy;
                s.period = t_ev;
                s.dT_dE = kNaN;
                s.method = PeriodMethod::OdeReturn;
                s.est_error = std::abs(sys.hamiltonian(y_ev[0], y_ev[1]) - h0);
                return s;
            }
        }
        y_prev = y;
        t_prev = t;
    }
}

// ---------------------------------------------------------------------------
// dT/dE and the S function
// ---------------------------------------------------------------------------

PeriodSample dT_dE(const LienardSystem& sys, double energy) {
    const BranchInverter inv(sys, energy);
    const NFunction nf(sys);
    const double sqrt_e = std::sqrt(energy);

    auto g_of_theta = [&](double theta) {
        const double u = inv.invert(sqrt_e * std::sin(theta));
        const double c = std::cos(theta);
        return 2.0 * nf(u) / inv.h_prime(u) * c * c;
    };
    const quad::Result rd = quad::gl64_adaptive(g_of_theta, -kHalfPi, kHalfPi);

    auto t_of_theta = [&](double theta) {
        return inv.sqrt_mass_over_h_prime(inv.invert(sqrt_e * std::sin(theta)));
    };
    const quad::Result rt = quad::gl64_adaptive(t_of_theta, -kHalfPi, kHalfPi);

    PeriodSample s;
    s.energy = energy;
    s.period = kSqrt2 * rt.value;
    s.dT_dE = rd.value / kSqrt2;
    s.method = PeriodMethod::DerivativeQuadrature;
    s.est_error = rd.abs_error / kSqrt2;
    return s;
}

double S_function(const LienardSystem& sys, double x) {
    double hp, hpp;
    if (std::abs(x) < kEps0) {
        const auto hc = h_series_at_origin(sys);
        double sp = 0.0, spp = 0.0;
        for (int k = 6; k >= 0; --k) sp = (k + 1) * hc[k] + x * sp;
        for (int k = 6; k >= 1; --k) spp = (k + 1) * k * hc[k] + x * spp;
        hp = sp;
        hpp = spp;
    } else {
        const Jet v = sys.potential_jet(x, 2);
        const double vv = v.value(), vp = v.derivative(1), vpp = v.derivative(2);
        if (!(vv > 0.0)) throw DomainError("S requires V > 0 away from the origin");
        const double sign = x > 0 ? 1.0 : -1.0;
        hp = sign * vp / (2.0 * std::sqrt(vv));
        hpp = sign * (2.0 * vv * vpp - vp * vp) / (4.0 * std::pow(vv, 1.5));
    }
    const Jet mu = sys.mass_jet(x, 1);
    const double m = mu.value();
    const double mp = mu.derivative(1);
    return (hpp * m - 0.5 * mp * hp) / (hp * hp * hp * std::sqrt(m));
}

}  // namespace pscope
