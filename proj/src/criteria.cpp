#include "periodscope/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace pscope {

namespace {

constexpr double kEps0 = 1e-4;

std::vector<double> chebyshev_nodes(double a, double b, int n) {
    std::vector<double> xs(n);
    for (int j = 0; j < n; ++j) {
        const double t = std::cos(std::numbers::pi * (2.0 * j + 1.0) / (2.0 * n));
        xs[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

struct PDerivs {
    double P, Pp, Ppp;       // P = g' + g f and derivatives
    double Pm, Ppm, Pppm;    // term-magnitude versions (no cancellation)
};

PDerivs p_derivs(const LienardSystem& sys, double x) {
    const Jet fj = sys.f_jet(x, 2);
    const Jet gj = sys.g_jet(x, 3);
    const double f = fj.value(), fp = fj.derivative(1), fpp = fj.derivative(2);
    const double g = gj.value(), gp = gj.derivative(1), gpp = gj.derivative(2),
                 gppp = gj.derivative(3);
    PDerivs d{};
    d.P = gp + g * f;
    d.Pp = gpp + gp * f + g * fp;
    d.Ppp = gppp + gpp * f + 2.0 * gp * fp + g * fpp;
    d.Pm = std::abs(gp) + std::abs(g * f);
    d.Ppm = std::abs(gpp) + std::abs(gp * f) + std::abs(g * fp);
    d.Pppm = std::abs(gppp) + std::abs(gpp * f) + 2.0 * std::abs(gp * fp) + std::abs(g * fpp);
    return d;
}

}  // namespace

double NTerms::magnitude() const {
    return std::max({std::abs(term_upp), std::abs(term_up), std::abs(term_u)});
}

// ---------------------------------------------------------------------------
// N
// ---------------------------------------------------------------------------

NTerms NFunction::components(double x) const {
    const LienardSystem& sys = *sys_;
    double u, up, upp;
    if (std::abs(x) < kEps0) {
        // u = V/V'^2 = q/w^2 with V = x^2 q(x), V' = x w(x): regular at 0.
        if (!u_series_) {
            const Jet v = sys.potential_jet(0.0, 8);
            Jet q = Jet::constant(0.0, 0.0, 6);
            Jet w = Jet::constant(0.0, 0.0, 6);
            for (int k = 0; k <= 6; ++k) {
                q.set_coeff(k, v.coeff(k + 2));
                w.set_coeff(k, (k + 2) * v.coeff(k + 2));
            }
            u_series_ = q / (w * w);
        }
        const Jet& us = *u_series_;
        double s0 = 0.0, s1 = 0.0, s2 = 0.0;
        for (int k = 6; k >= 0; --k) s0 = us.coeff(k) + x * s0;
        for (int k = 6; k >= 1; --k) s1 = k * us.coeff(k) + x * s1;
        for (int k = 6; k >= 2; --k) s2 = k * (k - 1) * us.coeff(k) + x * s2;
        u = s0;
        up = s1;
        upp = s2;
    } else {
        const Jet v = sys.potential_jet(x, 3);
        const double vp = v.derivative(1);
        if (vp == 0.0)
            throw DegenerateCritical("V' vanishes away from the origin; N is undefined there");
        const Jet vpj = v.derivative_jet();               // order 2
        const Jet uj = v.truncated(2) / (vpj * vpj);      // order 2
        u = uj.value();
        up = uj.derivative(1);
        upp = uj.derivative(2);
    }
    const Jet smu = jet_sqrt(sys.mass_jet(x, 2));
    const double s = smu.value(), sp = smu.derivative(1), spp = smu.derivative(2);
    NTerms t{};
    t.term_upp = upp * s;
    t.term_up = 3.0 * up * sp;
    t.term_u = 2.0 * u * spp;
    t.total = t.term_upp + t.term_up + t.term_u;
    t.u = u;
    t.smu = s;
    return t;
}

double N_function(const LienardSystem& sys, double x) {
    return NFunction(sys).components(x).total;
}

// ---------------------------------------------------------------------------
// G two ways
// ---------------------------------------------------------------------------

std::pair<double, double> G_two_ways(const LienardSystem& sys, double x) {
    if (std::abs(x) < kEps0)
        throw DomainError("G_two_ways requires |x| >= 1e-4 (both forms are 0/0 at the origin)");
    const Jet vj = sys.potential_jet(x, 3);
    const double v = vj.value(), vp = vj.derivative(1), vpp = vj.derivative(2),
                 vppp = vj.derivative(3);
    if (!(v > 0.0)) throw DomainError("G requires V > 0 away from the origin");
    const Jet smu = jet_sqrt(sys.mass_jet(x, 2));
    const double s = smu.value(), sp = smu.derivative(1), spp = smu.derivative(2);

    const double a = 6.0 * v * vpp * vpp - 3.0 * vp * vp * vpp - 2.0 * v * vp * vppp;
    const double b = 6.0 * v * vp * vpp - 3.0 * vp * vp * vp;
    const double c = 2.0 * v * vp * vp;
    const double sign = x > 0 ? 1.0 : -1.0;
    const double hp = sign * vp / (2.0 * std::sqrt(v));
    const double g_abc = (a * s - b * sp + c * spp) / (8.0 * v * v * std::pow(hp, 5));

    const double g_succinct = 2.0 * N_function(sys, x) / hp;
    return {g_abc, g_succinct};
}

// ---------------------------------------------------------------------------
// Monotonicity classification
// ---------------------------------------------------------------------------

const char* to_string(Monotonicity m) {
    switch (m) {
        case Monotonicity::Increasing: return "increasing";
        case Monotonicity::Decreasing: return "decreasing";
        case Monotonicity::Isochronous: return "isochronous";
        case Monotonicity::Indefinite: return "indefinite";
    }
    return "?";
}

MonotonicityReport classify_monotonicity(const LienardSystem& sys, double energy, int n_samples,
                                         double tol_iso) {
    if (n_samples < 16) throw Error("classify_monotonicity needs at least 16 samples");
    const OrbitWindow win = sys.turning_points(energy);
    const NFunction nf(sys);

    MonotonicityReport rep{};
    rep.energy = energy;
    rep.tol_iso = tol_iso;
    rep.min_N = std::numeric_limits<double>::infinity();
    rep.max_N = -std::numeric_limits<double>::infinity();
    rep.scale = 0.0;
    // N is a second derivative of a quantity of size |u s|; when the three
    // terms all vanish (harmonic case) the honest scale is that quantity in
    // window curvature units, not the roundoff noise of the terms.
    const double half_width = 0.5 * (win.x2 - win.x1);
    for (double x : chebyshev_nodes(win.x1, win.x2, n_samples)) {
        const NTerms t = nf.components(x);
        rep.samples.emplace_back(x, t.total);
        rep.scale = std::max({rep.scale, t.magnitude(),
                              std::abs(t.u) * t.smu / (half_width * half_width)});
        if (t.total < rep.min_N) {
            rep.min_N = t.total;
            rep.argmin_x = x;
        }
        if (t.total > rep.max_N) {
            rep.max_N = t.total;
            rep.argmax_x = x;
        }
    }
    const double thresh = tol_iso * rep.scale;
    if (std::max(std::abs(rep.min_N), std::abs(rep.max_N)) <= thresh)
        rep.verdict = Monotonicity::Isochronous;
    else if (rep.min_N >= -thresh)
        rep.verdict = Monotonicity::Increasing;
    else if (rep.max_N <= thresh)
        rep.verdict = Monotonicity::Decreasing;
    else
        rep.verdict = Monotonicity::Indefinite;
    return rep;
}

// ---------------------------------------------------------------------------
// Isochronicity residual and guards
// ---------------------------------------------------------------------------

double isochrony_residual(const LienardSystem& sys, double x) {
    return isochrony_residual_scaled(sys, x).first;
}

std::pair<double, double> isochrony_residual_scaled(const LienardSystem& sys, double x) {
    const PDerivs d = p_derivs(sys, x);
    const double f = sys.f_value(x);
    const double r = 3.0 * (d.P * d.P) * d.Pp * f + 5.0 * d.P * (d.Pp * d.Pp) -
                     3.0 * (d.P * d.P) * d.Ppp;
    const double scale = std::max({3.0 * d.Pm * d.Pm * d.Ppm * std::abs(f),
                                   5.0 * d.Pm * d.Ppm * d.Ppm,
                                   3.0 * d.Pm * d.Pm * d.Pppm});
    return {r, scale};
}

GuardValues isochrony_guards(const LienardSystem& sys, double x) {
    const PDerivs d = p_derivs(sys, x);
    const double g = sys.g_value(x);
    const double w = 3.0 * d.P * d.P - g * d.Pp;
    const double w_scale = 3.0 * d.Pm * d.Pm + std::abs(g) * d.Ppm;
    const double ef = std::exp(sys.antiderivative_F(x));
    const double ief = sys.exp_F_integral(x);

    GuardValues gv{};
    gv.W = w;
    gv.guard2 = g * ef + 2.0 * d.P * ief;
    if (std::abs(w) <= 1e-12 * std::max(1.0, w_scale)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "W(x) = 3P^2 - gP' vanishes at x = %.6g", x);
        throw GuardViolation(buf);
    }
    gv.C = d.Pp / ef / w;
    gv.D = (3.0 * d.P + 2.0 * d.Pp / ef * ief) / (2.0 * w);
    return gv;
}

IsochronyReport isochrony_report(const LienardSystem& sys, double energy, int n_samples,
                                 double tol) {
    const OrbitWindow win = sys.turning_points(energy);
    IsochronyReport rep{};
    rep.energy = energy;
    rep.max_abs_residual = 0.0;
    rep.residual_scale = 0.0;
    rep.min_abs_W = std::numeric_limits<double>::infinity();
    rep.W_scale = 0.0;
    rep.min_abs_guard2 = std::numeric_limits<double>::infinity();
    rep.guard2_scale = 0.0;

    double c_lo = std::numeric_limits<double>::infinity(), c_hi = -c_lo;
    double d_lo = std::numeric_limits<double>::infinity(), d_hi = -d_lo;
    double c_mag = 0.0, d_mag = 0.0;
    bool any_guard_violation = false;

    const double half_width = 0.5 * (win.x2 - win.x1);
    for (double x : chebyshev_nodes(win.x1, win.x2, n_samples)) {
        const auto [r, r_scale] = isochrony_residual_scaled(sys, x);
        rep.residual_samples.emplace_back(x, r);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(r));
        rep.residual_scale = std::max(rep.residual_scale, r_scale);

        const PDerivs pd = p_derivs(sys, x);
        // floor in window curvature units, like the N scale: P' ~ P/l
        rep.residual_scale = std::max(rep.residual_scale,
                                      5.0 * pd.Pm * pd.Pm * pd.Pm / (half_width * half_width));
        const double g = sys.g_value(x);
        const double ef = std::exp(sys.antiderivative_F(x));
        const double ief = sys.exp_F_integral(x);
        const double w = 3.0 * pd.P * pd.P - g * pd.Pp;
        const double w_scale = 3.0 * pd.Pm * pd.Pm + std::abs(g) * pd.Ppm;
        const double guard2 = g * ef + 2.0 * pd.P * ief;
        rep.guardW_samples.emplace_back(x, w);
        rep.guard2_samples.emplace_back(x, guard2);
        rep.min_abs_W = std::min(rep.min_abs_W, std::abs(w));
        rep.W_scale = std::max(rep.W_scale, w_scale);
        if (std::abs(x) >= kEps0) {
            // guard (ii) vanishes identically at x = 0 (g(0) = 0 and the
            // integral is empty), so its margin is judged away from 0.
            rep.min_abs_guard2 = std::min(rep.min_abs_guard2, std::abs(guard2));
            rep.guard2_scale =
                std::max(rep.guard2_scale, std::abs(g * ef) + 2.0 * pd.Pm * std::abs(ief));
        }

        if (std::abs(w) <= 1e-12 * std::max(1.0, w_scale)) {
            any_guard_violation = true;
            continue;
        }
        const double cval = pd.Pp / ef / w;
        const double dval = (3.0 * pd.P + 2.0 * pd.Pp / ef * ief) / (2.0 * w);
        rep.C_samples.emplace_back(x, cval);
        rep.D_samples.emplace_back(x, dval);
        c_lo = std::min(c_lo, cval);
        c_hi = std::max(c_hi, cval);
        d_lo = std::min(d_lo, dval);
        d_hi = std::max(d_hi, dval);
        c_mag = std::max(c_mag, pd.Ppm / ef / std::abs(w));
        d_mag = std::max(d_mag, (3.0 * pd.Pm + 2.0 * pd.Ppm / ef * std::abs(ief)) /
                                    (2.0 * std::abs(w)));
    }

    rep.C_spread = rep.C_samples.empty() ? 0.0 : (c_hi - c_lo) / std::max(c_mag, 1e-300);
    rep.D_spread = rep.D_samples.empty() ? 0.0 : (d_hi - d_lo) / std::max(d_mag, 1e-300);

    const bool residual_zero = rep.max_abs_residual <= tol * std::max(rep.residual_scale, 1e-300);
    const bool w_ok = !any_guard_violation &&
                      rep.min_abs_W > 1e-9 * std::max(rep.W_scale, 1e-300);
    const bool guard2_ok = rep.min_abs_guard2 > 1e-9 * std::max(rep.guard2_scale, 1e-300);
    rep.verdict = residual_zero && w_ok && guard2_ok;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "max|R| = %.3e (scale %.3e), min|W| = %.3e, min|guard2| = %.3e, "
                  "C spread = %.3e, D spread = %.3e",
                  rep.max_abs_residual, rep.residual_scale, rep.min_abs_W, rep.min_abs_guard2,
                  rep.C_spread, rep.D_spread);
    rep.diagnostics = buf;
    return rep;
}

// ---------------------------------------------------------------------------
// Schaaf (conservative case)
// ---------------------------------------------------------------------------

double schaaf_value(const LienardSystem& sys, double x) {
    const Interval dom = sys.domain();
    for (int j = 0; j <= 32; ++j) {
        const double xs = dom.lo + (dom.hi - dom.lo) * j / 32.0;
        if (std::abs(sys.f_value(xs)) > 1e-12) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "f(%.6g) = %.6g != 0: system is not conservative",
                          xs, sys.f_value(xs));
            throw NotConservative(buf);
        }
    }
    const Jet gj = sys.g_jet(x, 3);
    const double gp = gj.derivative(1), gpp = gj.derivative(2), gppp = gj.derivative(3);
    return 5.0 * gp * (gpp * gpp) - 3.0 * (gp * gp) * gppp;
}

}  // namespace pscope
