#include "periodscope/repro.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace pscope::repro {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

}  // namespace

KMClosedForms km_closed_forms(double a3, double x) {
    const double x2 = x * x;
    const double one_px2 = 1.0 + x2;
    const double one_pa3x2 = 1.0 + a3 * x2;
    const double beta = 0.5 * (1.0 + a3);
    const double one_pbx2 = 1.0 + beta * x2;
    if (std::abs(one_pa3x2) < 1e-12 || std::abs(one_pbx2) < 1e-12)
        throw DomainError(fmt("K(x) has a pole at x = %.6g for a3 = %.6g", x, a3));

    KMClosedForms r{};
    r.V = x2 * one_pbx2 / (2.0 * one_px2 * one_px2);
    r.Vp = x * one_pa3x2 / (one_px2 * one_px2 * one_px2);
    r.u = 0.5 * std::pow(one_px2, 4) / (one_pa3x2 * one_pa3x2) * one_pbx2;
    r.K = 8.0 / one_px2 - 4.0 * a3 / one_pa3x2 + (1.0 + a3) / one_pbx2;

    const double kp = -16.0 * x / (one_px2 * one_px2) +
                      8.0 * a3 * a3 * x / (one_pa3x2 * one_pa3x2) -
                      (1.0 + a3) * (1.0 + a3) * x / (one_pbx2 * one_pbx2);
    const double f = -3.0 * x / one_px2;
    const double f2pfp = 3.0 * (4.0 * x2 - 1.0) / (one_px2 * one_px2);
    r.M_over_u = r.K * (1.0 + 3.0 * x * f) + x2 * r.K * r.K + x * kp + 2.0 * f2pfp;
    return r;
}

KMCoefficients km_coefficients(double a3) {
    KMCoefficients c{};
    c.c5 = 0.0;
    c.c4 = 0.0;
    c.c3 = 0.75 * (a3 + 1.0) * (a3 - 1.0) * (a3 * a3 + 2.0 * a3 - 4.0);
    c.c2 = 1.5 * (a3 - 1.0) * (3.0 * a3 * a3 + a3 - 7.0);
    c.c1 = 0.25 * (a3 - 1.0) * (21.0 * a3 - 39.0);
    c.c0 = 1.5 * (1.0 - a3);
    return c;
}

std::vector<double> km_default_grid(double a3) {
    std::vector<double> xs;
    xs.reserve(64);
    for (int j = 0; j < 64; ++j) {
        const double x = 0.05 + (2.5 - 0.05) * j / 63.0;
        if (std::abs(1.0 + a3 * x * x) < 1e-6) continue;
        xs.push_back(x);
    }
    return xs;
}

KMPolynomialCheck km_polynomial_check(double a3, std::span<const double> grid) {
    const KMCoefficients c = km_coefficients(a3);
    std::vector<double> lhs(grid.size()), rhs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const double x2 = x * x;
        const KMClosedForms cf = km_closed_forms(a3, x);
        const double beta = 0.5 * (1.0 + a3);
        const double denom = (1.0 + x2) * (1.0 + a3 * x2) * (1.0 + beta * x2);
        lhs[i] = cf.M_over_u * denom * denom;
        rhs[i] = ((((c.c5 * x2 + c.c4) * x2 + c.c3) * x2 + c.c2) * x2 + c.c1) * x2 + c.c0;
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        num += lhs[i] * rhs[i];
        den += rhs[i] * rhs[i];
    }
    KMPolynomialCheck out{};
    out.prefactor = den > 1e-300 ? num / den : 0.0;
    out.max_abs_discrepancy = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.max_abs_discrepancy =
            std::max(out.max_abs_discrepancy, std::abs(lhs[i] - out.prefactor * rhs[i]));
    return out;
}

LienardSystem km_system(double a3, Interval domain, double quad_tol) {
    const Expr x = Expr::var();
    const Expr f = Expr::div(Expr::mul(Expr::neg(Expr::number(3.0)), x),
                             Expr::add(Expr::number(1.0), Expr::pow(x, Expr::number(2.0))));
    const Expr g = Expr::add(x, Expr::mul(Expr::number(a3), Expr::pow(x, Expr::number(3.0))));
    return LienardSystem(f, g, domain, quad_tol);
}

LienardSystem sect3_family(const Expr& w, Interval domain, double quad_tol) {
    // hypotheses: w even and strictly positive on the domain
    const int n_check = 128;
    for (int j = 0; j <= n_check; ++j) {
        const double x = domain.lo + (domain.hi - domain.lo) * j / n_check;
        const double wx = eval_value(w, x);
        if (!(wx > 0.0)) throw NotPositive(fmt("f(%.6g) = %.6g is not positive", x, wx));
        const double wmx = eval_value(w, -x);
        if (std::abs(wx - wmx) > 1e-9 * std::max(1.0, std::abs(wx)))
            throw NotEven(fmt("f is not even: f(%.6g) != f(-%.6g)", x, x));
    }

    const double w0 = eval_value(w, 0.0);
    auto ucache = std::make_shared<AntiderivativeCache>(
        [w](double s) { return 1.0 / eval_value(w, s); }, domain,
        (domain.hi - domain.lo) / 512.0, quad_tol / 10.0);

    // f_eff = -w'/w
    JetFn f_eff = [w](double x, int order) {
        const Jet wj = eval_jet(w, x, order + 1);
        return -(wj.derivative_jet() / wj.truncated(order));
    };
    // g_eff = w * U with U' = 1/w
    JetFn g_eff = [w, ucache](double x, int order) {
        const double uval = (*ucache)(x);
        if (order == 0)
            return Jet::constant(eval_value(w, x) * uval, x, 0);
        const Jet wj = eval_jet(w, x, order);
        const Jet uj = Jet::integral_of(1.0 / wj.truncated(order - 1), uval);
        return wj * uj;
    };

    LienardSystem sys(std::move(f_eff), std::move(g_eff), domain, quad_tol);

    // mu = (w(0)/w)^2 and V = (w(0) U)^2 / 2; the constant w(0) factors come
    // from the normalization F(0) = 0.
    for (int j = 1; j < 16; ++j) {
        const double x = domain.lo + (domain.hi - domain.lo) * j / 16.0;
        const double wx = eval_value(w, x);
        const double mu_closed = (w0 / wx) * (w0 / wx);
        const double v_closed = 0.5 * w0 * w0 * (*ucache)(x) * (*ucache)(x);
        if (std::abs(sys.mass(x) - mu_closed) > 1e-7 * std::max(1.0, mu_closed) ||
            std::abs(sys.potential(x) - v_closed) > 1e-7 * std::max(1.0, std::abs(v_closed)))
            throw Error(fmt("sect3 closed forms disagree with quadrature near x = %.6g", x));
    }
    return sys;
}

}  // namespace pscope::repro
