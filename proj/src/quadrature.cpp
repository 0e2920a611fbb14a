#include "periodscope/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace pscope::quad {

namespace {

// Kronrod 7-15 abscissae/weights on [-1, 1] (positive half; node 7 is 0).
// The odd-indexed abscissae are the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529225, 0.06309209262997855, 0.10479001032225018, 0.14065325971552592,
    0.16900472663926790, 0.19035057806478559, 0.20443294007529889, 0.20948214108472782};
constexpr std::array<double, 4> kWg = {
    0.12948496616886969, 0.27970539148927664, 0.38183005050511894, 0.41795918367346939};

struct PanelEstimate {
    double kronrod;
    double err;
};

PanelEstimate gk15_panel(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double fsum = f(c - dx) + f(c + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
    }
    return {k15 * h, std::abs((k15 - g7) * h)};
}

void gk_recurse(const std::function<double(double)>& f, double a, double b, double tol,
                int depth, int max_depth, Result& acc) {
    const PanelEstimate p = gk15_panel(f, a, b);
    if (p.err <= tol || b - a < 1e-15 * (1.0 + std::abs(a))) {
        acc.value += p.kronrod;
        acc.abs_error += p.err;
        return;
    }
    if (depth >= max_depth)
        throw QuadratureNonConvergence("Gauss-Kronrod quadrature did not converge");
    const double m = 0.5 * (a + b);
    gk_recurse(f, a, m, 0.5 * tol, depth + 1, max_depth, acc);
    gk_recurse(f, m, b, 0.5 * tol, depth + 1, max_depth, acc);
}

struct GL64 {
    std::array<double, 64> x;
    std::array<double, 64> w;
};

// Nodes/weights of the 64-point Gauss-Legendre rule on [-1, 1], by Newton
// iteration on the Legendre recurrence.
const GL64& gl64_rule() {
    static const GL64 rule = [] {
        GL64 r{};
        const int n = 64;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / pp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            r.x[i] = -z;
            r.x[n - 1 - i] = z;
            r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
        }
        return r;
    }();
    return rule;
}

double gl64_panel(const std::function<double(double)>& f, double a, double b) {
    const GL64& r = gl64_rule();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 64; ++i) s += r.w[i] * f(c + h * r.x[i]);
    return s * h;
}

void gl_recurse(const std::function<double(double)>& f, double a, double b, double whole,
                double abs_tol, double rel_tol, int depth, int max_depth, Result& acc) {
    const double m = 0.5 * (a + b);
    const double left = gl64_panel(f, a, m);
    const double right = gl64_panel(f, m, b);
    const double refined = left + right;
    const double change = std::abs(refined - whole);
    if (change <= std::max(abs_tol, rel_tol * std::abs(refined)) ||
        b - a < 1e-14 * (1.0 + std::abs(a))) {
        acc.value += refined;
        acc.abs_error += change;
        return;
    }
    if (depth >= max_depth)
        throw QuadratureNonConvergence("Gauss-Legendre panel refinement did not converge");
    gl_recurse(f, a, m, left, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, acc);
    gl_recurse(f, m, b, right, 0.5 * abs_tol, rel_tol, depth + 1, max_depth, acc);
}

}  // namespace

Result gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    if (a > b) {
        Result r = gk_adaptive(f, b, a, abs_tol, max_depth);
        r.value = -r.value;
        return r;
    }
    Result acc;
    gk_recurse(f, a, b, abs_tol, 0, max_depth, acc);
    return acc;
}

Result gl64_adaptive(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_depth) {
    if (a == b) return {0.0, 0.0};
    if (a > b) {
        Result r = gl64_adaptive(f, b, a, abs_tol, rel_tol, max_depth);
        r.value = -r.value;
        return r;
    }
    Result acc;
    gl_recurse(f, a, b, gl64_panel(f, a, b), abs_tol, rel_tol, 0, max_depth, acc);
    return acc;
}

}  // namespace pscope::quad
