#include "periodscope/lienard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pscope {

namespace {

std::string fmt(const char* format, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

constexpr int kCheckpointsPerSpan = 512;

}  // namespace

JetFn field_from_expr(Expr e) {
    return [e](double x, int order) { return eval_jet(e, x, order); };
}

// ---------------------------------------------------------------------------
// AntiderivativeCache
// ---------------------------------------------------------------------------

AntiderivativeCache::AntiderivativeCache(std::function<double(double)> integrand, Interval dom,
                                         double step, double panel_tol)
    : integrand_(std::move(integrand)), dom_(dom), step_(step), panel_tol_(panel_tol) {
    const int n_pos = static_cast<int>(std::floor(dom.hi / step + 1e-9));
    const int n_neg = static_cast<int>(std::floor(-dom.lo / step + 1e-9));
    pos_.resize(n_pos + 1);
    neg_.resize(n_neg + 1);
    pos_[0] = neg_[0] = 0.0;
    for (int k = 1; k <= n_pos; ++k)
        pos_[k] = pos_[k - 1] +
                  quad::gk_adaptive(integrand_, (k - 1) * step, k * step, panel_tol_).value;
    for (int k = 1; k <= n_neg; ++k)
        neg_[k] = neg_[k - 1] +
                  quad::gk_adaptive(integrand_, -(k - 1) * step, -k * step, panel_tol_).value;
}

double AntiderivativeCache::operator()(double x) const {
    if (x == 0.0) return 0.0;
    const auto& table = x > 0 ? pos_ : neg_;
    const double ax = std::abs(x);
    int k = static_cast<int>(std::floor(ax / step_ + 1e-9));
    k = std::min<int>(k, static_cast<int>(table.size()) - 1);
    const double xk = (x > 0 ? 1.0 : -1.0) * k * step_;
    if (std::abs(x - xk) < 1e-12 * (1.0 + std::abs(xk))) return table[k];
    return table[k] + quad::gk_adaptive(integrand_, xk, x, panel_tol_).value;
}

// ---------------------------------------------------------------------------
// LienardSystem
// ---------------------------------------------------------------------------

LienardSystem::LienardSystem(Expr f, Expr g, Interval domain, double quad_tol)
    : LienardSystem(field_from_expr(std::move(f)), field_from_expr(std::move(g)), domain,
                    quad_tol) {}

LienardSystem::LienardSystem(JetFn f, JetFn g, Interval domain, double quad_tol)
    : f_(std::move(f)), g_(std::move(g)), dom_(domain), tol_(quad_tol) {
    validate_and_build();
}

void LienardSystem::validate_and_build() {
    if (!(dom_.lo < 0.0 && dom_.hi > 0.0))
        throw Error(fmt("domain [%g, %g] must contain 0 strictly", dom_.lo, dom_.hi));
    if (!(tol_ > 0.0)) throw Error("quadrature tolerance must be positive");

    const Jet g0 = g_(0.0, 1);
    if (std::abs(g0.value()) > 1e-12)
        throw CenterHypothesisViolated(fmt("g(0) = %.6g, expected 0: no equilibrium at the origin",
                                           g0.value()));
    vpp0_ = g0.derivative(1);  // V''(0) = g'(0) since mu(0) = 1
    if (!(vpp0_ > 0.0))
        throw CenterHypothesisViolated(fmt(
            "g'(0) = %.6g, expected > 0: origin is not a nondegenerate minimum of V", vpp0_));

    const double step = (dom_.hi - dom_.lo) / kCheckpointsPerSpan;
    const double panel_tol = tol_ / 10.0;

    auto fv = f_;
    F_ = std::make_shared<AntiderivativeCache>(
        [fv](double s) { return fv(s, 0).value(); }, dom_, step, panel_tol);

    auto gv = g_;
    auto Fc = F_;
    V_ = std::make_shared<AntiderivativeCache>(
        [fv = gv, Fc](double s) { return std::exp(2.0 * (*Fc)(s)) * fv(s, 0).value(); },
        dom_, step, panel_tol);

    IeF_ = std::make_shared<AntiderivativeCache>(
        [Fc](double s) { return std::exp((*Fc)(s)); }, dom_, step, panel_tol);

    const double e_right = scan_side_ceiling(+1.0);
    const double e_left = scan_side_ceiling(-1.0);
    e_star_ = std::min(e_right, e_left) * (1.0 - 1e-9);
}

void LienardSystem::check_domain(double x) const {
    const double slack = 1e-9 * (1.0 + std::abs(x));
    if (x < dom_.lo - slack || x > dom_.hi + slack)
        throw DomainError(fmt("x = %g outside the working domain [%g, ...]", x, dom_.lo));
}

// Walks outward looking for the first critical point of V away from the
// origin (V' = mu g, so critical points are zeros of g); the admissible
// ceiling on this side is V there, or V at the domain edge if g keeps its
// sign all the way out.
double LienardSystem::scan_side_ceiling(double direction) const {
    const double edge = direction > 0 ? dom_.hi : -dom_.lo;
    const double span = edge;
    const int n = 4096;
    const double h = span / n;
    const double want = direction;  // restoring g has the sign of x near 0
    double x_prev = direction * h * 1e-3;
    if (g_(x_prev, 0).value() * want <= 0.0)
        return potential(x_prev);  // degenerate right at the origin
    for (int j = 1; j <= n; ++j) {
        const double x = direction * j * h;
        const double gx = g_(x, 0).value();
        if (gx * want <= 0.0) {
            double a = x_prev, b = x;
            for (int it = 0; it < 200; ++it) {
                const double m = 0.5 * (a + b);
                const double gm = g_(m, 0).value();
                if (gm * want > 0.0) a = m; else b = m;
                if (std::abs(b - a) < 1e-13 * (1.0 + std::abs(b))) break;
            }
            return potential(0.5 * (a + b));
        }
        x_prev = x;
    }
    return potential(direction > 0 ? dom_.hi : dom_.lo);
}

double LienardSystem::antiderivative_F(double x) const {
    check_domain(x);
    return (*F_)(x);
}

double LienardSystem::mass(double x) const {
    return std::exp(2.0 * antiderivative_F(x));
}

Jet LienardSystem::mass_jet(double x, int order) const {
    const double Fx = antiderivative_F(x);
    if (order == 0) return Jet::constant(std::exp(2.0 * Fx), x, 0);
    const Jet fj = f_(x, order - 1);
    return jet_exp(2.0 * Jet::integral_of(fj, Fx));
}

double LienardSystem::potential(double x) const {
    check_domain(x);
    return (*V_)(x);
}

Jet LienardSystem::potential_jet(double x, int order) const {
    const double Vx = potential(x);
    if (order == 0) return Jet::constant(Vx, x, 0);
    const Jet vprime = mass_jet(x, order - 1) * g_(x, order - 1);
    return Jet::integral_of(vprime, Vx);
}

double LienardSystem::exp_F_integral(double x) const {
    check_domain(x);
    return (*IeF_)(x);
}

double LienardSystem::hamiltonian(double x, double p) const {
    return p * p / (2.0 * mass(x)) + potential(x);
}

OrbitWindow LienardSystem::turning_points(double energy) const {
    if (!(energy > 0.0) || !(energy < e_star_))
        throw EnergyOutOfRange(fmt("energy %g outside the admissible window (0, %g)",
                                   energy, e_star_));

    auto refine = [&](double a, double b) {
        // V(a) < E <= V(b) up to sign of the side; safeguarded secant.
        double fa = potential(a) - energy;
        double fb = potential(b) - energy;
        const double res_tol = tol_ * std::max(1.0, energy);
        double best = std::abs(fa) < std::abs(fb) ? a : b;
        for (int it = 0; it < 200; ++it) {
            double m = b - fb * (b - a) / (fb - fa);
            if (!(m > std::min(a, b) && m < std::max(a, b))) m = 0.5 * (a + b);
            const double fm = potential(m) - energy;
            if (std::abs(fm) <= std::abs(potential(best) - energy)) best = m;
            if (std::abs(fm) <= res_tol && it >= 2) return m;
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
                fb = fm;
            }
            if (std::abs(b - a) < 1e-15 * (1.0 + std::abs(b))) break;
        }
        return best;
    };

    auto scan = [&](double direction) {
        // Walk on the checkpoint grid so each V lookup is O(1), then refine.
        const double edge = direction > 0 ? dom_.hi : dom_.lo;
        const double h = V_->step();
        const int n = static_cast<int>(std::ceil(std::abs(edge) / h));
        double x_prev = 0.0;
        for (int j = 1; j <= n; ++j) {
            double x = direction * j * h;
            if ((direction > 0 && x > edge) || (direction < 0 && x < edge)) x = edge;
            const double v = potential(x);
            if (v >= energy) return refine(x_prev, x);
            // V still below E but already descending: the sublevel set opened
            // up before reaching E, so the orbit is not closed on this side.
            if (g_(x, 0).value() * direction < 0.0)
                throw EnergyOutOfRange(
                    fmt("V turns back below E = %g near x = %g: level set not closed", energy, x));
            x_prev = x;
        }
        throw EnergyOutOfRange(fmt("no turning point below the domain edge for E = %g", energy));
    };

    OrbitWindow w{};
    w.e_star = e_star_;
    w.energy = energy;
    w.x2 = scan(+1.0);
    w.x1 = scan(-1.0);
    return w;
}

}  // namespace pscope
