// Monotonicity and isochronicity criteria.
//
// With u = V/V'^2 and s = sqrt(mu), the monotonicity function is
//
//   N(x) = (u s)'' + (u s')' = u'' s + 3 u' s' + 2 u s'' ,
//
// whose uniform sign on the sublevel set K(E) forces T(E) monotone
// increasing (N >= 0) or decreasing (N <= 0); N == 0 gives isochronicity.
// The same G that drives dT/dE admits an independent expanded form
//
//   G = [A s - B s' + C s''] / (8 V^2 h'^5),
//   A = 6VV''^2 - 3V'^2V'' - 2VV'V''',  B = 6VV'V'' - 3V'^3,  C = 2VV'^2,
//
// equal to (2/h') N; both routes are exposed as a structural identity check.
//
// The isochronicity residual in terms of (f, g) is
//
//   R = 3 P^2 P' f + 5 P P'^2 - 3 P^2 P'',   P = g' + g f,
//
// with guards W = 3P^2 - g P' != 0 and g e^F + 2P int e^F != 0, and the
// integration constants C = P' e^{-F} / W, 2D = (3P + 2P' e^{-F} int e^F)/W,
// which must be x-independent for a genuinely isochronous system. For f == 0
// the residual reduces to the classical combination 5 g' g''^2 - 3 g'^2 g'''.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "periodscope/lienard.hpp"

namespace pscope {

// The three additive pieces of N; their magnitudes set the cancellation
// scale against which "N == 0" is judged.
struct NTerms {
    double total;
    double term_upp;  // u'' sqrt(mu)
    double term_up;   // 3 u' (sqrt mu)'
    double term_u;    // 2 u (sqrt mu)''
    double u;         // u itself, for the curvature-unit scale floor
    double smu;       // sqrt(mu)
    double magnitude() const;
};

// Evaluator for N with a lazily built Taylor-series path for |x| < 1e-4,
// where u = V/V'^2 is a 0/0 ratio.
class NFunction {
  public:
    explicit NFunction(const LienardSystem& sys) : sys_(&sys) {}
    NTerms components(double x) const;
    double operator()(double x) const { return components(x).total; }

  private:
    const LienardSystem* sys_;
    mutable std::optional<Jet> u_series_;
};

double N_function(const LienardSystem& sys, double x);

// (expanded A/B/C form, succinct (2/h')N form); requires |x| >= 1e-4.
std::pair<double, double> G_two_ways(const LienardSystem& sys, double x);

enum class Monotonicity { Increasing, Decreasing, Isochronous, Indefinite };
const char* to_string(Monotonicity m);

struct MonotonicityReport {
    double energy;
    Monotonicity verdict;
    std::vector<std::pair<double, double>> samples;  // (x, N(x))
    double min_N, max_N;
    double argmin_x, argmax_x;
    double scale;  // max |N component| over the samples
    double tol_iso;
};

MonotonicityReport classify_monotonicity(const LienardSystem& sys, double energy,
                                         int n_samples = 64, double tol_iso = 1e-9);

double isochrony_residual(const LienardSystem& sys, double x);

// Residual together with its term-magnitude scale (the residual is a
// cancellation of terms of this size).
std::pair<double, double> isochrony_residual_scaled(const LienardSystem& sys, double x);

struct GuardValues {
    double W;
    double guard2;  // g e^F + 2 P int e^F
    double C;
    double D;
};

// Throws GuardViolation when W vanishes at x (C, D undefined there).
GuardValues isochrony_guards(const LienardSystem& sys, double x);

struct IsochronyReport {
    double energy;
    std::vector<std::pair<double, double>> residual_samples;
    std::vector<std::pair<double, double>> guardW_samples;
    std::vector<std::pair<double, double>> guard2_samples;
    std::vector<std::pair<double, double>> C_samples;
    std::vector<std::pair<double, double>> D_samples;
    bool verdict;
    double max_abs_residual, residual_scale;
    double min_abs_W, W_scale;
    double min_abs_guard2, guard2_scale;  // over |x| >= 1e-4 (vanishes at 0 identically)
    double C_spread, D_spread;            // spread over the terms' magnitude scale
    std::string diagnostics;
};

IsochronyReport isochrony_report(const LienardSystem& sys, double energy, int n_samples = 64,
                                 double tol = 1e-9);

// 5 g' g''^2 - 3 g'^2 g'''; requires f identically zero on the domain.
double schaaf_value(const LienardSystem& sys, double x);

}  // namespace pscope
