// Panel-based adaptive quadrature: Gauss-Kronrod 7-15 with the embedded
// error estimate for antiderivative construction, and 64-point
// Gauss-Legendre panels with adaptive bisection for the smooth period
// integrals.
#pragma once

#include <functional>

#include "periodscope/errors.hpp"

namespace pscope::quad {

struct Result {
    double value = 0.0;
    double abs_error = 0.0;  // self-reported estimate, not a rigorous bound
};

// Adaptive Gauss-Kronrod 7-15 on [a, b] (a <= b or a > b), absolute
// tolerance. Throws QuadratureNonConvergence past max_depth bisections.
Result gk_adaptive(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, int max_depth = 48);

// 64-point Gauss-Legendre panels, bisected until the panel-sum change is
// below max(abs_tol, rel_tol*|I|).
Result gl64_adaptive(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-9, int max_depth = 30);

}  // namespace pscope::quad
