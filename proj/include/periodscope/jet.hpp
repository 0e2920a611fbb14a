// Truncated Taylor jets in one variable: value plus scaled derivatives
// c[k] = u^(k)(x0)/k! up to a truncation order K. Arithmetic and the
// elementary functions propagate coefficients by the standard power-series
// recurrences, so for polynomial inputs of degree <= K the derivatives are
// exact. Storage is a fixed inline array; no heap traffic on hot paths.
#pragma once

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>

#include "periodscope/errors.hpp"

namespace pscope {

class Jet {
  public:
    static constexpr int kMaxOrder = 15;

    Jet() = default;

    static Jet constant(double v, double base = 0.0, int order = 0) {
        Jet j(base, order);
        j.c_[0] = v;
        return j;
    }

    // The identity function x at the base point: (x0, 1, 0, ...).
    static Jet variable(double base, int order) {
        Jet j(base, order);
        j.c_[0] = base;
        if (order >= 1) j.c_[1] = 1.0;
        return j;
    }

    double base() const { return x0_; }
    int order() const { return order_; }

    double coeff(int k) const {
        assert(k >= 0 && k <= order_);
        return c_[static_cast<std::size_t>(k)];
    }
    void set_coeff(int k, double v) {
        assert(k >= 0 && k <= order_);
        c_[static_cast<std::size_t>(k)] = v;
    }

    double value() const { return c_[0]; }

    // k-th derivative at the base point, i.e. k! * c[k].
    double derivative(int k) const {
        assert(k >= 0 && k <= order_);
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return c_[static_cast<std::size_t>(k)] * fact;
    }

    Jet truncated(int order) const {
        assert(order >= 0 && order <= order_);
        Jet r(x0_, order);
        for (int k = 0; k <= order; ++k) r.c_[k] = c_[k];
        return r;
    }

    // Jet of the derivative function, one order lower.
    Jet derivative_jet() const {
        assert(order_ >= 1);
        Jet r(x0_, order_ - 1);
        for (int k = 0; k < order_; ++k) r.c_[k] = (k + 1) * c_[k + 1];
        return r;
    }

    // Jet of an antiderivative, one order higher, with prescribed value c0.
    static Jet integral_of(const Jet& d, double c0) {
        assert(d.order_ + 1 <= kMaxOrder);
        Jet r(d.x0_, d.order_ + 1);
        r.c_[0] = c0;
        for (int k = 0; k <= d.order_; ++k) r.c_[k + 1] = d.c_[k] / (k + 1);
        return r;
    }

    Jet operator-() const {
        Jet r = *this;
        for (int k = 0; k <= order_; ++k) r.c_[k] = -r.c_[k];
        return r;
    }

    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r = a.compat(b);
        for (int k = 0; k <= r.order_; ++k) r.c_[k] = a.c_[k] + b.c_[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r = a.compat(b);
        for (int k = 0; k <= r.order_; ++k) r.c_[k] = a.c_[k] - b.c_[k];
        return r;
    }
    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r = a.compat(b);
        for (int k = 0; k <= r.order_; ++k) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
            r.c_[k] = s;
        }
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.c_[0] == 0.0) throw DomainError("division by zero");
        Jet r = a.compat(b);
        for (int k = 0; k <= r.order_; ++k) {
            double s = a.c_[k];
            for (int j = 0; j < k; ++j) s -= r.c_[j] * b.c_[k - j];
            r.c_[k] = s / b.c_[0];
        }
        return r;
    }

    friend Jet operator+(const Jet& a, double s) { return a + constant(s, a.x0_, a.order_); }
    friend Jet operator+(double s, const Jet& a) { return constant(s, a.x0_, a.order_) + a; }
    friend Jet operator-(const Jet& a, double s) { return a - constant(s, a.x0_, a.order_); }
    friend Jet operator-(double s, const Jet& a) { return constant(s, a.x0_, a.order_) - a; }
    friend Jet operator*(const Jet& a, double s) {
        Jet r = a;
        for (int k = 0; k <= r.order_; ++k) r.c_[k] *= s;
        return r;
    }
    friend Jet operator*(double s, const Jet& a) { return a * s; }
    friend Jet operator/(const Jet& a, double s) {
        Jet r = a;
        for (int k = 0; k <= r.order_; ++k) r.c_[k] /= s;
        return r;
    }
    friend Jet operator/(double s, const Jet& a) { return constant(s, a.x0_, a.order_) / a; }

  private:
    Jet(double base, int order) : x0_(base), order_(order) {
        assert(order >= 0 && order <= kMaxOrder);
    }

    // Result skeleton for a binary op; bases and orders must agree.
    Jet compat(const Jet& b) const {
        assert(order_ == b.order_);
        assert(x0_ == b.x0_);
        (void)b;
        return Jet(x0_, order_);
    }

    double x0_ = 0.0;
    int order_ = 0;
    std::array<double, kMaxOrder + 1> c_{};

    friend Jet jet_exp(const Jet&);
    friend Jet jet_ln(const Jet&);
    friend Jet jet_sqrt(const Jet&);
    friend Jet jet_sin(const Jet&);
    friend Jet jet_cos(const Jet&);
    friend Jet jet_tan(const Jet&);
    friend Jet jet_atan(const Jet&);
    friend Jet jet_sinh(const Jet&);
    friend Jet jet_cosh(const Jet&);
    friend Jet jet_tanh(const Jet&);
    friend Jet jet_pow(const Jet&, double);
};

inline Jet jet_exp(const Jet& u) {
    Jet r = u;
    r.c_[0] = std::exp(u.c_[0]);
    for (int k = 1; k <= r.order_; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * u.c_[j] * r.c_[k - j];
        r.c_[k] = s / k;
    }
    return r;
}

inline Jet jet_ln(const Jet& u) {
    if (!(u.c_[0] > 0.0)) throw DomainError("ln of a nonpositive value");
    Jet r = u;
    r.c_[0] = std::log(u.c_[0]);
    for (int k = 1; k <= r.order_; ++k) {
        double s = 0.0;
        for (int j = 1; j < k; ++j) s += j * r.c_[j] * u.c_[k - j];
        r.c_[k] = (u.c_[k] - s / k) / u.c_[0];
    }
    return r;
}

inline Jet jet_sqrt(const Jet& u) {
    if (u.c_[0] < 0.0) throw DomainError("sqrt of a negative value");
    if (u.c_[0] == 0.0 && u.order_ >= 1) throw DomainError("sqrt is not smooth at zero");
    Jet r = u;
    r.c_[0] = std::sqrt(u.c_[0]);
    for (int k = 1; k <= r.order_; ++k) {
        double s = u.c_[k];
        for (int j = 1; j < k; ++j) s -= r.c_[j] * r.c_[k - j];
        r.c_[k] = s / (2.0 * r.c_[0]);
    }
    return r;
}

namespace detail {
// Joint recurrence for (sin u, cos u) or (sinh u, cosh u).
inline void jet_circular(const Jet& u, Jet& s, Jet& c, bool hyperbolic) {
    const double sign = hyperbolic ? 1.0 : -1.0;
    for (int k = 1; k <= u.order(); ++k) {
        double as = 0.0, ac = 0.0;
        for (int j = 1; j <= k; ++j) {
            as += j * u.coeff(j) * c.coeff(k - j);
            ac += j * u.coeff(j) * s.coeff(k - j);
        }
        s.set_coeff(k, as / k);
        c.set_coeff(k, sign * ac / k);
    }
}
}  // namespace detail

inline Jet jet_sin(const Jet& u) {
    Jet s = u, c = u;
    s.set_coeff(0, std::sin(u.value()));
    c.set_coeff(0, std::cos(u.value()));
    for (int k = 1; k <= u.order(); ++k) { s.set_coeff(k, 0.0); c.set_coeff(k, 0.0); }
    detail::jet_circular(u, s, c, false);
    return s;
}

inline Jet jet_cos(const Jet& u) {
    Jet s = u, c = u;
    s.set_coeff(0, std::sin(u.value()));
    c.set_coeff(0, std::cos(u.value()));
    for (int k = 1; k <= u.order(); ++k) { s.set_coeff(k, 0.0); c.set_coeff(k, 0.0); }
    detail::jet_circular(u, s, c, false);
    return c;
}

inline Jet jet_sinh(const Jet& u) {
    Jet s = u, c = u;
    s.set_coeff(0, std::sinh(u.value()));
    c.set_coeff(0, std::cosh(u.value()));
    for (int k = 1; k <= u.order(); ++k) { s.set_coeff(k, 0.0); c.set_coeff(k, 0.0); }
    detail::jet_circular(u, s, c, true);
    return s;
}

inline Jet jet_cosh(const Jet& u) {
    Jet s = u, c = u;
    s.set_coeff(0, std::sinh(u.value()));
    c.set_coeff(0, std::cosh(u.value()));
    for (int k = 1; k <= u.order(); ++k) { s.set_coeff(k, 0.0); c.set_coeff(k, 0.0); }
    detail::jet_circular(u, s, c, true);
    return c;
}

// t' = (1 + t^2) u'; the auxiliary series w = 1 + t^2 is grown alongside t.
inline Jet jet_tan(const Jet& u) {
    Jet t = u, w = u;
    const double t0 = std::tan(u.value());
    t.set_coeff(0, t0);
    w.set_coeff(0, 1.0 + t0 * t0);
    for (int k = 1; k <= u.order(); ++k) { t.set_coeff(k, 0.0); w.set_coeff(k, 0.0); }
    for (int k = 1; k <= u.order(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * u.coeff(j) * w.coeff(k - j);
        t.set_coeff(k, s / k);
        double ws = 0.0;
        for (int i = 0; i <= k; ++i) ws += t.coeff(i) * t.coeff(k - i);
        w.set_coeff(k, ws);
    }
    return t;
}

// t' = (1 - t^2) u' with w = 1 - t^2.
inline Jet jet_tanh(const Jet& u) {
    Jet t = u, w = u;
    const double t0 = std::tanh(u.value());
    t.set_coeff(0, t0);
    w.set_coeff(0, 1.0 - t0 * t0);
    for (int k = 1; k <= u.order(); ++k) { t.set_coeff(k, 0.0); w.set_coeff(k, 0.0); }
    for (int k = 1; k <= u.order(); ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * u.coeff(j) * w.coeff(k - j);
        t.set_coeff(k, s / k);
        double ws = 0.0;
        for (int i = 0; i <= k; ++i) ws += t.coeff(i) * t.coeff(k - i);
        w.set_coeff(k, -ws);
    }
    return t;
}

// a' = u' / (1 + u^2), integrated term by term.
inline Jet jet_atan(const Jet& u) {
    Jet r = u;
    r.set_coeff(0, std::atan(u.value()));
    if (u.order() == 0) return r;
    Jet w = 1.0 + u.truncated(u.order() - 1) * u.truncated(u.order() - 1);
    Jet q = u.derivative_jet() / w;
    for (int k = 1; k <= u.order(); ++k) r.set_coeff(k, q.coeff(k - 1) / k);
    return r;
}

// u^r for real (generally non-integer) r; requires u(x0) > 0.
inline Jet jet_pow(const Jet& u, double r) {
    if (!(u.c_[0] > 0.0)) throw DomainError("pow of a nonpositive base with non-integer exponent");
    Jet p = u;
    p.c_[0] = std::pow(u.c_[0], r);
    for (int k = 1; k <= u.order_; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((r + 1.0) * j - k) * u.c_[j] * p.c_[k - j];
        p.c_[k] = s / (k * u.c_[0]);
    }
    return p;
}

// Integer power by binary exponentiation; exact for polynomial inputs and
// valid for nonpositive bases.
inline Jet jet_pow_int(const Jet& u, long long n) {
    if (n < 0) {
        if (u.value() == 0.0) throw DomainError("negative power of zero");
        return Jet::constant(1.0, u.base(), u.order()) / jet_pow_int(u, -n);
    }
    Jet result = Jet::constant(1.0, u.base(), u.order());
    Jet base = u;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

}  // namespace pscope
