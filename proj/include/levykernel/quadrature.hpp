#pragma once

// Thin wrappers over Boost.Math quadrature used for the real-line integrals
// (panels between Bessel zeros, radial moments, Mellin transforms of symbols).

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace levykernel::quad {

template <class F>
auto kronrod(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 12,
             double* error = nullptr, double* l1 = nullptr)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, rel_tol, error, l1);
}

/// Single 31-point Kronrod panel with its Gauss-embedded error estimate.
template <class F>
auto kronrod_panel(F&& f, double a, double b, double* error = nullptr, double* l1 = nullptr)
{
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, error, l1);
}

/// Adaptive bisection with an absolute error target, for pieces whose value
/// may sit at the noise floor.
template <class F>
auto kronrod_abs(F&& f, double a, double b, double abs_tol, unsigned max_depth = 12,
                 double* error = nullptr) -> decltype(f(a))
{
    double err = 0.0;
    const auto v = kronrod_panel(f, a, b, &err);
    if (err <= abs_tol || max_depth == 0) {
        if (error)
            *error += err;
        return v;
    }
    const double mid = 0.5 * (a + b);
    return kronrod_abs(f, a, mid, 0.5 * abs_tol, max_depth - 1, error) +
           kronrod_abs(f, mid, b, 0.5 * abs_tol, max_depth - 1, error);
}

/// Double-exponential rule; tolerant of integrable endpoint singularities.
template <class F>
double tanh_sinh(F&& f, double a, double b, double rel_tol = 1e-13, double* error = nullptr,
                 double* l1 = nullptr)
{
    thread_local boost::math::quadrature::tanh_sinh<double> rule(12);
    return rule.integrate(f, a, b, rel_tol, error, l1);
}

}  // namespace levykernel::quad
