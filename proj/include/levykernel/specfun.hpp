#pragma once

// Complex Gamma function, Bessel J of real order and Stirling magnitude
// estimates. Everything here is pure and re-entrant.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "levykernel/error.hpp"
#include "levykernel/quadrature.hpp"

namespace levykernel {

using complex = std::complex<double>;

/// Absolute distance to a nonpositive integer treated as a Gamma pole.
inline constexpr double pole_tolerance = 1e-12;

/// log|Gamma(z)| and arg Gamma(z); the phase is not reduced to (-pi, pi].
struct GammaEval {
    double log_modulus = 0.0;
    double phase = 0.0;

    complex log() const { return {log_modulus, phase}; }
    complex value() const { return std::polar(std::exp(log_modulus), phase); }
};

namespace detail {

// sin(pi x), cos(pi x) with exact argument reduction.
inline void sincos_pi(double x, double& s, double& c)
{
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    double sign = 1.0;
    if (r > 0.5) {
        r = 1.0 - r;
        sign = -1.0;  // sin(pi(1-r)) = sin(pi r), cos flips
    } else if (r < -0.5) {
        r = -1.0 - r;
        sign = -1.0;
    }
    s = std::sin(std::numbers::pi * r);
    c = sign * std::cos(std::numbers::pi * r);
}

inline double nearest_nonpositive_distance(complex z)
{
    if (z.real() > 0.5)
        return std::numeric_limits<double>::infinity();
    const double n = std::round(z.real());
    if (n > 0.0)
        return std::numeric_limits<double>::infinity();
    return std::abs(z - complex(n, 0.0));
}

// Lanczos approximation, g = 7, nine terms; valid for Re z >= 1/2.
inline complex log_gamma_lanczos(complex z)
{
    static constexpr double g = 7.0;
    static constexpr std::array<double, 9> p{
        0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7};
    const complex w = z - 1.0;
    complex sum = p[0];
    for (std::size_t i = 1; i < p.size(); ++i)
        sum += p[i] / (w + static_cast<double>(i));
    const complex t = w + g + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (w + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace detail

/// log sin(pi z) without overflow for large |Im z|. Branch is arbitrary
/// (only exp of sums of logs is ever used).
inline complex log_sin_pi(complex z)
{
    const double y = z.imag();
    if (std::abs(y) < 20.0) {
        double s, c;
        detail::sincos_pi(z.real(), s, c);
        const double py = std::numbers::pi * y;
        return std::log(complex(s * std::cosh(py), c * std::sinh(py)));
    }
    // sin w = e^{-iw} (1 - e^{2iw}) (i/2) for Im w > 0
    const bool lower = y < 0.0;
    const complex zz = lower ? std::conj(z) : z;
    const double xr = zz.real() - 2.0 * std::round(0.5 * zz.real());
    const complex w = std::numbers::pi * complex(xr, zz.imag());
    const complex i{0.0, 1.0};
    const complex res = -i * w + std::log(1.0 - std::exp(2.0 * i * w)) + std::log(0.5 * i);
    return lower ? std::conj(res) : res;
}

/// Complex log Gamma. Throws PoleHit at nonpositive integers.
inline complex log_gamma(complex z)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma: non-finite argument");
    if (detail::nearest_nonpositive_distance(z) <= pole_tolerance)
        throw PoleHit("gamma: argument is a nonpositive integer");
    if (z.real() >= 0.5)
        return detail::log_gamma_lanczos(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(std::numbers::pi) - log_sin_pi(z) - detail::log_gamma_lanczos(1.0 - z);
}

inline GammaEval gamma_eval(complex z)
{
    const complex lg = log_gamma(z);
    return {lg.real(), lg.imag()};
}

inline complex gamma(complex z)
{
    return std::exp(log_gamma(z));
}

inline double gamma_real(double x)
{
    return gamma(complex(x, 0.0)).real();
}

/// Residue of Gamma at z = -n, i.e. (-1)^n / n!.
inline double gamma_residue(unsigned n)
{
    double r = 1.0;
    for (unsigned k = 2; k <= n; ++k)
        r /= static_cast<double>(k);
    return (n % 2 == 0) ? r : -r;
}

/// Entire function 1/Gamma(z); exactly zero within pole_tolerance of 0,-1,-2,...
inline complex reciprocal_gamma(complex z)
{
    if (detail::nearest_nonpositive_distance(z) <= pole_tolerance)
        return {0.0, 0.0};
    return std::exp(-log_gamma(z));
}

inline double reciprocal_gamma(double x)
{
    return reciprocal_gamma(complex(x, 0.0)).real();
}

/// True when 1/Gamma vanishes at x (x is a nonpositive integer).
inline bool is_gamma_pole(double x)
{
    return detail::nearest_nonpositive_distance(complex(x, 0.0)) <= pole_tolerance;
}

/// Leading Stirling magnitude sqrt(2 pi) |v|^{u-1/2} exp(-pi |v| / 2) of |Gamma(u+iv)|.
inline double stirling_magnitude(double u, double v)
{
    if (std::abs(v) < 1.0)
        throw DomainError("stirling_magnitude: requires |v| >= 1");
    const double av = std::abs(v);
    return std::sqrt(2.0 * std::numbers::pi) *
           std::exp((u - 0.5) * std::log(av) - 0.5 * std::numbers::pi * av);
}

// ---------------------------------------------------------------------------
// Bessel function of the first kind

/// Crossover between the ascending series and the Hankel asymptotic form.
inline double bessel_switch_point(double nu)
{
    return std::max(12.0, 2.0 * nu * nu);
}

inline double bessel_j_series(double nu, double x)
{
    if (x == 0.0)
        return nu == 0.0 ? 1.0 : 0.0;
    const double h = 0.5 * x;
    double term = std::exp(nu * std::log(h) - std::lgamma(nu + 1.0));
    double sum = term;
    const double q = -h * h;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * (static_cast<double>(k) + nu));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && k > h)
            break;
    }
    return sum;
}

inline double bessel_j_asymptotic(double nu, double x)
{
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double a = 1.0;  // a_k(nu) / x^k
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = a * (mu - odd * odd) / (8.0 * k * x);
        if (next == 0.0)
            break;
        if (std::abs(next) >= prev && k > nu)
            break;  // optimal truncation
        prev = std::abs(next);
        a = next;
        switch (k % 4) {
        case 1: q += a; break;
        case 2: p -= a; break;
        case 3: q -= a; break;
        default: p += a; break;
        }
        if (std::abs(a) < 1e-17)
            break;
    }
    const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

/// Poisson representation
///   J_nu(x) = (x/2)^nu / (Gamma(nu+1/2) Gamma(1/2)) \int_{-1}^{1} cos(xs) (1-s^2)^{nu-1/2} ds.
inline double bessel_j_poisson(double nu, double x)
{
    if (x == 0.0)
        return nu == 0.0 ? 1.0 : 0.0;
    auto f = [&](double s) {
        const double w = (1.0 - s) * (1.0 + s);
        return std::cos(x * s) * (w > 0.0 ? std::pow(w, nu - 0.5) : 0.0);
    };
    // even integrand: integrate over [0, 1]
    const double integral = 2.0 * quad::tanh_sinh(f, 0.0, 1.0, 1e-15);
    return std::exp(nu * std::log(0.5 * x) - std::lgamma(nu + 0.5) - 0.5 * std::log(std::numbers::pi)) *
           integral;
}

/// J_nu(x) for nu >= 0, x >= 0. Ascending series up to x = 12, asymptotic
/// expansion beyond bessel_switch_point(nu); orders above 2.5 bridge the gap
/// with the Poisson integral.
inline double bessel_j(double nu, double x)
{
    if (nu < 0.0 || x < 0.0 || !std::isfinite(x))
        throw DomainError("bessel_j: requires nu >= 0 and finite x >= 0");
    if (x > bessel_switch_point(nu))
        return bessel_j_asymptotic(nu, x);
    if (x <= 12.0)
        return bessel_j_series(nu, x);
    return bessel_j_poisson(nu, x);
}

}  // namespace levykernel
