#pragma once

// Quadrature along vertical lines Re z = c of Mellin-Barnes integrands,
// normalised as (1 / 2 pi i) \int_{c - i inf}^{c + i inf} f(z) dz.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "levykernel/error.hpp"
#include "levykernel/parallel.hpp"
#include "levykernel/specfun.hpp"

namespace levykernel {

enum class QuadratureRule { trapezoid, gauss_legendre_panels };

struct ContourSpec {
    double abscissa = 1.0;
    double half_height = 64.0;
    int nodes = 64;  // initial nodes per half line (trapezoid) or 8 x panel count
    QuadratureRule rule = QuadratureRule::trapezoid;
};

struct LineIntegralResult {
    complex value;
    double tail_bound = 0.0;
    double discretization_estimate = 0.0;
    double magnitude = 0.0;  // (1/2pi) \int |f|, the cancellation scale
    int nodes_used = 0;
    int refinements = 0;
};

struct LineIntegralOptions {
    double rel_tol = 1e-13;
    int max_refinements = 6;
    bool exploit_symmetry = false;  // assume f(conj z) = conj f(z)
    unsigned workers = 1;
};

namespace detail {

inline void validate_contour(const ContourSpec& contour)
{
    if (!(contour.half_height > 0.0) || !std::isfinite(contour.half_height))
        throw DomainError("ContourSpec: half_height must be positive");
    if (contour.nodes < 16)
        throw DomainError("ContourSpec: at least 16 nodes required");
    if (!std::isfinite(contour.abscissa))
        throw DomainError("ContourSpec: abscissa must be finite");
}

template <class F>
double edge_magnitude(F& f, double c, double v)
{
    return std::max(std::abs(f(complex(c, v))), std::abs(f(complex(c, -v))));
}

// Rough size of \int_T^inf |f| assuming exponential decay fitted from |f(T/2)|, |f(T)|.
inline double exponential_tail(double f_half, double f_end, double half_height)
{
    if (f_end == 0.0)
        return 0.0;
    const double rate = std::log(f_half / f_end) / (0.5 * half_height);
    if (!(rate > 0.0))
        return std::numeric_limits<double>::infinity();
    return f_end / rate;
}

template <class F>
complex evaluate_nodes(F& f, double c, const std::vector<double>& v, bool symmetric,
                       unsigned workers, std::vector<double>& abs_out)
{
    std::vector<complex> vals(v.size());
    abs_out.assign(v.size(), 0.0);
    parallel_for(
        v.size(),
        [&](std::size_t i) {
            if (symmetric) {
                const complex a = f(complex(c, v[i]));
                vals[i] = {2.0 * a.real(), 0.0};
                abs_out[i] = 2.0 * std::abs(a);
            } else {
                const complex a = f(complex(c, v[i]));
                const complex b = f(complex(c, -v[i]));
                vals[i] = a + b;
                abs_out[i] = std::abs(a) + std::abs(b);
            }
        },
        workers);
    complex sum{0.0, 0.0};
    for (const auto& x : vals)
        sum += x;
    return sum;
}

}  // namespace detail

/// (1/2 pi i) \int_{(c)} f(z) dz truncated to |Im z| <= T, refined by doubling
/// the node count until successive estimates agree.
template <class F>
LineIntegralResult vertical_line_integral(F&& f, const ContourSpec& contour,
                                          const LineIntegralOptions& opts = {})
{
    detail::validate_contour(contour);
    const double c = contour.abscissa;
    const double T = contour.half_height;
    const bool sym = opts.exploit_symmetry;

    const double f_half = detail::edge_magnitude(f, c, 0.5 * T);
    const double f_end = detail::edge_magnitude(f, c, T);
    if (f_end > 0.0 && f_end >= f_half)
        throw NoDecay("vertical_line_integral: |f(c+iT)| does not decay (|f(T)|=" +
                      std::to_string(f_end) + ", |f(T/2)|=" + std::to_string(f_half) + ")");

    constexpr double inv2pi = 0.5 / std::numbers::pi;
    LineIntegralResult out;
    out.tail_bound = 2.0 * inv2pi * detail::exponential_tail(f_half, f_end, T);

    if (contour.rule == QuadratureRule::trapezoid) {
        int n = contour.nodes;
        double h = T / n;
        // Level 0: nodes k h, k = 0..n; the endpoint carries weight 1/2.
        std::vector<double> v;
        for (int k = 1; k <= n; ++k)
            v.push_back(k * h);
        std::vector<double> mags;
        const complex f0 = f(complex(c, 0.0));
        complex inner{0.0, 0.0};
        double l1 = std::abs(f0);
        {
            std::vector<double> vin(v.begin(), v.end() - 1);
            inner = detail::evaluate_nodes(f, c, vin, sym, opts.workers, mags);
            for (double m : mags)
                l1 += m;
        }
        const complex fend = sym ? complex(2.0 * f(complex(c, T)).real(), 0.0)
                                 : f(complex(c, T)) + f(complex(c, -T));
        const double fend_abs = sym ? 2.0 * std::abs(f(complex(c, T)))
                                    : std::abs(f(complex(c, T))) + std::abs(f(complex(c, -T)));
        complex sum = f0 + inner + 0.5 * fend;  // sum of weights/h
        l1 += 0.5 * fend_abs;
        complex estimate = inv2pi * h * sum;
        int evaluated = 2 * n + 1;
        for (int level = 1; level <= opts.max_refinements; ++level) {
            const double h_new = 0.5 * h;
            std::vector<double> odd;
            odd.reserve(n);
            for (int k = 0; k < n; ++k)
                odd.push_back((2 * k + 1) * h_new);
            const complex add = detail::evaluate_nodes(f, c, odd, sym, opts.workers, mags);
            for (double m : mags)
                l1 += m;
            sum += add;
            evaluated += 2 * n;
            n *= 2;
            h = h_new;
            const complex refined = inv2pi * h * sum;
            const double diff = std::abs(refined - estimate);
            out.magnitude = inv2pi * h * l1;
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * out.magnitude;
            estimate = refined;
            out.refinements = level;
            out.discretization_estimate = diff;
            if (diff <= opts.rel_tol * std::abs(refined) + floor) {
                out.value = refined;
                out.nodes_used = evaluated;
                return out;
            }
        }
        throw NonConvergent("vertical_line_integral: no convergence after " +
                            std::to_string(opts.max_refinements) + " refinements (last change " +
                            std::to_string(out.discretization_estimate) + ")");
    }

    // Composite 15-point Gauss-Legendre panels on [-T, T].
    using rule = boost::math::quadrature::gauss<double, 15>;
    int panels = std::max(2, contour.nodes / 8);
    auto panel_sum = [&](int count, double& l1) {
        complex total{0.0, 0.0};
        l1 = 0.0;
        const double width = (sym ? T : 2.0 * T) / count;
        const double start = sym ? 0.0 : -T;
        for (int p = 0; p < count; ++p) {
            const double a = start + p * width;
            const double mid = a + 0.5 * width;
            const double half = 0.5 * width;
            const auto& x = rule::abscissa();
            const auto& w = rule::weights();
            for (std::size_t i = 0; i < x.size(); ++i) {
                const int sides = (x[i] == 0.0) ? 1 : 2;
                for (int s = 0; s < sides; ++s) {
                    const double vv = mid + (s == 0 ? x[i] : -x[i]) * half;
                    complex val = f(complex(c, vv));
                    if (sym)
                        val = {2.0 * val.real(), 0.0};
                    total += w[i] * half * val;
                    l1 += w[i] * half * std::abs(val);
                }
            }
        }
        return total;
    };
    double l1 = 0.0;
    complex estimate = inv2pi * panel_sum(panels, l1);
    int evaluated = panels * 15;
    for (int level = 1; level <= opts.max_refinements; ++level) {
        panels *= 2;
        const complex refined = inv2pi * panel_sum(panels, l1);
        evaluated += panels * 15;
        const double diff = std::abs(refined - estimate);
        out.magnitude = inv2pi * l1;
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * out.magnitude;
        estimate = refined;
        out.refinements = level;
        out.discretization_estimate = diff;
        if (diff <= opts.rel_tol * std::abs(refined) + floor) {
            out.value = refined;
            out.nodes_used = evaluated;
            return out;
        }
    }
    throw NonConvergent("vertical_line_integral: Gauss-Legendre panels did not converge");
}

/// Smallest T on the ladder 16, 32, 64, ... with |f(c+iT)| T < tol |f(c)|.
template <class F>
double auto_truncation(F&& f, double c, double tol, double max_height = 1024.0)
{
    const double f0 = std::abs(f(complex(c, 0.0)));
    if (!(f0 > 0.0) || !std::isfinite(f0))
        throw NoDecay("auto_truncation: integrand vanishes or is not finite at v = 0");
    double prev = detail::edge_magnitude(f, c, 8.0);
    for (double T = 16.0; T <= max_height; T *= 2.0) {
        const double fT = detail::edge_magnitude(f, c, T);
        if (fT == 0.0 || fT * T < tol * f0)
            return T;
        if (fT >= prev)
            throw NoDecay("auto_truncation: |f(c+iT)| not decreasing at T = " + std::to_string(T));
        prev = fT;
    }
    throw NoDecay("auto_truncation: tolerance not reached below T = " + std::to_string(max_height));
}

/// Right-hand side of \int_0^inf r^{-nu} J_nu(r) r^{z-1} dr = 2^{z-nu-1} Gamma(z/2) / Gamma(nu - z/2 + 1),
/// valid for 0 < Re z < nu + 3/2.
inline complex mellin_bessel_rhs(complex z, double nu)
{
    if (!(z.real() > 0.0 && z.real() < nu + 1.5))
        throw StripViolation("mellin_bessel_rhs: need 0 < Re z < nu + 3/2");
    const complex lg = (z - nu - 1.0) * std::numbers::ln2 + log_gamma(0.5 * z);
    return std::exp(lg) * reciprocal_gamma(nu - 0.5 * z + 1.0);
}

}  // namespace levykernel
