#pragma once

// Heat kernels of the symmetric alpha-stable process in R^d and their
// fractional derivatives (-Delta)^{beta/2} P_t, as functions of r = |x|.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "levykernel/approximation.hpp"
#include "levykernel/error.hpp"
#include "levykernel/mellin.hpp"
#include "levykernel/oracle.hpp"
#include "levykernel/specfun.hpp"

namespace levykernel {

struct KernelSpec {
    int d = 2;
    double alpha = 1.0;
    double beta = 0.0;
    double t = 1.0;

    void validate() const
    {
        if (d < 2)
            throw DomainError("KernelSpec: d must be >= 2");
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw DomainError("KernelSpec: alpha must lie in (0, 2]");
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw DomainError("KernelSpec: beta must be >= 0");
        if (!(t > 0.0) || !std::isfinite(t))
            throw DomainError("KernelSpec: t must be positive");
    }
};

/// True when beta is one of 0, 2, 4, ...
inline bool is_even_integer(double beta)
{
    return beta >= 0.0 && std::abs(0.5 * beta - std::round(0.5 * beta)) <= pole_tolerance;
}

struct ScaledSpec {
    KernelSpec unit;         // same spec with t = 1
    double r_scaled = 0.0;   // t^{-1/alpha} r
    double prefactor = 1.0;  // t^{-(d+beta)/alpha}
};

inline ScaledSpec scaling_reduce(const KernelSpec& spec, double r)
{
    spec.validate();
    if (!(r >= 0.0))
        throw DomainError("scaling_reduce: r must be >= 0");
    ScaledSpec s;
    s.unit = spec;
    s.unit.t = 1.0;
    if (spec.t == 1.0) {
        s.r_scaled = r;
        s.prefactor = 1.0;
    } else {
        s.r_scaled = std::pow(spec.t, -1.0 / spec.alpha) * r;
        s.prefactor = std::pow(spec.t, -(spec.d + spec.beta) / spec.alpha);
    }
    return s;
}

inline double gaussian_kernel(int d, double t, double r)
{
    if (!(t > 0.0))
        throw DomainError("gaussian_kernel: t must be positive");
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * d) * std::exp(-r * r / (4.0 * t));
}

inline double poisson_kernel(int d, double t, double r)
{
    if (!(t > 0.0))
        throw DomainError("poisson_kernel: t must be positive");
    const double a = 0.5 * (d + 1);
    return std::exp(std::lgamma(a) - a * std::log(std::numbers::pi)) * t * std::pow(t * t + r * r, -a);
}

/// Surface area of the unit sphere in R^d.
inline double sphere_area(int d)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

inline double kernel_at_origin(const KernelSpec& spec)
{
    spec.validate();
    const double a = (spec.d + spec.beta) / spec.alpha;
    return std::pow(2.0 * std::numbers::pi, -spec.d) * sphere_area(spec.d) * std::tgamma(a) / spec.alpha *
           std::pow(spec.t, -a);
}

// ---------------------------------------------------------------------------
// Mellin-Barnes representation

struct Strip {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double c) const { return c > lower && c < upper; }
    double width() const { return upper - lower; }
};

inline Strip mb_strip(const KernelSpec& spec)
{
    return {0.5 * (spec.d - 1) + spec.beta, spec.d + spec.beta};
}

/// Midpoint for r' < 1; closer to the lower edge beyond, where the
/// cancellation along the line grows like r'^{c}.
inline double default_abscissa(const Strip& s, double r_scaled)
{
    return r_scaled < 1.0 ? s.lower + 0.5 * s.width() : s.lower + 0.3 * s.width();
}

/// Integrand of the unit-time representation at scaled radius rs, without
/// the 1/(alpha pi^{d/2}) factor.
inline auto stable_mb_integrand(const KernelSpec& unit, double rs)
{
    const double alpha = unit.alpha;
    const double db = unit.d + unit.beta;
    const double beta = unit.beta;
    const double lr = std::log(rs);
    return [=](complex z) {
        const complex lg = log_gamma(z / alpha) + log_gamma(0.5 * (db - z)) - log_gamma(0.5 * (z - beta)) +
                           (beta - z) * std::numbers::ln2 + (z - db) * lr;
        return std::exp(lg);
    };
}

struct MbOptions {
    std::optional<ContourSpec> contour;  // full plan, used as given
    std::optional<double> abscissa;      // only the line; height and nodes chosen automatically
    double rel_tol = 1e-13;
    double truncation_tol = 1e-18;
    unsigned workers = 1;
};

inline Approximation stable_mb(const KernelSpec& spec, double r, const MbOptions& opts = {})
{
    spec.validate();
    if (!(spec.alpha < 2.0))
        throw DomainError("stable_mb: requires alpha < 2 (alpha = 2 uses the closed form)");
    if (!(r > 0.0))
        throw DomainError("stable_mb: requires r > 0");
    const ScaledSpec s = scaling_reduce(spec, r);
    const Strip strip = mb_strip(spec);
    auto f = stable_mb_integrand(s.unit, s.r_scaled);

    ContourSpec contour;
    if (opts.contour) {
        contour = *opts.contour;
        if (!strip.contains(contour.abscissa))
            throw StripViolation("stable_mb: abscissa " + std::to_string(contour.abscissa) + " outside (" +
                                 std::to_string(strip.lower) + ", " + std::to_string(strip.upper) + ")");
    } else {
        contour.abscissa = opts.abscissa.value_or(default_abscissa(strip, s.r_scaled));
        if (!strip.contains(contour.abscissa))
            throw StripViolation("stable_mb: abscissa " + std::to_string(contour.abscissa) + " outside (" +
                                 std::to_string(strip.lower) + ", " + std::to_string(strip.upper) + ")");
        contour.half_height = auto_truncation(f, contour.abscissa, opts.truncation_tol);
        contour.nodes = std::max(64, static_cast<int>(4.0 * contour.half_height));
    }
    LineIntegralOptions lo;
    lo.rel_tol = opts.rel_tol;
    lo.exploit_symmetry = true;
    lo.workers = opts.workers;
    const LineIntegralResult li = vertical_line_integral(f, contour, lo);

    const double scale = s.prefactor / (spec.alpha * std::pow(std::numbers::pi, 0.5 * spec.d));
    Approximation out;
    out.value = scale * li.value.real();
    out.est_error = scale * (li.discretization_estimate + li.tail_bound +
                             64.0 * std::numeric_limits<double>::epsilon() * li.magnitude);
    out.method = Method::mb_contour;
    out.diagnostics.nodes_used = li.nodes_used;
    out.diagnostics.truncation_height = contour.half_height;
    out.diagnostics.abscissa = contour.abscissa;
    return out;
}

// ---------------------------------------------------------------------------
// Large-r residue series

/// Residue at z = -n alpha, as the coefficient of r^{-(d+beta+n alpha)} at
/// the spec's time t (the t-dependence is t^n).
inline SeriesTerm series_term(const KernelSpec& spec, int n)
{
    SeriesTerm term;
    term.n = n;
    term.exponent = spec.d + spec.beta + n * spec.alpha;
    const double na = n * spec.alpha;
    const double rg_arg = -0.5 * (na + spec.beta);
    if (is_gamma_pole(rg_arg)) {
        term.vanished = true;
        term.coefficient = 0.0;
        return term;
    }
    // (-1)^n / n! Gamma((d+beta+n alpha)/2) 2^{beta+n alpha} / Gamma(-(n alpha+beta)/2) pi^{-d/2} t^n
    const GammaEval den = gamma_eval(complex(rg_arg, 0.0));
    const double log_mag = std::lgamma(0.5 * term.exponent) + (spec.beta + na) * std::numbers::ln2 -
                           std::lgamma(n + 1.0) - den.log_modulus - 0.5 * spec.d * std::log(std::numbers::pi) +
                           n * std::log(spec.t);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    if (std::cos(den.phase) < 0.0)
        sign = -sign;
    term.coefficient = sign * std::exp(log_mag);
    return term;
}

/// Sum of the residue series. With n_terms, keeps that many non-vanished
/// terms; otherwise stops at the smallest term.
inline Approximation stable_series(const KernelSpec& spec, double r, std::optional<int> n_terms = std::nullopt)
{
    spec.validate();
    if (!(spec.alpha < 2.0))
        throw DomainError("stable_series: every residue vanishes at alpha = 2");
    if (!(r > 0.0))
        throw DomainError("stable_series: requires r > 0");
    if (n_terms && *n_terms < 1)
        throw DomainError("stable_series: n_terms must be >= 1");
    const double lr = std::log(r);
    constexpr int max_index = 400;

    Approximation out;
    out.method = Method::residue_series;
    double sum = 0.0;
    double prev_mag = std::numeric_limits<double>::infinity();
    int kept = 0;
    for (int n = 0; n <= max_index; ++n) {
        SeriesTerm term = series_term(spec, n);
        if (term.vanished) {
            out.terms.push_back(term);
            continue;
        }
        const double value = term.coefficient * std::exp(-term.exponent * lr);
        const double mag = std::abs(value);
        if (!std::isfinite(value))
            break;
        if (n_terms) {
            if (kept == *n_terms) {
                out.est_error = mag;
                break;
            }
            if (mag > prev_mag)
                out.diagnostics.divergence_warning = true;
        } else if (mag > prev_mag) {
            out.est_error = mag;
            break;
        }
        out.terms.push_back(term);
        sum += value;
        prev_mag = mag;
        ++kept;
        if (!n_terms && mag <= std::numeric_limits<double>::epsilon() * 1e-3 * std::abs(sum)) {
            out.est_error = mag;
            break;
        }
    }
    out.value = sum;
    out.diagnostics.terms_used = kept;
    return out;
}

/// First non-vanished residue term (coefficient at the spec's t).
inline SeriesTerm leading_term(const KernelSpec& spec)
{
    spec.validate();
    if (!(spec.alpha < 2.0))
        throw DomainError("leading_term: every residue vanishes at alpha = 2");
    for (int n = 0; n < 4; ++n) {
        SeriesTerm term = series_term(spec, n);
        if (!term.vanished)
            return term;
    }
    throw DomainError("leading_term: no non-vanished term among the first residues");
}

// ---------------------------------------------------------------------------
// Small-r series from the poles of Gamma((d+beta-z)/2)

namespace detail {

template <class Real>
Approximation small_r_sum(const KernelSpec& unit, double rs, int max_terms)
{
    using std::abs;
    const double alpha = unit.alpha;
    const double a = (unit.d + unit.beta) / alpha;
    const double step = 2.0 / alpha;
    const bool integer_step = std::abs(step - std::round(step)) < 1e-14;
    const int k = static_cast<int>(std::round(step));

    const Real q = Real(rs) * Real(rs) / 4;
    // m = 0 term: 2^{1-d} Gamma(a) / (alpha pi^{d/2} Gamma(d/2))
    Real term = boost::math::tgamma(Real(a)) / boost::math::tgamma(Real(unit.d) / 2);
    Real sum = term;
    Real peak = abs(term);
    Real last = abs(term);
    int m = 0;
    for (m = 0; m < max_terms; ++m) {
        const Real x = Real(a) + Real(step) * m;
        Real ratio;
        if (integer_step) {
            ratio = 1;
            for (int j = 0; j < k; ++j)
                ratio *= x + j;
        } else {
            ratio = 1 / boost::math::tgamma_delta_ratio(x, Real(step));
        }
        term *= -q * ratio / (Real(m + 1) * (Real(unit.d) / 2 + m));
        sum += term;
        last = abs(term);
        if (last > peak)
            peak = last;
        if (last <= abs(sum) * Real(1e-40) && Real(m) > q)
            break;
    }
    if (m == max_terms)
        throw NonConvergent("small_r_series: no convergence within " + std::to_string(max_terms) + " terms");
    const Real scale = Real(2) * pow(Real(2), -unit.d) / (Real(alpha) * pow(boost::math::constants::pi<Real>(), Real(unit.d) / 2));
    Approximation out;
    out.method = Method::small_r_series;
    out.value = static_cast<double>(scale * sum);
    const double eps = std::numeric_limits<Real>::epsilon().template convert_to<double>();
    out.est_error = static_cast<double>(scale * (last + peak * Real(eps) * 16)) +
                    std::numeric_limits<double>::epsilon() * std::abs(out.value);
    out.diagnostics.terms_used = m + 2;
    return out;
}

}  // namespace detail

inline Approximation small_r_series(const KernelSpec& spec, double r)
{
    spec.validate();
    if (spec.alpha < 1.0)
        throw DomainError("small_r_series: diverges for alpha < 1");
    const ScaledSpec s = scaling_reduce(spec, r);
    const double rs = s.r_scaled;
    if (spec.alpha == 1.0 && rs >= 1.0)
        throw DomainError("small_r_series: at alpha = 1 the series converges only for t^{-1/alpha} r < 1");

    // Digits lost to cancellation: size of the largest term against the size of the result.
    const double a = (spec.d + spec.beta) / spec.alpha;
    double log_peak = 0.0;
    {
        double lt = 0.0;
        const double lq = rs > 0.0 ? 2.0 * std::log(0.5 * rs) : -1e300;
        for (int m = 1; m < 100000; ++m) {
            lt += lq + std::lgamma(a + 2.0 * m / spec.alpha) - std::lgamma(a + 2.0 * (m - 1) / spec.alpha) -
                  std::log(static_cast<double>(m)) - std::log(0.5 * spec.d + m - 1);
            log_peak = std::max(log_peak, lt);
            if (lt < log_peak - 50.0)
                break;
        }
    }
    const double log_result = spec.alpha == 2.0 ? -0.25 * rs * rs : -(spec.d + spec.beta + spec.alpha) * std::log1p(rs);
    const double lost = (log_peak - log_result) / std::numbers::ln10;

    Approximation out;
    using namespace boost::multiprecision;
    if (lost < 28.0)
        out = detail::small_r_sum<cpp_bin_float_50>(s.unit, rs, 20000);
    else if (lost < 78.0)
        out = detail::small_r_sum<cpp_bin_float_100>(s.unit, rs, 20000);
    else if (lost < 180.0)
        out = detail::small_r_sum<number<cpp_bin_float<200>>>(s.unit, rs, 20000);
    else
        throw NonConvergent("small_r_series: cancellation exceeds 180 digits at this radius");
    out.value *= s.prefactor;
    out.est_error *= s.prefactor;
    return out;
}

// ---------------------------------------------------------------------------
// Dispatch

inline Approximation closed_form(const KernelSpec& spec, double r)
{
    spec.validate();
    Approximation out;
    out.method = Method::closed_form;
    if (r == 0.0) {
        out.value = kernel_at_origin(spec);
    } else if (spec.beta == 0.0 && spec.alpha == 2.0) {
        out.value = gaussian_kernel(spec.d, spec.t, r);
    } else if (spec.beta == 0.0 && spec.alpha == 1.0) {
        out.value = poisson_kernel(spec.d, spec.t, r);
    } else {
        throw DomainError("closed_form: available only for beta = 0 with alpha in {1, 2}, or r = 0");
    }
    out.est_error = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
    return out;
}

inline bool has_closed_form(const KernelSpec& spec, double r)
{
    return r == 0.0 || (spec.beta == 0.0 && (spec.alpha == 1.0 || spec.alpha == 2.0));
}

inline Approximation stable_oracle(const KernelSpec& spec, double r, const OracleOptions& opts = {})
{
    spec.validate();
    if (r == 0.0)
        return closed_form(spec, 0.0);
    return hankel_oracle(stable_weight(spec.d, spec.alpha, spec.beta, spec.t), spec.d, r, opts);
}

/// Automatic method choice: closed form when one exists; otherwise the contour
/// integral, switching to the small-r series (alpha >= 1) or the oracle
/// (alpha < 1) below r' = 0.5.
inline Approximation evaluate(const KernelSpec& spec, double r, std::optional<Method> method = std::nullopt,
                              const MbOptions& mb = {})
{
    spec.validate();
    if (!(r >= 0.0))
        throw DomainError("evaluate: r must be >= 0");
    if (method) {
        switch (*method) {
        case Method::mb_contour: return stable_mb(spec, r, mb);
        case Method::residue_series: return stable_series(spec, r);
        case Method::small_r_series: return small_r_series(spec, r);
        case Method::closed_form: return closed_form(spec, r);
        case Method::oracle: return stable_oracle(spec, r);
        }
    }
    if (has_closed_form(spec, r))
        return closed_form(spec, r);
    if (spec.alpha == 2.0)
        return small_r_series(spec, r);
    const double rs = scaling_reduce(spec, r).r_scaled;
    if (rs < 0.5)
        return spec.alpha >= 1.0 ? small_r_series(spec, r) : stable_oracle(spec, r);
    return stable_mb(spec, r, mb);
}

// ---------------------------------------------------------------------------
// Two-sided bounds

struct EnvelopeRatio {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

/// Envelope of |K| for the spec: t^{-d/a}(1 + t^{-1/a} r)^{-(d+a)} at beta = 0; otherwise
/// t^{-(d+beta)/a} min 1/r^{d+beta} (beta not even) or t/r^{d+beta+a} (beta even).
inline double stable_envelope(const KernelSpec& spec, double r)
{
    const double d = spec.d, a = spec.alpha, b = spec.beta, t = spec.t;
    if (b == 0.0)
        return std::pow(t, -d / a) * std::pow(1.0 + std::pow(t, -1.0 / a) * r, -(d + a));
    const double near = std::pow(t, -(d + b) / a);
    if (r == 0.0)
        return near;
    const double far = is_even_integer(b) ? t * std::pow(r, -(d + b + a)) : std::pow(r, -(d + b));
    return std::min(near, far);
}

inline EnvelopeRatio envelope_ratio(const KernelSpec& spec, const std::vector<double>& r_grid)
{
    spec.validate();
    if (r_grid.empty())
        throw DomainError("envelope_ratio: empty grid");
    EnvelopeRatio out{std::numeric_limits<double>::infinity(), 0.0};
    for (double r : r_grid) {
        const double ratio = std::abs(evaluate(spec, r).value) / stable_envelope(spec, r);
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    return out;
}

struct SumEnvelopeCheck {
    bool holds = false;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    double bound_constant = 1.0;
};

/// Upper envelope for the kernel of r^a + r^b (a < b): the faster index b
/// governs small times, the slower index a large times.
inline double sum_symbol_envelope(int d, double a, double b, double t, double r)
{
    const double idx = t <= 1.0 ? b : a;
    return std::pow(t, -d / idx) * std::pow(1.0 + std::pow(t, -1.0 / idx) * r, -(d + a));
}

/// Oracle value of the kernel of r^a + r^b at time t, including r = 0.
inline double sum_stable_oracle(int d, double a, double b, double t, double r)
{
    if (r == 0.0) {
        auto w = [=](double s) { return std::pow(s, d - 1.0) * std::exp(-t * (std::pow(s, a) + std::pow(s, b))); };
        const double integral = quad::tanh_sinh(w, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
        return std::pow(2.0 * std::numbers::pi, -d) * sphere_area(d) * integral;
    }
    const double p = 0.5 * d;
    Weight w = [=](double s) {
        return s <= 0.0 ? 0.0 : std::exp(p * std::log(s) - t * (std::pow(s, a) + std::pow(s, b)));
    };
    return hankel_oracle(w, d, r).value;
}

inline SumEnvelopeCheck sum_symbol_envelope_check(int d, double a, double b, double t,
                                                  const std::vector<double>& r_grid,
                                                  std::function<double(double)> kernel = {},
                                                  double bound_constant = 1.0)
{
    if (!(0.0 < a && a < b && b < 2.0))
        throw DomainError("sum_symbol_envelope_check: need 0 < a < b < 2");
    if (!(t > 0.0) || d < 2)
        throw DomainError("sum_symbol_envelope_check: need t > 0 and d >= 2");
    if (!kernel)
        kernel = [=](double r) { return sum_stable_oracle(d, a, b, t, r); };
    SumEnvelopeCheck out;
    out.bound_constant = bound_constant;
    for (double r : r_grid) {
        const double ratio = kernel(r) / sum_symbol_envelope(d, a, b, t, r);
        out.min_ratio = std::min(out.min_ratio, ratio);
        out.max_ratio = std::max(out.max_ratio, ratio);
    }
    out.holds = out.max_ratio <= bound_constant;
    return out;
}

}  // namespace levykernel
