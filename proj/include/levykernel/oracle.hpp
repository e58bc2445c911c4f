#pragma once

// Brute-force radial Fourier inversion
//   K(r) = (2 pi)^{-d/2} r^{1-d/2} \int_0^inf J_{d/2-1}(r s) w(s) ds
// by panel integration between consecutive zeros of the Bessel factor and
// iterated averaging of the alternating partial sums.

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "levykernel/approximation.hpp"
#include "levykernel/error.hpp"
#include "levykernel/quadrature.hpp"
#include "levykernel/specfun.hpp"

namespace levykernel {

using Weight = std::function<double(double)>;

/// k-th positive zero (k >= 1) of J_nu: McMahon expansion polished by Newton steps.
inline double bessel_zero(double nu, int k)
{
    if (k < 1)
        throw DomainError("bessel_zero: k must be >= 1");
    const double mu = 4.0 * nu * nu;
    const double b = (k + 0.5 * nu - 0.25) * std::numbers::pi;
    const double e = 8.0 * b;
    double x = b - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e) -
               32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) /
                   (15.0 * std::pow(e, 5));
    for (int it = 0; it < 50; ++it) {
        const double j = bessel_j(nu, x);
        const double dj = nu / x * j - bessel_j(nu + 1.0, x);
        const double step = j / dj;
        // keep Newton inside the half-spacing bracket around the guess
        x -= std::clamp(step, -0.5, 0.5);
        if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * x)
            break;
    }
    return x;
}

/// Zeros of J_nu scaled by 1/r, with the spacing checks the panel sums rely on.
struct OscillatoryPlan {
    double nu = 0.0;
    double r = 1.0;
    std::vector<double> zeros;  // zeros of J_nu(r s) in s
    int acceleration_depth = 12;

    OscillatoryPlan(double order, double scale, int depth = 12)
        : nu(order), r(scale), acceleration_depth(depth)
    {
        if (depth < 3)
            throw DomainError("OscillatoryPlan: acceleration depth must be >= 3");
    }

    /// Zero number idx (0-based) of J_nu(r s); extends the table on demand.
    double zero(std::size_t idx)
    {
        while (zeros.size() <= idx) {
            const double z = bessel_zero(nu, static_cast<int>(zeros.size()) + 1) / r;
            if (!zeros.empty() && !(z > zeros.back()))
                throw NonConvergent("OscillatoryPlan: Bessel zeros not strictly increasing");
            zeros.push_back(z);
        }
        return zeros[idx];
    }
};

struct OracleOptions {
    double rel_tol = 1e-13;
    int acceleration_depth = 12;
    int max_panels = 400000;
    double small_r = 0.2;                // plain adaptive quadrature below this scale
    double lower = 0.0;                  // integrate over [lower, inf)
    std::vector<double> breakpoints;     // weight kinks (e.g. cutoff support)
};

struct OscillatoryResult {
    double value = 0.0;
    double est_error = 0.0;
    int panels = 0;
    bool alternation_ok = true;
};

namespace detail {

inline double iterated_average(const std::deque<double>& sums)
{
    std::vector<double> a(sums.begin(), sums.end());
    for (std::size_t level = 1; level < a.size(); ++level)
        for (std::size_t j = 0; j + level < a.size(); ++j)
            a[j] = 0.5 * (a[j] + a[j + 1]);
    return a.front();
}

template <class F>
double piece(F& f, double a, double b, bool singular_start, double& err, double& l1)
{
    if (!(b > a))
        return 0.0;
    double e = 0.0, l = 0.0;
    double v;
    if (singular_start) {
        v = quad::tanh_sinh(f, a, b, 1e-14, &e, &l);
    } else {
        v = quad::kronrod_panel(f, a, b, &e, &l);
        // the Gauss/Kronrod difference overstates the error by 1-2 digits on smooth panels
        const double target = std::max({1e-12 * std::abs(v), 64.0 * std::numeric_limits<double>::epsilon() * l,
                                        1e-15 * l1});
        if (e > target) {
            e = 0.0;
            v = quad::kronrod_abs(f, a, b, target, 10, &e);
        }
    }
    err += e;
    l1 += std::abs(l);
    return v;
}

}  // namespace detail

/// \int_lower^inf J_nu(r s) w(s) ds for a nonnegative weight.
inline OscillatoryResult bessel_integral(double nu, double r, const Weight& weight,
                                         const OracleOptions& opts = {})
{
    if (!(r > 0.0))
        throw DomainError("bessel_integral: r must be positive");
    auto f = [&](double s) { return s <= 0.0 && nu > 0.0 ? 0.0 : bessel_j(nu, r * s) * weight(s); };
    OscillatoryResult out;
    double quad_err = 0.0;
    double l1 = 0.0;
    double l1_phase = 0.0;  // l1 weighted by the Bessel argument: J(x) carries ~ x eps of phase rounding
    const double eps = std::numeric_limits<double>::epsilon();

    std::vector<double> bps;
    for (double b : opts.breakpoints)
        if (b > opts.lower)
            bps.push_back(b);
    std::sort(bps.begin(), bps.end());

    // integrate [a, b] honouring breakpoints
    auto segment = [&](double a, double b, bool singular_start) {
        const double l1_before = l1;
        double total = 0.0;
        double from = a;
        bool first = singular_start;
        for (double bp : bps) {
            if (bp > from && bp < b) {
                total += detail::piece(f, from, bp, first, quad_err, l1);
                from = bp;
                first = false;
            }
        }
        total += detail::piece(f, from, b, first, quad_err, l1);
        l1_phase += (l1 - l1_before) * r * b;
        return total;
    };

    const double tail_start = bps.empty() ? opts.lower : std::max(opts.lower, bps.back());

    if (r < opts.small_r) {
        // Non-oscillatory over the bulk of the weight: fixed chunks, no acceleration.
        const double chunk = std::min(std::numbers::pi / r, 4.0);
        double a = opts.lower;
        double sum = 0.0;
        double peak = 0.0;
        int quiet = 0;
        for (int k = 0; k < opts.max_panels; ++k) {
            const double b = a + chunk;
            const double v = segment(a, b, k == 0 && opts.lower == 0.0);
            sum += v;
            peak = std::max(peak, std::abs(v));
            ++out.panels;
            a = b;
            if (a > tail_start && std::abs(v) <= opts.rel_tol * 1e-3 * peak)
                ++quiet;
            else
                quiet = 0;
            if (quiet >= 3)
                break;
        }
        if (quiet < 3)
            throw NonConvergent("bessel_integral: weight did not decay within panel cap");
        out.value = sum;
        out.est_error = quad_err + 32.0 * eps * (l1 + l1_phase);
        return out;
    }

    OscillatoryPlan plan(nu, r, opts.acceleration_depth);
    std::size_t zi = 0;
    while (plan.zero(zi) <= opts.lower)
        ++zi;

    std::deque<double> sums;
    double sum = 0.0;
    double prev_panel = 0.0;
    double peak = 0.0;
    double prev_acc = std::numeric_limits<double>::quiet_NaN();
    double last_change = std::numeric_limits<double>::infinity();
    int agree = 0;
    int direct = 0;
    double a = opts.lower;
    const int depth = opts.acceleration_depth;
    for (int k = 0; k < opts.max_panels; ++k, ++zi) {
        const double b = plan.zero(zi);
        const double v = segment(a, b, k == 0 && opts.lower == 0.0);
        ++out.panels;
        if (k > 0 && std::abs(v) > 1e-250 && std::abs(prev_panel) > 1e-250 && v * prev_panel > 0.0 &&
            b > tail_start)
            out.alternation_ok = false;
        prev_panel = v;
        sum += v;
        peak = std::max(peak, std::abs(v));
        a = b;
        if (std::abs(v) <= 1e-3 * eps * std::abs(sum))
            ++direct;
        else
            direct = 0;
        sums.push_back(sum);
        if (static_cast<int>(sums.size()) > depth + 1)
            sums.pop_front();
        if (a <= tail_start)
            continue;
        if (direct >= 3) {
            // weight already negligible: the plain partial sum is the answer
            out.value = sum;
            out.est_error = quad_err + 32.0 * eps * (l1 + l1_phase);
            return out;
        }
        if (static_cast<int>(sums.size()) <= depth)
            continue;
        const double acc = detail::iterated_average(sums);
        if (!std::isnan(prev_acc)) {
            last_change = std::abs(acc - prev_acc);
            const double floor = 32.0 * eps * (l1 + l1_phase);
            if (last_change <= opts.rel_tol * std::abs(acc) + floor && std::abs(v) <= 0.5 * peak)
                ++agree;
            else
                agree = 0;
        }
        prev_acc = acc;
        if (agree >= 3) {
            out.value = acc;
            out.est_error = last_change + quad_err + 32.0 * eps * (l1 + l1_phase);
            if (!out.alternation_ok)
                throw NonConvergent("bessel_integral: panel sums failed to alternate in sign");
            return out;
        }
    }
    throw NonConvergent("bessel_integral: acceleration stalled after " + std::to_string(out.panels) +
                        " panels (partial sum " + std::to_string(sum) + ", last change " +
                        std::to_string(last_change) + ")");
}

/// (2 pi)^{-d/2} r^{1-d/2} \int_0^inf J_{d/2-1}(r s) weight(s) ds.
inline Approximation hankel_oracle(const Weight& weight, int d, double r, const OracleOptions& opts = {})
{
    if (d < 2)
        throw DomainError("hankel_oracle: d must be >= 2");
    const double nu = 0.5 * d - 1.0;
    const auto res = bessel_integral(nu, r, weight, opts);
    const double scale = std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::pow(r, 1.0 - 0.5 * d);
    Approximation out;
    out.value = scale * res.value;
    out.est_error = scale * res.est_error;
    out.method = Method::oracle;
    out.diagnostics.panels = res.panels;
    return out;
}

/// s^{d/2 + beta} exp(-t s^alpha): the radial weight of the stable kernel.
inline Weight stable_weight(int d, double alpha, double beta, double t)
{
    const double p = 0.5 * d + beta;
    return [=](double s) { return s <= 0.0 ? 0.0 : std::exp(p * std::log(s) - t * std::pow(s, alpha)); };
}

}  // namespace levykernel
