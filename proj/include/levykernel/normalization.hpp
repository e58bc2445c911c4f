#pragma once

// Total mass omega_{d-1} \int_0^inf K(r) r^{d-1} dr of a beta = 0 kernel.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "levykernel/error.hpp"
#include "levykernel/oracle.hpp"
#include "levykernel/quadrature.hpp"
#include "levykernel/stable_kernel.hpp"

namespace levykernel {

struct NormalizationOptions {
    double cutoff = 40.0;  // numeric quadrature on [0, cutoff] in units of t^{1/alpha}
    double rel_tol = 1e-11;
};

/// Mass of the radial profile `kernel` for the spec: adaptive quadrature up
/// to the cutoff, then the residue series integrated term by term.
inline double normalization_mass(const KernelSpec& spec, const std::function<double(double)>& kernel,
                                 const NormalizationOptions& opts = {})
{
    spec.validate();
    if (spec.beta != 0.0)
        throw DomainError("normalization_check: requires beta = 0");
    const double scale = std::pow(spec.t, 1.0 / spec.alpha);
    // beyond r' = 14 the Gaussian profile is below 1e-21
    const double cutoff = spec.alpha == 2.0 ? std::min(opts.cutoff, 14.0) : opts.cutoff;
    const double R = cutoff * scale;
    auto f = [&](double r) { return kernel(r) * std::pow(r, spec.d - 1); };
    // the mass is O(1): target an absolute error on the radial integral
    const double scale_mass = 1.0 / sphere_area(spec.d);
    double body = 0.0;
    double a = 0.0;
    for (double b : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, cutoff}) {
        b *= scale;
        if (b <= a)
            continue;
        body += quad::kronrod_abs(f, a, std::min(b, R), opts.rel_tol * std::max(body, 1e-3 * scale_mass), 10);
        a = b;
        if (a >= R)
            break;
    }
    double tail = 0.0;
    if (spec.alpha < 2.0) {
        // \int_R^inf c_n r^{-d-n alpha} r^{d-1} dr = c_n R^{-n alpha} / (n alpha)
        const auto series = stable_series(spec, R);
        for (const auto& term : series.terms)
            if (!term.vanished && term.n > 0)
                tail += term.coefficient * std::pow(R, -term.n * spec.alpha) / (term.n * spec.alpha);
    }
    return sphere_area(spec.d) * (body + tail);
}

/// Mass computed from the oracle (or any explicit method); expected 1.
inline double normalization_check(const KernelSpec& spec, std::optional<Method> method = Method::oracle,
                                  const NormalizationOptions& opts = {})
{
    return normalization_mass(spec, [&](double r) { return evaluate(spec, r, method).value; }, opts);
}

}  // namespace levykernel
