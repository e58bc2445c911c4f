#pragma once

// Kernels of general radial Levy symbols eta(|xi|): the Mellin transform of
// D^k e^{-t eta}, the contour representation built on it, leading terms, and
// the cutoff tail integral.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "levykernel/approximation.hpp"
#include "levykernel/error.hpp"
#include "levykernel/mellin.hpp"
#include "levykernel/oracle.hpp"
#include "levykernel/quadrature.hpp"
#include "levykernel/specfun.hpp"
#include "levykernel/stable_kernel.hpp"

namespace levykernel {

struct RadialSymbol {
    std::string name;
    std::function<double(double)> eta;
    std::function<double(double, int)> eta_deriv;  // m-th derivative at r > 0, m >= 1
    double eta_at_zero = 0.0;
    int k = 10;
    double alpha_index = 1.0;
    double A_bound = 1.0;
    std::optional<double> delta;
    std::optional<double> M_growth;
    double eta1_at_zero = 0.0;  // value at 0 of eta - r^alpha for perturbed symbols
    std::uint64_t id = 0;

    double derivative(double r, int m) const
    {
        if (m > k)
            throw OrderExceeded("RadialSymbol " + name + ": derivative order " + std::to_string(m) +
                                " exceeds k = " + std::to_string(k));
        return m == 0 ? eta(r) : eta_deriv(r, m);
    }
};

namespace detail {

inline std::uint64_t next_symbol_id()
{
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

/// a (a-1) ... (a-m+1)
inline double falling(double a, int m)
{
    double p = 1.0;
    for (int j = 0; j < m; ++j)
        p *= a - j;
    return p;
}

inline double power_derivative(double a, double r, int m)
{
    const double f = falling(a, m);
    return f == 0.0 ? 0.0 : f * std::pow(r, a - m);
}

inline std::vector<double> log_grid(double lo, double hi, int n)
{
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

/// Sampled sup over [lo, hi] and 0 <= m <= k (m >= m_min) of r^{-a+m} |D^m f(r)|.
template <class Deriv>
double sampled_sup(const Deriv& deriv, double a, int k, int m_min, double lo, double hi)
{
    double sup = 0.0;
    for (double r : log_grid(lo, hi, 801))
        for (int m = m_min; m <= k; ++m)
            sup = std::max(sup, std::pow(r, m - a) * std::abs(deriv(r, m)));
    return sup;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Built-in symbols

/// eta(r) = r^a
inline RadialSymbol make_stable(double a, int k = 10)
{
    if (!(a > 0.0 && a < 2.0))
        throw DomainError("stable symbol: need 0 < a < 2");
    RadialSymbol s;
    s.name = "stable";
    s.eta = [a](double r) { return std::pow(r, a); };
    s.eta_deriv = [a](double r, int m) { return detail::power_derivative(a, r, m); };
    s.k = k;
    s.alpha_index = a;
    s.A_bound = 0.0;
    for (int m = 0; m <= k; ++m)
        s.A_bound = std::max(s.A_bound, std::abs(detail::falling(a, m)));
    s.id = detail::next_symbol_id();
    return s;
}

/// eta(r) = r^a + c r^b with 0 < a < b; regular at the origin with index a,
/// polynomial growth b at infinity.
inline RadialSymbol make_power_pair(const std::string& name, double a, double b, double c, int k)
{
    RadialSymbol s;
    s.name = name;
    s.eta = [a, b, c](double r) { return std::pow(r, a) + c * std::pow(r, b); };
    s.eta_deriv = [a, b, c](double r, int m) {
        return detail::power_derivative(a, r, m) + c * detail::power_derivative(b, r, m);
    };
    s.k = k;
    s.alpha_index = a;
    s.A_bound = 0.0;
    for (int m = 0; m <= k; ++m)
        s.A_bound = std::max(s.A_bound, std::abs(detail::falling(a, m)) + std::abs(c * detail::falling(b, m)));
    s.M_growth = b;
    s.id = detail::next_symbol_id();
    return s;
}

/// eta(r) = r^a + r^b, 0 < a < b < 2
inline RadialSymbol make_sum_stable(double a, double b, int k = 10)
{
    if (!(0.0 < a && a < b && b < 2.0))
        throw DomainError("sum_stable symbol: need 0 < a < b < 2");
    return make_power_pair("sum_stable", a, b, 1.0, k);
}

/// eta(r) = r^a + c r^delta with delta > a, c > 0
inline RadialSymbol make_perturbed(double a, double c, double delta, int k = 10)
{
    if (!(a > 0.0 && a < 2.0 && delta > a && c > 0.0))
        throw DomainError("perturbed symbol: need 0 < a < 2, delta > a, c > 0");
    RadialSymbol s = make_power_pair("perturbed", a, delta, c, k);
    s.delta = delta;
    s.eta1_at_zero = 0.0;
    return s;
}

/// eta(r) = (r^2 + m^2)^{a/2} - m^a
inline RadialSymbol make_relativistic(double a, double mass, int k = 10)
{
    if (!(a > 0.0 && a < 2.0 && mass > 0.0))
        throw DomainError("relativistic symbol: need 0 < alpha < 2 and m > 0");
    RadialSymbol s;
    s.name = "relativistic";
    const double h = 0.5 * a;
    const double m2 = mass * mass;
    s.eta = [=](double r) { return std::pow(mass, a) * std::expm1(h * std::log1p(r * r / m2)); };
    // D^n f(r^2 + m^2) = sum_j n! / (j! (n-2j)!) (2r)^{n-2j} f^{(n-j)}(r^2 + m^2)
    s.eta_deriv = [=](double r, int n) {
        const double u = r * r + m2;
        double sum = 0.0;
        double fact_n = std::tgamma(n + 1.0);
        for (int j = 0; 2 * j <= n; ++j) {
            const double coeff = fact_n / (std::tgamma(j + 1.0) * std::tgamma(n - 2.0 * j + 1.0));
            sum += coeff * std::pow(2.0 * r, n - 2 * j) * detail::power_derivative(h, u, n - j);
        }
        return sum;
    };
    s.k = k;
    s.alpha_index = a;
    s.A_bound = 1.001 * detail::sampled_sup(
                            [&](double r, int m) { return m == 0 ? s.eta(r) : s.eta_deriv(r, m); }, a, k, 0,
                            1e-4, 1e4);
    s.id = detail::next_symbol_id();
    return s;
}

struct SymbolRegistryEntry {
    std::string name;
    std::vector<std::string> parameters;
    std::string formula;
};

inline const std::vector<SymbolRegistryEntry>& symbol_registry()
{
    static const std::vector<SymbolRegistryEntry> entries{
        {"stable", {"alpha"}, "r^alpha"},
        {"sum_stable", {"a", "b"}, "r^a + r^b"},
        {"relativistic", {"alpha", "m"}, "(r^2 + m^2)^(alpha/2) - m^alpha"},
        {"perturbed", {"alpha", "c", "delta"}, "r^alpha + c r^delta"},
    };
    return entries;
}

/// Builds a registry symbol from its kind and named parameters; "k" is optional.
inline RadialSymbol make_symbol(const std::string& kind, const std::map<std::string, double>& params)
{
    auto get = [&](const std::string& key) {
        const auto it = params.find(key);
        if (it == params.end())
            throw DomainError("symbol '" + kind + "': missing parameter '" + key + "'");
        return it->second;
    };
    const auto kit = params.find("k");
    const int k = kit == params.end() ? 10 : static_cast<int>(kit->second);
    for (const auto& [key, value] : params) {
        (void)value;
        bool known = key == "k";
        for (const auto& e : symbol_registry())
            if (e.name == kind)
                known = known || std::find(e.parameters.begin(), e.parameters.end(), key) != e.parameters.end();
        if (!known)
            throw DomainError("symbol '" + kind + "': unknown parameter '" + key + "'");
    }
    if (kind == "stable")
        return make_stable(get("alpha"), k);
    if (kind == "sum_stable")
        return make_sum_stable(get("a"), get("b"), k);
    if (kind == "relativistic")
        return make_relativistic(get("alpha"), get("m"), k);
    if (kind == "perturbed") {
        const auto it = params.find("c");
        return make_perturbed(get("alpha"), it == params.end() ? 1.0 : it->second, get("delta"), k);
    }
    throw DomainError("unknown symbol kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Regularity

struct RegularityReport {
    bool order_ok = false;      // k > (d+3)/2 + beta
    bool global_ok = false;     // sup over all r of r^{-alpha+m}|D^m eta| <= 1.01 A
    bool localized_ok = false;  // same over r < 1 (m >= 1), plus growth r^M for r > 1
    bool growth_ok = false;     // eta(r)/log r increasing at 1e2, 1e4, 1e6
    double sampled_sup = 0.0;

    bool ok() const { return order_ok && growth_ok && (global_ok || localized_ok); }
};

inline RegularityReport check_regularity(const RadialSymbol& sym, int d, double beta)
{
    RegularityReport rep;
    rep.order_ok = sym.k > 0.5 * (d + 3) + beta;
    auto deriv = [&](double r, int m) { return sym.derivative(r, m); };
    rep.sampled_sup = detail::sampled_sup(deriv, sym.alpha_index, sym.k, 0, 1e-4, 1e4);
    rep.global_ok = rep.sampled_sup <= 1.01 * sym.A_bound;
    if (sym.M_growth) {
        const double local = detail::sampled_sup(deriv, sym.alpha_index, sym.k, 1, 1e-4, 1.0);
        double growth = 0.0;
        for (double r : detail::log_grid(1.0, 1e4, 401))
            for (int m = 0; m <= sym.k; ++m)
                growth = std::max(growth, std::abs(deriv(r, m)) * std::pow(r, -*sym.M_growth));
        rep.localized_ok = local <= 1.01 * sym.A_bound && std::isfinite(growth);
    }
    double prev = -std::numeric_limits<double>::infinity();
    rep.growth_ok = true;
    for (double r : {1e2, 1e4, 1e6}) {
        const double q = sym.eta(r) / std::log(r);
        rep.growth_ok = rep.growth_ok && q > prev;
        prev = q;
    }
    return rep;
}

/// Largest relative gap between analytic derivatives (orders 1..m_max) and
/// Richardson-extrapolated central differences of the next lower order.
inline double verify_derivatives(const RadialSymbol& sym, int m_max, int samples = 20)
{
    double worst = 0.0;
    for (double r : detail::log_grid(0.05, 20.0, samples)) {
        for (int m = 1; m <= std::min(m_max, sym.k); ++m) {
            auto lower = [&](double x) { return sym.derivative(x, m - 1); };
            const double h = 1e-3 * r;
            const double d1 = (lower(r + h) - lower(r - h)) / (2.0 * h);
            const double d2 = (lower(r + 0.5 * h) - lower(r - 0.5 * h)) / h;
            const double fd = (4.0 * d2 - d1) / 3.0;
            const double exact = sym.derivative(r, m);
            const double scale = std::max(std::abs(exact), 1e-8 * std::abs(lower(r)) / r);
            worst = std::max(worst, std::abs(fd - exact) / scale);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Derivatives of exp(-t eta)

inline constexpr int max_derivative_order = 24;

using DerivativeArray = std::array<double, max_derivative_order + 1>;

/// Complete Bell polynomials B_0..B_n of x_1..x_n (x[0] unused).
inline DerivativeArray complete_bell(const DerivativeArray& x, int n)
{
    DerivativeArray B{};
    B[0] = 1.0;
    for (int m = 0; m < n; ++m) {
        double binom = 1.0;  // C(m, i)
        double sum = 0.0;
        for (int i = 0; i <= m; ++i) {
            sum += binom * B[m - i] * x[i + 1];
            binom = binom * (m - i) / (i + 1);
        }
        B[m + 1] = sum;
    }
    return B;
}

/// D^m e^{-t eta(r)} for m = 0..n.
inline DerivativeArray exp_eta_derivatives(const RadialSymbol& sym, double t, double r, int n)
{
    if (n > sym.k || n > max_derivative_order)
        throw OrderExceeded("exp_eta_derivative: order " + std::to_string(n) + " exceeds k = " +
                            std::to_string(sym.k));
    const double e = std::exp(-t * sym.eta(r));
    DerivativeArray x{};
    for (int j = 1; j <= n; ++j)
        x[j] = -t * sym.eta_deriv(r, j);
    auto B = complete_bell(x, n);
    for (int j = 0; j <= n; ++j)
        B[j] *= e;
    return B;
}

inline double exp_eta_derivative(const RadialSymbol& sym, double t, double r, int m)
{
    if (!(r > 0.0))
        throw DomainError("exp_eta_derivative: r must be positive");
    return exp_eta_derivatives(sym, t, r, m)[m];
}

/// Stirling numbers of the second kind S(m, j), 0 <= j <= m.
inline std::vector<double> stirling2_row(int m)
{
    std::vector<double> row(m + 1, 0.0);
    row[0] = 1.0;
    for (int n = 1; n <= m; ++n) {
        std::vector<double> next(m + 1, 0.0);
        for (int j = 1; j <= n; ++j)
            next[j] = j * row[j] + row[j - 1];
        row = next;
    }
    return row;
}

/// Bound on |r^m D^m e^{-t eta}| e^{t eta}: sum_j S(m, j) (A t r^alpha)^j.
inline double derivative_bound(const RadialSymbol& sym, double t, double r, int m)
{
    const double y = sym.A_bound * t * std::pow(r, sym.alpha_index);
    const auto S = stirling2_row(m);
    double sum = 0.0;
    double p = 1.0;
    for (int j = 1; j <= m; ++j) {
        p *= y;
        sum += S[j] * p;
    }
    return m == 0 ? 1.0 : sum;
}

// ---------------------------------------------------------------------------
// Mellin transforms

struct MellinOptions {
    double rel_tol = 1e-13;
    int max_panels = 200000;
};

namespace detail {

class MkMemo {
public:
    using Key = std::tuple<std::uint64_t, double, int, double, double>;

    std::optional<complex> find(const Key& key) const
    {
        std::shared_lock lock(mutex_);
        const auto it = table_.find(key);
        if (it == table_.end())
            return std::nullopt;
        return it->second;
    }

    void insert(const Key& key, complex value)
    {
        std::unique_lock lock(mutex_);
        table_.emplace(key, value);
    }

    void clear()
    {
        std::unique_lock lock(mutex_);
        table_.clear();
    }

    std::size_t size() const
    {
        std::shared_lock lock(mutex_);
        return table_.size();
    }

private:
    mutable std::shared_mutex mutex_;
    std::map<Key, complex> table_;
};

inline MkMemo& mk_memo()
{
    static MkMemo memo;
    return memo;
}

}  // namespace detail

inline void clear_mellin_cache()
{
    detail::mk_memo().clear();
}

inline std::size_t mellin_cache_size()
{
    return detail::mk_memo().size();
}

/// \int_0^inf D^k(e^{-t eta(r)}) r^{z+k-1} dr by the substitution r = e^u,
/// marching panels outward from u = 0 until both tails are negligible.
inline complex mellin_Mk_uncached(const RadialSymbol& sym, double t, complex z, int k,
                                  const MellinOptions& opts = {})
{
    if (!(z.real() > -sym.alpha_index))
        throw StripViolation("mellin_Mk: need Re z > -alpha");
    if (k > sym.k)
        throw OrderExceeded("mellin_Mk: k exceeds the symbol's derivative order");
    const complex w = z + static_cast<double>(k);
    auto g = [&](double u) -> complex {
        const double r = std::exp(u);
        const double dk = k == 0 ? std::exp(-t * sym.eta(r)) : exp_eta_derivatives(sym, t, r, k)[k];
        if (dk == 0.0)
            return {0.0, 0.0};
        return dk * std::exp(w * u);
    };
    const double width = std::min(1.0, std::numbers::pi / std::max(1.0, std::abs(z.imag())));
    const double eps = std::numeric_limits<double>::epsilon();
    complex total{0.0, 0.0};
    double l1 = 0.0;
    int panels = 0;
    for (int dir : {+1, -1}) {
        double u = 0.0;
        int quiet = 0;
        while (quiet < 3) {
            if (++panels > opts.max_panels)
                throw NonConvergent("mellin_Mk: integrand did not decay within the panel cap");
            const double a = u, b = u + dir * width;
            double err = 0.0, pl1 = 0.0;
            const complex v = quad::kronrod_panel(g, std::min(a, b), std::max(a, b), &err, &pl1);
            complex piece = v;
            // refine only above the rounding floor of the integral so far
            const double target = std::max({opts.rel_tol * std::abs(v), 100.0 * eps * pl1, 10.0 * eps * l1});
            if (err > target) {
                double e2 = 0.0;
                piece = quad::kronrod_abs(g, std::min(a, b), std::max(a, b), target, 8, &e2);
            }
            total += piece;
            l1 += pl1;
            quiet = (pl1 <= 1e-18 * l1) ? quiet + 1 : 0;
            u = b;
            if (u < -745.0 || u > 745.0)
                throw NonConvergent("mellin_Mk: integration range exceeded");
        }
    }
    return total;
}

inline complex mellin_Mk(const RadialSymbol& sym, double t, complex z, int k, const MellinOptions& opts = {})
{
    const detail::MkMemo::Key key{sym.id, t, k, z.real(), z.imag()};
    auto& memo = detail::mk_memo();
    if (sym.id != 0) {
        if (auto hit = memo.find(key))
            return *hit;
    }
    const complex v = mellin_Mk_uncached(sym, t, z, k, opts);
    if (sym.id != 0)
        memo.insert(key, v);
    return v;
}

/// M_t(z) = (-1)^k Gamma(z) / Gamma(z+k) M_t^k(z), continued to Re z > -alpha.
inline complex mellin_M(const RadialSymbol& sym, double t, complex z, int k, const MellinOptions& opts = {})
{
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const complex ratio = std::exp(log_gamma(z) - log_gamma(z + static_cast<double>(k)));
    return sign * ratio * mellin_Mk(sym, t, z, k, opts);
}

// ---------------------------------------------------------------------------
// Kernel representation

/// Smallest integer above (d+3)/2 + beta + 1.
inline int default_order(int d, double beta)
{
    return static_cast<int>(std::floor(0.5 * (d + 3) + beta + 1.0)) + 1;
}

inline Strip general_strip(int d, double beta)
{
    return {0.5 * (d + 1) + beta, d + beta};
}

struct GeneralMbOptions {
    std::optional<int> k;
    std::optional<ContourSpec> contour;
    std::optional<double> abscissa;
    double rel_tol = 1e-10;
    double truncation_tol = 1e-12;
    unsigned workers = 1;
    MellinOptions mellin;
};

inline Approximation general_kernel_mb(const RadialSymbol& sym, int d, double beta, double t, double r,
                                       const GeneralMbOptions& opts = {})
{
    if (d < 2 || !(beta >= 0.0) || !(t > 0.0) || !(r > 0.0))
        throw DomainError("general_kernel_mb: need d >= 2, beta >= 0, t > 0, r > 0");
    const int k = opts.k.value_or(default_order(d, beta));
    if (!(k > 0.5 * (d + 3) + beta))
        throw DomainError("general_kernel_mb: need k > (d+3)/2 + beta");
    if (k > sym.k)
        throw OrderExceeded("general_kernel_mb: k exceeds the symbol's derivative order");
    const Strip strip = general_strip(d, beta);
    const double db = d + beta;
    const double lr = std::log(r);
    auto f = [&](complex z) {
        const complex lg = log_gamma(z) + log_gamma(0.5 * (db - z)) + (beta - z) * std::numbers::ln2 -
                           log_gamma(z + static_cast<double>(k)) - log_gamma(0.5 * (z - beta)) + z * lr;
        return std::exp(lg) * mellin_Mk(sym, t, z, k, opts.mellin);
    };
    ContourSpec contour;
    if (opts.contour) {
        contour = *opts.contour;
        if (!strip.contains(contour.abscissa))
            throw StripViolation("general_kernel_mb: abscissa outside (" + std::to_string(strip.lower) + ", " +
                                 std::to_string(strip.upper) + ")");
    } else {
        contour.abscissa = opts.abscissa.value_or(default_abscissa(strip, r));
        if (!strip.contains(contour.abscissa))
            throw StripViolation("general_kernel_mb: abscissa outside (" + std::to_string(strip.lower) + ", " +
                                 std::to_string(strip.upper) + ")");
        contour.half_height = auto_truncation(f, contour.abscissa, opts.truncation_tol);
        contour.nodes = std::max(64, static_cast<int>(4.0 * contour.half_height));
    }
    LineIntegralOptions lo;
    lo.rel_tol = opts.rel_tol;
    lo.exploit_symmetry = true;
    lo.workers = opts.workers;
    const auto li = vertical_line_integral(f, contour, lo);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double scale = sign * std::pow(std::numbers::pi, -0.5 * d) * std::exp(-db * lr);
    Approximation out;
    out.value = scale * li.value.real();
    out.est_error = std::abs(scale) * (li.discretization_estimate + li.tail_bound +
                                       64.0 * std::numeric_limits<double>::epsilon() * li.magnitude);
    out.method = Method::mb_contour;
    out.diagnostics.nodes_used = li.nodes_used;
    out.diagnostics.truncation_height = contour.half_height;
    out.diagnostics.abscissa = contour.abscissa;
    return out;
}

/// Oracle for a general symbol: s^{d/2+beta} e^{-t eta(s)} against J_{d/2-1}.
inline Approximation general_oracle(const RadialSymbol& sym, int d, double beta, double t, double r,
                                    const OracleOptions& opts = {})
{
    const double p = 0.5 * d + beta;
    Weight w = [&sym, p, t](double s) { return s <= 0.0 ? 0.0 : std::exp(p * std::log(s) - t * sym.eta(s)); };
    return hankel_oracle(w, d, r, opts);
}

struct LeadingTerm {
    double coefficient = 0.0;
    double exponent = 0.0;
};

inline LeadingTerm general_leading_term(const RadialSymbol& sym, int d, double beta, double t)
{
    if (is_even_integer(beta))
        throw ParityError("general_leading_term: beta must not be 0, 2, 4, ...");
    const double c = std::pow(2.0, beta) * std::tgamma(0.5 * (d + beta)) * std::exp(-t * sym.eta_at_zero) /
                     (std::pow(std::numbers::pi, 0.5 * d) * gamma_real(-0.5 * beta));
    return {c, d + beta};
}

inline LeadingTerm perturbed_leading_term(double alpha, double eta1_at_zero, int d, double beta, double t)
{
    if (!is_even_integer(beta))
        throw ParityError("perturbed_leading_term: beta must be 0, 2, 4, ...");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw DomainError("perturbed_leading_term: need 0 < alpha < 2");
    const double c = -std::pow(2.0, beta + alpha) * std::tgamma(0.5 * (d + beta + alpha)) * t *
                     std::exp(-t * eta1_at_zero) /
                     (std::pow(std::numbers::pi, 0.5 * d) * gamma_real(-0.5 * (beta + alpha)));
    return {c, d + beta + alpha};
}

// ---------------------------------------------------------------------------
// Cutoff tail

/// Smoothstep on [1, 2] whose first `order` derivatives vanish at both ends;
/// 0 below 1, 1 above 2. The polynomial equals the regularized incomplete
/// beta function I_x(order+1, order+1), which avoids the cancellation of its
/// power-basis form.
struct Cutoff {
    int order = 0;
    bool zero = false;

    double operator()(double s) const
    {
        if (zero || s <= 1.0)
            return 0.0;
        if (s >= 2.0)
            return 1.0;
        return boost::math::ibeta(order + 1.0, order + 1.0, s - 1.0);
    }
};

/// Cutoff for a tail integral of smoothness N: N + 1 vanishing derivatives.
inline Cutoff smoothstep_cutoff(int N)
{
    if (N < 0)
        throw DomainError("smoothstep_cutoff: N must be >= 0");
    return Cutoff{N + 1, false};
}

inline double tail_integral(const RadialSymbol& sym, int d, double beta, double t, double r, const Cutoff& psi,
                            const OracleOptions& base = {})
{
    if (psi.zero)
        return 0.0;
    const double p = 0.5 * d + beta;
    Weight w = [&](double s) { return psi(s) * std::exp(p * std::log(s) - t * sym.eta(s)); };
    OracleOptions opts = base;
    opts.lower = 1.0;
    opts.breakpoints = {2.0};
    opts.small_r = 0.0;
    return bessel_integral(0.5 * d - 1.0, r, w, opts).value;
}

/// Least-squares slope of log |E| against log r, with |E| replaced by its
/// running maximum over windows of width 2 pi (E oscillates in r).
inline double decay_slope(const std::vector<double>& r_grid, const std::vector<double>& values)
{
    if (r_grid.size() != values.size() || r_grid.size() < 3)
        throw DomainError("decay_slope: need matching grids with at least 3 points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
        double env = 0.0;
        for (std::size_t j = 0; j < r_grid.size(); ++j)
            if (std::abs(r_grid[j] - r_grid[i]) <= std::numbers::pi)
                env = std::max(env, std::abs(values[j]));
        if (env > 0.0) {
            xs.push_back(std::log(r_grid[i]));
            ys.push_back(std::log(env));
        }
    }
    if (xs.size() < 3)
        throw DomainError("decay_slope: too few nonzero values");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace levykernel
