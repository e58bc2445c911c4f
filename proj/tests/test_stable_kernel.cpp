#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "levykernel/normalization.hpp"
#include "levykernel/stable_kernel.hpp"

using namespace levykernel;
using std::numbers::pi;

namespace {

std::vector<double> log_spaced(double lo, double hi, int n)
{
    std::vector<double> out;
    for (int i = 0; i < n; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return out;
}

double fitted_slope(const std::vector<double>& r, const std::vector<double>& v)
{
    double n = r.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = std::log(r[i]), y = std::log(std::abs(v[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(KernelSpec, Validation)
{
    EXPECT_THROW((KernelSpec{1, 1.0, 0.0, 1.0}.validate()), DomainError);
    EXPECT_THROW((KernelSpec{2, 2.5, 0.0, 1.0}.validate()), DomainError);
    EXPECT_THROW((KernelSpec{2, 1.0, -1.0, 1.0}.validate()), DomainError);
    EXPECT_THROW((KernelSpec{2, 1.0, 0.0, 0.0}.validate()), DomainError);
    EXPECT_NO_THROW((KernelSpec{2, 2.0, 0.0, 1.0}.validate()));
}

TEST(Scaling, Examples)
{
    auto s = scaling_reduce({2, 1.0, 0.0, 4.0}, 8.0);
    EXPECT_DOUBLE_EQ(s.prefactor, 1.0 / 16.0);
    EXPECT_DOUBLE_EQ(s.r_scaled, 2.0);
    s = scaling_reduce({2, 1.3, 0.4, 1.0}, 3.7);
    EXPECT_EQ(s.prefactor, 1.0);
    EXPECT_EQ(s.r_scaled, 3.7);
    EXPECT_EQ(s.unit.t, 1.0);
    s = scaling_reduce({3, 1.5, 1.5, 2.0}, 1.0);
    EXPECT_NEAR(s.prefactor, 1.0 / 8.0, 1e-16);
    EXPECT_NEAR(s.r_scaled, std::pow(2.0, -2.0 / 3.0), 1e-16);
}

TEST(Scaling, ExactForContourIntegral)
{
    for (double t : {0.1, 1.0, 10.0})
        for (double r : {0.7, 3.0}) {
            const KernelSpec spec{2, 1.5, 0.7, t};
            const auto s = scaling_reduce(spec, r);
            const double direct = stable_mb(spec, r).value;
            const double reduced = s.prefactor * stable_mb(s.unit, s.r_scaled).value;
            EXPECT_LE(std::abs(direct - reduced) / std::abs(reduced), 1e-10) << t << " " << r;
        }
}

TEST(ClosedForms, Examples)
{
    EXPECT_NEAR(gaussian_kernel(2, 1, 0), 1 / (4 * pi), 1e-17);
    EXPECT_NEAR(gaussian_kernel(2, 1, 2), std::exp(-1.0) / (4 * pi), 1e-17);
    EXPECT_NEAR(poisson_kernel(2, 1, 0), 1 / (2 * pi), 1e-16);
    EXPECT_NEAR(poisson_kernel(3, 1, 0), 1 / (pi * pi), 1e-16);
    EXPECT_NEAR(poisson_kernel(2, 2, 0), 0.25 / (2 * pi), 1e-16);
}

TEST(KernelAtOrigin, Examples)
{
    EXPECT_NEAR(kernel_at_origin({2, 2.0, 0.0, 1.0}), gaussian_kernel(2, 1, 0), 1e-16);
    EXPECT_NEAR(kernel_at_origin({2, 1.0, 0.0, 1.0}), poisson_kernel(2, 1, 0), 1e-16);
    EXPECT_NEAR(kernel_at_origin({3, 1.5, 0.0, 1.0}), std::pow(2 * pi, -3) * 4 * pi / 1.5, 1e-16);
    const KernelSpec s{3, 1.5, 0.0, 1.0};
    EXPECT_NEAR(stable_oracle(s, 1e-3).value / kernel_at_origin(s), 1.0, 1e-4);
}

TEST(StableMb, Examples)
{
    EXPECT_NEAR(stable_mb({2, 1.0, 0.0, 1.0}, 1.0).value, std::pow(2.0, -1.5) / (2 * pi), 1e-14);
    EXPECT_NEAR(stable_mb({3, 1.0, 0.0, 1.0}, 2.0).value, 1 / (25 * pi * pi), 1e-15);
    const KernelSpec s{2, 1.5, 0.0, 1.0};
    const double mb = stable_mb(s, 5.0).value, orc = stable_oracle(s, 5.0).value;
    EXPECT_LE(std::abs(mb - orc) / orc, 1e-6);
}

TEST(StableMb, StripChecks)
{
    MbOptions o;
    o.abscissa = 2.5;
    EXPECT_THROW(stable_mb({2, 1.5, 0.0, 1.0}, 1.0, o), StripViolation);
    o.abscissa = 0.4;
    EXPECT_THROW(stable_mb({2, 1.5, 0.0, 1.0}, 1.0, o), StripViolation);
    EXPECT_THROW(stable_mb({2, 2.0, 0.0, 1.0}, 1.0), DomainError);
    EXPECT_THROW(stable_mb({2, 1.0, 0.0, 1.0}, 0.0), DomainError);
    const Strip st = mb_strip({3, 1.2, 0.7, 1.0});
    EXPECT_DOUBLE_EQ(st.lower, 1.0 + 0.7);
    EXPECT_DOUBLE_EQ(st.upper, 3.7);
}

TEST(StableMb, OracleGrid)
{
    double worst = 0.0;
    for (int d : {2, 3})
        for (double a : {0.5, 1.0, 1.5})
            for (double b : {0.0, 0.7})
                for (double r : {0.5, 1.0, 2.0, 5.0, 10.0}) {
                    const KernelSpec s{d, a, b, 1.0};
                    const double mb = stable_mb(s, r).value;
                    const double orc = stable_oracle(s, r).value;
                    const double rel = std::abs(mb - orc) / std::abs(orc);
                    worst = std::max(worst, rel);
                    EXPECT_LE(rel, 1e-6) << d << " " << a << " " << b << " " << r;
                }
    RecordProperty("worst", std::to_string(worst));
}

TEST(StableMb, PoissonOnWideRange)
{
    for (int d : {2, 3})
        for (double r : log_spaced(0.05, 20.0, 15)) {
            const double v = stable_mb({d, 1.0, 0.0, 1.0}, r).value;
            EXPECT_LE(std::abs(v / poisson_kernel(d, 1.0, r) - 1.0), 1e-8) << d << " " << r;
        }
}

TEST(StableMb, PositiveDensity)
{
    for (int d : {2, 3})
        for (double a : {0.5, 1.2, 1.8})
            for (double r : log_spaced(0.5, 200.0, 12))
                EXPECT_GT(stable_mb({d, a, 0.0, 1.0}, r).value, 0.0) << d << " " << a << " " << r;
}

TEST(StableMb, ReproducibleAcrossWorkers)
{
    const KernelSpec s{2, 1.3, 0.4, 1.0};
    MbOptions one, four;
    four.workers = 4;
    EXPECT_EQ(stable_mb(s, 2.5, one).value, stable_mb(s, 2.5, four).value);
}

TEST(StableSeries, CoefficientFormula)
{
    const KernelSpec s{2, 1.5, 0.0, 1.0};
    for (int n = 1; n <= 5; ++n) {
        const SeriesTerm term = series_term(s, n);
        const double na = n * 1.5;
        EXPECT_EQ(term.vanished, n == 4) << n;
        const double expect = n == 4 ? 0.0
                                     : std::pow(-1.0, n) / std::tgamma(n + 1.0) * std::tgamma((2 + na) / 2) *
                                           std::pow(2.0, na) / std::tgamma(-na / 2) / pi;
        EXPECT_NEAR(term.coefficient, expect, 1e-13 * std::abs(expect)) << n;
        EXPECT_DOUBLE_EQ(term.exponent, 2 + na);
    }
    EXPECT_TRUE(series_term(s, 0).vanished);
}

TEST(StableSeries, IndicatorVanishes)
{
    const KernelSpec s{2, 1.0, 0.0, 1.0};
    EXPECT_TRUE(series_term(s, 2).vanished);
    EXPECT_TRUE(series_term(s, 4).vanished);
    EXPECT_FALSE(series_term(s, 1).vanished);
    EXPECT_FALSE(series_term(s, 3).vanished);
}

TEST(StableSeries, OneTermPoisson)
{
    const KernelSpec s{2, 1.0, 0.0, 1.0};
    const auto one = stable_series(s, 10.0, 1);
    EXPECT_NEAR(one.value, 1e-3 / (2 * pi), 1e-15);
    EXPECT_NEAR(poisson_kernel(2, 1, 10), 1.5680e-4, 1e-8);
    double prev = 1.0;
    for (double r : {10.0, 30.0, 100.0}) {
        const double gap = std::abs(stable_series(s, r, 1).value / poisson_kernel(2, 1, r) - 1);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
}

TEST(StableSeries, OptimalTruncationAndErrors)
{
    const KernelSpec s{2, 1.5, 0.0, 1.0};
    const auto auto_n = stable_series(s, 20.0);
    EXPECT_GT(auto_n.diagnostics.terms_used, 1);
    const double mb = stable_mb(s, 20.0).value;
    EXPECT_LE(std::abs(auto_n.value - mb), 2 * auto_n.est_error + 1e-15);
    EXPECT_THROW(stable_series({2, 2.0, 0.0, 1.0}, 10.0), DomainError);
    EXPECT_THROW(stable_series(s, 10.0, 0), DomainError);
}

TEST(StableSeries, AsymptoticControl)
{
    for (double a : {0.5, 1.5})
        for (double r : {10.0, 20.0}) {
            const KernelSpec s{2, a, 0.0, 1.0};
            const double mb = stable_mb(s, r).value;
            for (int N = 1; N <= 3; ++N) {
                const auto series = stable_series(s, r, N);
                EXPECT_LE(std::abs(mb - series.value), 2 * series.est_error) << a << " " << r << " " << N;
            }
        }
}

TEST(LeadingTerm, Examples)
{
    for (double a : {0.5, 1.0, 1.5}) {
        const auto lt = leading_term({2, a, 0.0, 1.0});
        EXPECT_DOUBLE_EQ(lt.exponent, 2 + a);
        const double expect = -std::tgamma((2 + a) / 2) * std::pow(2.0, a) / (pi * std::tgamma(-a / 2));
        EXPECT_NEAR(lt.coefficient, expect, 1e-14);
        EXPECT_GT(lt.coefficient, 0.0);
    }
    EXPECT_DOUBLE_EQ(leading_term({2, 1.5, 1.0, 1.0}).exponent, 3.0);
    EXPECT_DOUBLE_EQ(leading_term({2, 1.5, 2.0, 1.0}).exponent, 5.5);
    // alpha = 1, beta = 0: Poisson tail 1/(2 pi) r^{-3}
    EXPECT_NEAR(leading_term({2, 1.0, 0.0, 1.0}).coefficient, 1 / (2 * pi), 1e-15);
}

TEST(SmallR, Examples)
{
    EXPECT_NEAR(small_r_series({2, 2.0, 0.0, 1.0}, 1.0).value, std::exp(-0.25) / (4 * pi), 1e-16);
    for (double a : {1.0, 1.5, 2.0}) {
        const KernelSpec s{3, a, 0.7, 1.0};
        EXPECT_NEAR(small_r_series(s, 0.0).value / kernel_at_origin(s), 1.0, 1e-14);
    }
    EXPECT_NEAR(small_r_series({2, 1.0, 0.0, 1.0}, 0.5).value / poisson_kernel(2, 1, 0.5), 1.0, 1e-8);
    EXPECT_THROW(small_r_series({2, 0.8, 0.0, 1.0}, 0.3), DomainError);
    EXPECT_THROW(small_r_series({2, 1.0, 0.0, 1.0}, 1.5), DomainError);
}

TEST(SmallR, GaussianToTwenty)
{
    for (int d : {2, 3})
        for (double r = 0.0; r <= 20.0; r += 0.5) {
            const double g = gaussian_kernel(d, 1, r);
            const double v = small_r_series({d, 2.0, 0.0, 1.0}, r).value;
            EXPECT_LE(std::abs(v - g), 1e-8 * g + 1e-300) << d << " " << r;
        }
}

TEST(SmallR, AgreesWithContourForFractionalBeta)
{
    const KernelSpec s{2, 1.5, 0.7, 1.0};
    for (double r : {0.1, 0.4, 1.0}) {
        const double mb = stable_mb(s, r).value;
        EXPECT_LE(std::abs(small_r_series(s, r).value - mb) / std::abs(mb), 1e-9) << r;
    }
}

TEST(Evaluate, Routing)
{
    EXPECT_EQ(evaluate({2, 1.0, 0.0, 1.0}, 3.0).method, Method::closed_form);
    EXPECT_EQ(evaluate({2, 1.5, 0.0, 1.0}, 0.0).method, Method::closed_form);
    EXPECT_EQ(evaluate({2, 1.5, 0.0, 1.0}, 0.2).method, Method::small_r_series);
    EXPECT_EQ(evaluate({2, 0.7, 0.0, 1.0}, 0.2).method, Method::oracle);
    EXPECT_EQ(evaluate({2, 1.5, 0.0, 1.0}, 2.0).method, Method::mb_contour);
    EXPECT_EQ(evaluate({2, 1.5, 0.7, 1.0}, 2.0, Method::residue_series).method, Method::residue_series);
    EXPECT_THROW(closed_form({2, 1.5, 0.0, 1.0}, 1.0), DomainError);
}

TEST(Envelope, PoissonRatioFinite)
{
    const auto ratio = envelope_ratio({2, 1.0, 0.0, 1.0}, log_spaced(0.01, 1e4, 60));
    EXPECT_GT(ratio.min_ratio, 0.0);
    EXPECT_TRUE(std::isfinite(ratio.max_ratio));
    // r -> inf: kernel ~ (1/2pi) r^{-3} against (1+r)^{-3}
    EXPECT_NEAR(poisson_kernel(2, 1, 1e4) / stable_envelope({2, 1.0, 0.0, 1.0}, 1e4), 1 / (2 * pi), 1e-4);
}

TEST(Envelope, ShapeByParity)
{
    const KernelSpec even{2, 1.5, 2.0, 2.0};
    EXPECT_DOUBLE_EQ(stable_envelope(even, 100.0), 2.0 * std::pow(100.0, -5.5));
    const KernelSpec odd{2, 1.5, 0.7, 1.0};
    EXPECT_DOUBLE_EQ(stable_envelope(odd, 100.0), std::pow(100.0, -2.7));
    const KernelSpec zero{2, 1.5, 0.0, 1.0};
    EXPECT_DOUBLE_EQ(stable_envelope(zero, 0.0), 1.0);
    const auto ratio = envelope_ratio(odd, log_spaced(0.1, 500.0, 25));
    EXPECT_GT(ratio.min_ratio, 0.0);
    EXPECT_THROW(envelope_ratio(odd, {}), DomainError);
}

TEST(Envelope, SumSymbol)
{
    EXPECT_DOUBLE_EQ(sum_symbol_envelope(2, 0.5, 1.5, 0.25, 1.0),
                     std::pow(0.25, -2 / 1.5) * std::pow(1 + std::pow(0.25, -1 / 1.5), -2.5));
    EXPECT_DOUBLE_EQ(sum_symbol_envelope(2, 0.5, 1.5, 4.0, 1.0),
                     std::pow(4.0, -2 / 0.5) * std::pow(1 + std::pow(4.0, -1 / 0.5), -2.5));
    EXPECT_DOUBLE_EQ(sum_symbol_envelope(2, 0.5, 1.5, 1.0, 3.0), std::pow(4.0, -2.5));
    const auto check = sum_symbol_envelope_check(2, 0.5, 1.5, 1.0, {0.0, 0.5, 2.0, 10.0, 50.0});
    EXPECT_TRUE(check.holds);
    EXPECT_GT(check.min_ratio, 0.0);
    EXPECT_THROW(sum_symbol_envelope_check(2, 1.5, 0.5, 1.0, {1.0}), DomainError);
}

TEST(DecaySlope, FractionalOrders)
{
    const auto grid = log_spaced(50, 500, 12);
    for (double b : {0.7, 2.0}) {
        const KernelSpec s{2, 1.5, b, 1.0};
        std::vector<double> v;
        for (double r : grid)
            v.push_back(stable_mb(s, r).value);
        const double expect = is_even_integer(b) ? -(2 + b + 1.5) : -(2 + b);
        EXPECT_NEAR(fitted_slope(grid, v) / expect, 1.0, 0.02) << b;
    }
}

TEST(Normalization, ContourPath)
{
    EXPECT_NEAR(normalization_check({2, 1.5, 0.0, 1.0}, Method::mb_contour), 1.0, 1e-5);
    EXPECT_NEAR(normalization_check({2, 2.0, 0.0, 1.0}, Method::closed_form), 1.0, 1e-8);
    EXPECT_NEAR(normalization_check({2, 1.0, 0.0, 1.0}, Method::closed_form), 1.0, 1e-5);
    EXPECT_THROW(normalization_check({2, 1.5, 0.5, 1.0}), DomainError);
}
