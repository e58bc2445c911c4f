#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "levykernel/mellin.hpp"
#include "levykernel/oracle.hpp"
#include "levykernel/stable_kernel.hpp"

using namespace levykernel;

TEST(VerticalLine, GammaGivesExponential)
{
    for (double r : {1.0, 2.0, 0.5}) {
        auto f = [r](complex z) { return gamma(z) * std::pow(r, -z); };
        ContourSpec c;
        c.abscissa = 1.0;
        c.half_height = 64;
        const auto res = vertical_line_integral(f, c);
        EXPECT_NEAR(res.value.real(), std::exp(-r), 1e-13) << r;
        EXPECT_LE(std::abs(res.value.imag()), 1e-10 * std::abs(res.value));
        EXPECT_GE(res.tail_bound, 0.0);
        EXPECT_GE(res.discretization_estimate, 0.0);
    }
}

TEST(VerticalLine, GaussLegendrePanelsAgree)
{
    auto f = [](complex z) { return gamma(z) * std::pow(2.0, -z); };
    ContourSpec c;
    c.abscissa = 0.7;
    c.half_height = 64;
    c.rule = QuadratureRule::gauss_legendre_panels;
    EXPECT_NEAR(vertical_line_integral(f, c).value.real(), std::exp(-2.0), 1e-12);
}

TEST(VerticalLine, ConjugateSymmetryWithoutShortcut)
{
    auto f = [](complex z) { return gamma(z / 1.5) * gamma(0.5 * (2.0 - z)) / gamma(0.5 * z) * std::pow(3.0, z); };
    ContourSpec c;
    c.abscissa = 1.2;
    c.half_height = 64;
    LineIntegralOptions o;
    o.exploit_symmetry = false;
    const auto res = vertical_line_integral(f, c, o);
    EXPECT_LE(std::abs(res.value.imag()), 1e-10 * std::abs(res.value));
}

TEST(VerticalLine, NoDecayThrows)
{
    auto f = [](complex) { return complex(1.0); };
    ContourSpec c;
    EXPECT_THROW(vertical_line_integral(f, c), NoDecay);
    EXPECT_THROW(auto_truncation(f, 1.0, 1e-12), NoDecay);
}

TEST(VerticalLine, RejectsBadContours)
{
    auto f = [](complex z) { return gamma(z); };
    ContourSpec c;
    c.nodes = 8;
    EXPECT_THROW(vertical_line_integral(f, c), DomainError);
    c.nodes = 64;
    c.half_height = -1;
    EXPECT_THROW(vertical_line_integral(f, c), DomainError);
}

TEST(VerticalLine, RefinementShrinks)
{
    // successive node doublings on an analytic integrand: differences shrink
    auto f = [](complex z) { return gamma(z) * std::pow(1.5, -z); };
    const double exact = std::exp(-1.5);
    double prev = 1.0;
    for (int n : {16, 32, 64}) {
        ContourSpec c;
        c.abscissa = 1.0;
        c.half_height = 32;
        c.nodes = n;
        LineIntegralOptions o;
        o.max_refinements = 1;
        o.rel_tol = 1.0;
        const double err = std::abs(vertical_line_integral(f, c, o).value.real() - exact);
        EXPECT_LT(err, prev / 4 + 1e-15);
        prev = err;
    }
}

TEST(AutoTruncation, LadderValues)
{
    auto slow = [](complex z) { return std::exp(-std::numbers::pi * std::abs(z.imag()) / 4); };
    EXPECT_EQ(auto_truncation(slow, 1.0, 1e-12), 64.0);
    auto g = [](complex z) { return gamma(z); };
    EXPECT_LE(auto_truncation(g, 1.0, 1e-10), 64.0);
}

TEST(MellinBesselRhs, Values)
{
    EXPECT_NEAR(mellin_bessel_rhs(complex(2.0), 1.0).real(), 1.0, 1e-14);
    EXPECT_NEAR(mellin_bessel_rhs(complex(1.0), 0.0).real(), 1.0, 1e-14);
    const double expect = std::pow(2.0, -0.5) * std::tgamma(0.25) / std::tgamma(0.75);
    EXPECT_NEAR(mellin_bessel_rhs(complex(0.5), 0.0).real(), expect, 1e-14);
    EXPECT_THROW(mellin_bessel_rhs(complex(0.0), 0.0), StripViolation);
    EXPECT_THROW(mellin_bessel_rhs(complex(1.6), 0.0), StripViolation);
}

TEST(MellinBesselRhs, MatchesNumericMellinTransform)
{
    // \int_0^inf r^{-nu} J_nu(r) r^{z-1} dr by the between-zeros quadrature
    for (double nu : {0.0, 0.5})
        for (double z : {0.5, 1.0, 1.4}) {
            Weight w = [&](double s) { return std::pow(s, z - 1.0 - nu); };
            const auto res = bessel_integral(nu, 1.0, w);
            const double expect = mellin_bessel_rhs(complex(z), nu).real();
            EXPECT_NEAR(res.value / expect, 1.0, 1e-6) << nu << " " << z;
        }
}

TEST(ContourIndependence, StableIntegrand)
{
    const KernelSpec spec{2, 1.5, 0.0, 1.0};
    std::vector<double> vals;
    for (double c : {0.6, 1.0, 1.4, 1.9}) {
        MbOptions o;
        o.abscissa = c;
        vals.push_back(stable_mb(spec, 3.0, o).value);
    }
    for (double a : vals)
        for (double b : vals)
            EXPECT_LE(std::abs(a - b) / std::abs(b), 1e-8);
}
