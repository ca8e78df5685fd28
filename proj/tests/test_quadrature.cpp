#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "twocharge/quadrature.hpp"
#include "twocharge/specfun.hpp"

using namespace twocharge;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Kronrod rule is exact on monomials; degree <= 13 needs one panel") {
    // G7 is exact through degree 13 and K15 through 23, so the first panel's
    // error estimate vanishes for low degree and no subdivision happens.
    for (int k = 0; k <= 13; ++k) {
        const QuadratureResult r = integrate([&](double x) { return std::pow(x, k); }, 0.0, 1.0, QuadratureSpec{});
        CHECK(r.value == doctest::Approx(1.0 / (k + 1)).epsilon(1e-15));
        CHECK(r.intervals == 1);
        CHECK(r.evaluations == 15);
    }
    for (int k = 14; k <= 29; ++k) {
        const QuadratureResult r = integrate([&](double x) { return std::pow(x, k); }, 0.0, 1.0, QuadratureSpec{});
        CHECK(r.value == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
    }
}

TEST_CASE("Gaussian moments on the truncated line") {
    CHECK(integrate_line([](double x) { return std::exp(-x * x); }) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    CHECK(integrate_line([](double x) { return x * x * std::exp(-x * x); }) ==
          doctest::Approx(std::sqrt(kPi) / 2).epsilon(1e-14));
    // A degree-40 polynomial needs the wider radius.
    const QuadratureSpec s = QuadratureSpec::for_degree(40);
    CHECK(s.truncation_radius == doctest::Approx(std::max(14.0, std::sqrt(80.0) + 8.0)));
    const double m40 = integrate_line([](double x) { return std::pow(x, 40) * std::exp(-x * x); }, s);
    CHECK(m40 == doctest::Approx(std::exp(log_gamma(20.5))).epsilon(1e-11));
}

TEST_CASE("breakpoints handle kinks; failures are reported") {
    const QuadratureResult r = integrate([](double x) { return std::abs(x - 0.3); }, -1.0, 2.0, QuadratureSpec{}, {0.3});
    CHECK(r.value == doctest::Approx(0.5 * 1.3 * 1.3 + 0.5 * 1.7 * 1.7).epsilon(1e-15));
    QuadratureSpec tight;
    tight.max_subdivisions = 5;
    tight.rel_tol = 1e-14;
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.1)); }, -1.0, 1.0, tight),
                    QuadratureError);
    // The K15 centre node hits the pole exactly.
    CHECK_THROWS_AS(integrate([](double x) { return 1.0 / std::abs(x); }, -1.0, 1.0, QuadratureSpec{}),
                    QuadratureError);
    CHECK(QuadratureSpec{}.tightened(10.0).rel_tol == doctest::Approx(1e-11));
}

TEST_CASE("epsilon1 of the Gaussian matches -sqrt(pi/2) erf(x/sqrt2)") {
    const auto g = [](double y) { return std::exp(-0.5 * y * y); };
    for (double x : {-2.0, -0.5, 0.0, 0.4, 3.0}) {
        const double ref = -std::sqrt(kPi / 2) * std::erf(x / std::sqrt(2.0));
        CHECK(std::abs(epsilon1_numeric(g, x) - ref) < 1e-12);
    }
}

TEST_CASE("closed-form epsilon1 agrees with the numeric transform on psi series") {
    const PsiSeries even(std::vector<double>{0.7, 0.0, -0.3, 0.0, 0.2});
    const PsiSeries mixed(std::vector<double>{0.1, 0.5, -0.3, 1.1, 0.0, -0.4});
    for (double x : {-3.1, -0.6, 0.0, 1.2, 4.5}) {
        CHECK(std::abs(epsilon1_even_closed(even, x) - epsilon1_numeric([&](double y) { return even(y); }, x)) < 1e-12);
        CHECK(std::abs(epsilon1_closed(mixed, x) - epsilon1_numeric([&](double y) { return mixed(y); }, x)) < 1e-12);
        const std::vector<double> e = epsilon1_psi_all(7, x);
        for (int m = 0; m <= 7; ++m) {
            const double ref = epsilon1_numeric([&](double y) { return hermite_psi(m, y); }, x);
            CHECK(std::abs(e[static_cast<std::size_t>(m)] - ref) < 1e-12);
        }
    }
    CHECK_THROWS_AS(epsilon1_even_closed(mixed, 0.3), std::domain_error);
    // epsilon1 inverts d/dx on decaying functions.
    const double h = 1e-5;
    const double d = (epsilon1_closed(mixed, 0.8 + h) - epsilon1_closed(mixed, 0.8 - h)) / (2 * h);
    CHECK(d == doctest::Approx(-mixed(0.8)).epsilon(1e-8));
}
