#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "twocharge/ensemble_stats.hpp"
#include "twocharge/kernel.hpp"

using namespace twocharge;

namespace {

// High-precision direct integrals of the Boltzmann weight (computed offline).
constexpr double kR11_N4 = 0.062785970415818951821;    // R11(0.3; -0.5), N = 4, X = 1
constexpr double kR02_N4 = 0.0062653460281574057227;   // R02(; 0.3, -0.4)
constexpr double kR20_N4 = 0.15875918119884457276;     // R20(0.3, 1.1;)
constexpr double kR20_N2X2 = 0.16923978721045614088;   // R20(0.3, -0.5;), N = 2, X = 2
constexpr double kR01_N2X2 = 0.048821254385302488561;  // R01(; -0.5)
constexpr double kR10_N2 = 0.37563652203619715736;     // R10(0.3;), N = 2, X = 1

double integrate_density(const KernelContext& ctx, int species) {
    return integrate_line([&](double x) { return density(ctx, species, x); }, QuadratureSpec::for_degree(ctx.N()));
}

}  // namespace

TEST_CASE("zeta blocks are C^{-T} of the skew-diagonal C") {
    const KernelContext ctx = build_context(4, FamilyKind::capital, 1.0);
    const auto& r = ctx.family()->r();
    CHECK(ctx.zeta()(0, 1) == doctest::Approx(1.0 / r[0]));
    CHECK(ctx.zeta()(1, 0) == doctest::Approx(-1.0 / r[0]));
    CHECK(ctx.zeta()(2, 3) == doctest::Approx(1.0 / r[1]));
    CHECK(ctx.zeta()(0, 2) == 0.0);
    CHECK(ctx.zeta_residual() < 1e-10);
    CHECK(ctx.c_matrix()(0, 1) == doctest::Approx(r[0]).epsilon(1e-10));
}

TEST_CASE("correlations match direct-integral oracles") {
    const KernelContext n4 = build_context(4);
    CHECK(correlation(n4, {0.3}, {-0.5}) == doctest::Approx(kR11_N4).epsilon(1e-10));
    CHECK(correlation(n4, {}, {0.3, -0.4}) == doctest::Approx(kR02_N4).epsilon(1e-10));
    CHECK(correlation(n4, {0.3, 1.1}, {}) == doctest::Approx(kR20_N4).epsilon(1e-10));

    const KernelContext n2 = build_context(2);
    CHECK(density_charge1(n2, 0.3) == doctest::Approx(kR10_N2).epsilon(1e-12));

    // Fugacity X = 2 exercises the 2X^2 scaling and the X^2 correction.
    for (FamilyKind kind : {FamilyKind::capital, FamilyKind::monic}) {
        const KernelContext x2 = build_context(2, kind, 2.0);
        CHECK(correlation(x2, {0.3, -0.5}, {}) == doctest::Approx(kR20_N2X2).epsilon(1e-10));
        CHECK(density_charge2(x2, -0.5) == doctest::Approx(kR01_N2X2).epsilon(1e-10));
    }
}

TEST_CASE("monomial path agrees with the skew-OP path") {
    for (double X : {0.5, 1.0, 2.0}) {
        const KernelContext a = build_context(6, FamilyKind::capital, X);
        const KernelContext b = build_context_monomial(6, X);
        CHECK_FALSE(b.skew_path());
        for (double x : {-1.3, 0.1, 0.9}) {
            CHECK(density_charge1(b, x) == doctest::Approx(density_charge1(a, x)).epsilon(1e-9));
            CHECK(density_charge2(b, x) == doctest::Approx(density_charge2(a, x)).epsilon(1e-9));
            CHECK(kappa(b, x, 0.4) == doctest::Approx(kappa(a, x, 0.4)).epsilon(1e-9));
        }
        CHECK(correlation(b, {0.2}, {-0.7}) == doctest::Approx(correlation(a, {0.2}, {-0.7})).epsilon(1e-8));
    }
}

TEST_CASE("kernel symmetries") {
    const KernelContext ctx = build_context(6);
    for (double x : {-0.8, 0.25}) {
        for (double y : {1.4, -0.3}) {
            CHECK(kappa(ctx, x, y) == doctest::Approx(-kappa(ctx, y, x)).epsilon(1e-12));
            CHECK(kappa_eps(ctx, x, y, Op::eps1, Op::eps1) ==
                  doctest::Approx(-kappa_eps(ctx, y, x, Op::eps1, Op::eps1)).epsilon(1e-12));
            CHECK(kappa_eps(ctx, x, y, Op::id, Op::eps2) ==
                  doctest::Approx(-kappa_eps(ctx, y, x, Op::eps2, Op::id)).epsilon(1e-12));
        }
        // Even weight: densities are even functions.
        CHECK(density_charge1(ctx, x) == doctest::Approx(density_charge1(ctx, -x)).epsilon(1e-12));
        CHECK(density_charge2(ctx, x) == doctest::Approx(density_charge2(ctx, -x)).epsilon(1e-12));
        const Matrix m = correlation_matrix(ctx, {x, 0.6}, {-0.1});
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) CHECK(m(i, j) == doctest::Approx(-m(j, i)).epsilon(1e-12));
    }
    // Symmetric in permutations of each species' arguments.
    CHECK(correlation(ctx, {0.3, -0.9}, {0.5}) == doctest::Approx(correlation(ctx, {-0.9, 0.3}, {0.5})).epsilon(1e-12));
    CHECK(correlation(ctx, {0.3}, {0.5, -1.0}) == doctest::Approx(correlation(ctx, {0.3}, {-1.0, 0.5})).epsilon(1e-12));
}

TEST_CASE("degenerate configurations") {
    const KernelContext ctx = build_context(4);
    CHECK(std::abs(correlation(ctx, {0.4, 0.4}, {})) < 1e-12);
    CHECK(std::abs(correlation(ctx, {}, {0.4, 0.4})) < 1e-12);
    CHECK(std::abs(correlation(ctx, {0.4}, {0.4})) < 1e-12);
    // No charge-1 particles at zero fugacity.
    const KernelContext x0 = build_context(4, FamilyKind::monic, 0.0);
    CHECK(density_charge1(x0, 0.3) == 0.0);
    CHECK(correlation(x0, {0.3}, {-0.2}) == 0.0);
    CHECK(density_charge2(x0, 0.3) > 0.0);
    // Beyond N the correlation vanishes: three charge-2 particles need N >= 6.
    CHECK(std::abs(correlation(ctx, {}, {-1.0, 0.0, 1.0})) < 1e-12);
}

TEST_CASE("densities integrate to the expected populations") {
    for (int N : {2, 6, 12}) {
        for (double X : {0.5, 1.0}) {
            const KernelContext ctx = build_context(N, FamilyKind::capital, X);
            const PopulationLaw law = population_law(N, X);
            const double EL = integrate_density(ctx, 1);
            const double EM = integrate_density(ctx, 2);
            CHECK(EL == doctest::Approx(law.mean_L).epsilon(1e-9));
            CHECK(EL + 2.0 * EM == doctest::Approx(static_cast<double>(N)).epsilon(1e-9));
        }
    }
    // Second factorial moment of L from the pair correlation.
    const KernelContext ctx = build_context(4);
    const PopulationLaw law = population_law(4);
    double fact2 = 0.0;
    for (const SectorProb& s : law.sectors) fact2 += s.prob * s.L * (s.L - 1);
    const double pair = integrate_line([&](double x) {
        return integrate([&](double y) { return correlation(ctx, {x, y}, {}); }, -10.0, 10.0, QuadratureSpec{1e-12, 1e-9, 10.0, 4000}, {x})
            .value;
    }, QuadratureSpec{1e-12, 1e-8, 10.0, 4000});
    CHECK(pair == doctest::Approx(fact2).epsilon(1e-6));
}

TEST_CASE("scaled densities") {
    const KernelContext ctx = build_context(8);
    CHECK(scaled_density(ctx, 1, 0.5) == doctest::Approx(density_charge1(ctx, std::sqrt(8.0) * 0.5) / std::sqrt(2.0)));
    CHECK(scaled_density(ctx, 2, 0.5) ==
          doctest::Approx(2.0 / std::sqrt(8.0) * density_charge2(ctx, std::sqrt(8.0) * 0.5)));
}

TEST_CASE("invalid sizes") {
    CHECK_THROWS_AS(build_context(3), std::domain_error);
    CHECK_THROWS_AS(build_context(0), std::domain_error);
    CHECK_THROWS(build_context(kDenseKernelMaxN + 2));
    CHECK_THROWS(build_context_monomial(kMonomialKernelMaxN + 2));
    CHECK_THROWS(density(build_context(2), 3, 0.0));
}
