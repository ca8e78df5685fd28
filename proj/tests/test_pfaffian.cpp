#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "twocharge/pfaffian.hpp"

using namespace twocharge;

namespace {

SkewMatrix random_skew(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SkewMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, u(rng));
    return a;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("small Pfaffians by hand") {
    CHECK(pfaffian(SkewMatrix::from_upper(2, {3.5})) == doctest::Approx(3.5));
    // a01 a23 - a02 a13 + a03 a12
    const SkewMatrix a = SkewMatrix::from_upper(4, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    CHECK(pfaffian(a) == doctest::Approx(1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0).epsilon(1e-15));
    CHECK(pfaffian_oracle(a) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(pfaffian_matching_sum(a) == doctest::Approx(8.0).epsilon(1e-15));
    // Zero leading pivot forces a row swap.
    const SkewMatrix b = SkewMatrix::from_upper(4, {0.0, 2.0, 3.0, 4.0, 5.0, 0.0});
    CHECK(pfaffian(b) == doctest::Approx(pfaffian_oracle(b)).epsilon(1e-15));
    CHECK(pfaffian(SkewMatrix(0)) == 1.0);
}

TEST_CASE("Pf^2 = det and fast = oracle on 200 random skew matrices") {
    std::mt19937_64 rng(20240601);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 2 + 2 * static_cast<std::size_t>(i % 6);
        const SkewMatrix a = random_skew(n, rng);
        const double pf = pfaffian(a);
        CHECK(rel_err(pf * pf, determinant(a.dense())) < 1e-9);
        CHECK(rel_err(pf, pfaffian_oracle(a)) < 1e-10);
        if (n <= kMatchingOracleMax) CHECK(rel_err(pf, pfaffian_matching_sum(a)) < 1e-10);
    }
}

TEST_CASE("sum expansion: Pf(A+B) = sum_t sgn(t) Pf(A_tt) Pf(B_t't')") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) {
        const SkewMatrix a = random_skew(6, rng);
        const SkewMatrix b = random_skew(6, rng);
        CHECK(rel_err(pfaffian_sum_expansion(a, b), pfaffian(a + b)) < 1e-10);
    }
    // The scaled form used by the partition function: Pf(X^2 A + B).
    const SkewMatrix a = random_skew(4, rng);
    const SkewMatrix b = random_skew(4, rng);
    CHECK(rel_err(pfaffian_sum_expansion(a * 4.0, b), pfaffian(a * 4.0 + b)) < 1e-10);
}

TEST_CASE("Pfaffian scaling and transformation rules") {
    std::mt19937_64 rng(5);
    const SkewMatrix a = random_skew(6, rng);
    CHECK(rel_err(pfaffian(a * 2.0), 8.0 * pfaffian(a)) < 1e-13);
    // Pf(B A B^T) = det(B) Pf(A)
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix bm(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) bm(i, j) = u(rng);
    const Matrix t = bm * a.dense() * bm.transpose();
    CHECK(rel_err(pfaffian(SkewMatrix(t, 1e-12)), determinant(bm) * pfaffian(a)) < 1e-10);
}

TEST_CASE("odd size and input validation") {
    const SkewMatrix odd = SkewMatrix::from_upper(3, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(pfaffian(odd), std::domain_error);
    CHECK(pfaffian(odd, OddPolicy::zero) == 0.0);
    Matrix bad(2, 2);
    bad(0, 1) = 1.0;
    bad(1, 0) = -0.5;
    CHECK_THROWS(SkewMatrix(bad, 1e-12));
    Matrix diag(2, 2);
    diag(0, 0) = 1.0;
    CHECK_THROWS(SkewMatrix(diag, 1e-12));
    CHECK_THROWS(SkewMatrix::from_upper(3, {1.0}));
}

TEST_CASE("IndexSubset signs") {
    CHECK(IndexSubset(2, {0}).sign() == 1);
    CHECK(IndexSubset(2, {1}).sign() == -1);
    CHECK(IndexSubset(4, {1, 3}).sign() == -1);
    CHECK(IndexSubset(4, {2, 3}).sign() == 1);
    const IndexSubset s = IndexSubset::from_mask(5, 0b10110u);
    CHECK(s.indices() == std::vector<int>{1, 2, 4});
    CHECK(s.complement().indices() == std::vector<int>{0, 3});
    CHECK_THROWS(IndexSubset(3, {2, 1}));
}

TEST_CASE("inverse_transpose gives C^{-T}") {
    Matrix c(2, 2);
    c(0, 1) = 4.0;
    c(1, 0) = -4.0;
    const InverseResult inv = inverse_transpose(c);
    CHECK(inv.value(0, 1) == doctest::Approx(0.25));
    CHECK(inv.value(1, 0) == doctest::Approx(-0.25));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix g(5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) g(i, j) = u(rng) + (i == j ? 3.0 : 0.0);
    const Matrix check = g.transpose() * inverse_transpose(g).value - Matrix::identity(5);
    CHECK(check.norm_inf() < 1e-14);
    Matrix sing(2, 2);
    sing(0, 0) = 1.0;
    sing(0, 1) = 1.0;
    sing(1, 0) = 1.0;
    sing(1, 1) = 1.0 + 1e-15;
    CHECK_THROWS_AS(inverse_transpose(sing), IllConditioned);
}

TEST_CASE("confluent Vandermonde determinant equals the interaction product") {
    // alpha = (a), beta = (b): det = (a - b)^2.
    const Vandermonde v = confluent_vandermonde({0.3}, {-1.2});
    CHECK(v.det == doctest::Approx(1.5 * 1.5).epsilon(1e-14));
    CHECK(v.matrix.rows() == 3);
    CHECK(v.matrix(2, 2) == doctest::Approx(2 * -1.2));
    CHECK(confluent_vandermonde({0.0, 1.0}, {}).det == doctest::Approx(1.0));
    CHECK(confluent_vandermonde({}, {2.0}).det == doctest::Approx(1.0));

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        const int N = 2 + static_cast<int>(rng() % 9);
        const int M = static_cast<int>(rng() % static_cast<unsigned>(N / 2 + 1));
        std::vector<double> alpha, beta;
        for (int k = 0; k < N - 2 * M; ++k) alpha.push_back(u(rng));
        for (int k = 0; k < M; ++k) beta.push_back(u(rng));
        const double prod = confluent_vandermonde_product(alpha, beta);
        CHECK(rel_err(confluent_vandermonde(alpha, beta).det, prod) < 1e-8);
        // The product itself: prod_{j<k}(a_k - a_j) prod (b_m - b_n)^4 prod (a - b)^2.
        double direct = 1.0;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            for (std::size_t k = j + 1; k < alpha.size(); ++k) direct *= alpha[k] - alpha[j];
        for (std::size_t m = 0; m < beta.size(); ++m)
            for (std::size_t n = m + 1; n < beta.size(); ++n) direct *= std::pow(beta[m] - beta[n], 4);
        for (double a : alpha)
            for (double b : beta) direct *= (a - b) * (a - b);
        CHECK(rel_err(prod, direct) < 1e-13);
    }
}
