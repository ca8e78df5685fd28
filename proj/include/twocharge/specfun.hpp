#pragma once

#include <cstddef>
#include <vector>

namespace twocharge {

// Value stored as sign * exp(log_abs). sign is 0 for an exact zero.
struct SignedLog {
    int sign = 0;
    double log_abs = 0.0;

    double value() const;
};

inline constexpr int kLaguerreLogDefaultCap = 2'000'000;

// Generalized Laguerre L_k^(alpha)(x) by the three-term recurrence.
// Throws std::overflow_error rather than returning inf; use laguerre_log then.
double laguerre(int k, double alpha, double x);

// Same recurrence carried with a running power-of-two scale.
SignedLog laguerre_log(int k, double alpha, double x, int degree_cap = kLaguerreLogDefaultCap);

// psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(sqrt(pi) 2^n n!). Never forms H_n.
double hermite_psi(int n, double x);
std::vector<double> hermite_psi_all(int nmax, double x);

// Physicists' Hermite polynomial, for identity checks only.
inline constexpr int kHermiteRawMaxDegree = 30;
double hermite_h(int n, double x);

// log h_n with h_n = sqrt(pi) 2^n n!.
double log_hermite_norm(int n);

double log_gamma(double x);
double log_factorial(int n);

double erf(double x);
double erfc(double x);

double bessel_j(int order, double x);

// I_m(x) = int_{-inf}^x psi_m for m = 0..nmax, from closed-form recursions.
std::vector<double> psi_cumulative(int nmax, double x);
// int_R psi_m; zero for odd m.
double psi_total(int m);

// Real expansion sum_n c[n] psi_n. Carries weighted polynomials f(x) e^{-x^2/2}.
class PsiSeries {
public:
    PsiSeries() = default;
    explicit PsiSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    // Weighted polynomial sum_k p[k] x^k e^{-x^2/2}.
    static PsiSeries from_monomial(const std::vector<double>& p);

    std::size_t size() const { return c_.size(); }
    int degree() const;
    double coeff(std::size_t n) const { return n < c_.size() ? c_[n] : 0.0; }
    const std::vector<double>& coeffs() const { return c_; }

    double operator()(double x) const;
    // Dot product with precomputed basis values psi_0..psi_{size-1}.
    double dot(const std::vector<double>& basis) const;

    PsiSeries derivative() const;
    PsiSeries times_x() const;
    PsiSeries& operator*=(double s);
    PsiSeries& operator+=(const PsiSeries& other);

    bool has_parity(int parity, double tol = 0.0) const;

private:
    std::vector<double> c_;
};

}  // namespace twocharge
