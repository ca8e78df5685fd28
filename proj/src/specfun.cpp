#include "twocharge/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twocharge {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
// Rescale threshold for the scaled recurrences; 2^600 keeps headroom under DBL_MAX.
constexpr int kScaleExp = 600;

// zeta(k) for k = 2..40 by Euler-Maclaurin summation with cutoff 10.
const std::array<double, 65>& zeta_table() {
    static const std::array<double, 65> table = [] {
        std::array<double, 65> z{};
        constexpr double bern[] = {1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
                                   5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510};
        constexpr int cutoff = 10;
        for (int s = 2; s <= 64; ++s) {
            double sum = 0.0;
            for (int n = cutoff - 1; n >= 1; --n) sum += std::pow(n, -s);
            const double nn = cutoff;
            sum += std::pow(nn, 1.0 - s) / (s - 1) + 0.5 * std::pow(nn, -s);
            double rising = s;           // s (s+1) ... (s+2j-2)
            double fact = 2.0;           // (2j)!
            double power = std::pow(nn, -s - 1.0);
            for (int j = 1; j <= 8; ++j) {
                sum += bern[j - 1] / fact * rising * power;
                rising *= (s + 2.0 * j - 1) * (s + 2.0 * j);
                fact *= (2.0 * j + 1) * (2.0 * j + 2);
                power /= nn * nn;
            }
            z[s] = sum;
        }
        return z;
    }();
    return table;
}

// log Gamma(1+z) for |z| <= 1/4.
double lgamma1p_series(double z) {
    constexpr double euler_gamma = 0.57721566490153286061;
    const auto& zeta = zeta_table();
    double sum = 0.0;
    double zk = -z;
    // |z| <= 1/2 here; 64 terms put the truncation below 1e-20.
    for (int k = 2; k <= 64; ++k) {
        zk *= -z;  // (-1)^k z^k
        sum += zeta[k] * zk / k;
    }
    return -euler_gamma * z + sum;
}

double stirling(double x) {
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Coefficients B_{2k} / (2k (2k-1)).
    const double series =
        inv * (1.0 / 12 +
               inv2 * (-1.0 / 360 +
                       inv2 * (1.0 / 1260 +
                               inv2 * (-1.0 / 1680 +
                                       inv2 * (1.0 / 1188 +
                                               inv2 * (-691.0 / 360360 + inv2 * (1.0 / 156)))))));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + series;
}

double erf_series(double x) {
    // (2/sqrt(pi)) e^{-x^2} sum 2^n x^{2n+1} / (2n+1)!!; all terms positive.
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int n = 1; n < 500; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return 2.0 / std::sqrt(kPi) * std::exp(-x2) * sum;
}

// erfc for x > 0 by modified Lentz on x + (1/2)/(x + 1/(x + (3/2)/(x + ...))).
double erfc_cf(double x) {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = 0.5 * n;
        d = x + a * d;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = x + a / c;
        if (std::abs(c) < tiny) c = tiny;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / std::sqrt(kPi) / f;
}

double bessel_series(int order, double x) {
    const double h = 0.5 * x;
    const double h2 = h * h;
    double term = order == 0 ? 1.0 : h;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= -h2 / (static_cast<double>(k) * (k + order));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && k > h) break;
    }
    return sum;
}

double bessel_asymptotic(int order, double x) {
    const double mu = 4.0 * order * order;
    const double z8 = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 60; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= (mu - odd * odd) / (k * z8);
        if (std::abs(term) > last) break;  // asymptotic series: stop at smallest term
        last = std::abs(term);
        const int m = k % 4;
        // k = 1 -> +Q, 2 -> -P, 3 -> -Q, 4 -> +P
        if (m == 1) q += term;
        else if (m == 2) p -= term;
        else if (m == 3) q -= term;
        else p += term;
        if (last < 1e-17) break;
    }
    const double chi = x - (0.5 * order + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double SignedLog::value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_abs);
}

double laguerre(int k, double alpha, double x) {
    if (k < 0) throw std::domain_error("laguerre: negative degree");
    if (!(alpha > -1.0)) throw std::domain_error("laguerre: alpha must exceed -1");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = 1.0 + alpha - x;
    for (int n = 1; n < k; ++n) {
        const double next = ((2.0 * n + 1.0 + alpha - x) * cur - (n + alpha) * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    if (!std::isfinite(cur))
        throw std::overflow_error("laguerre: value overflows double; use laguerre_log");
    return cur;
}

SignedLog laguerre_log(int k, double alpha, double x, int degree_cap) {
    if (k < 0) throw std::domain_error("laguerre_log: negative degree");
    if (!(alpha > -1.0)) throw std::domain_error("laguerre_log: alpha must exceed -1");
    if (k > degree_cap)
        throw std::overflow_error("laguerre_log: degree " + std::to_string(k) +
                                  " exceeds cap " + std::to_string(degree_cap));
    double prev = 1.0;
    double cur = k == 0 ? 1.0 : 1.0 + alpha - x;
    long long scale = 0;  // value = cur * 2^scale
    const double big = std::ldexp(1.0, kScaleExp);
    for (int n = 1; n < k; ++n) {
        const double next = ((2.0 * n + 1.0 + alpha - x) * cur - (n + alpha) * prev) / (n + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > big) {
            cur = std::ldexp(cur, -kScaleExp);
            prev = std::ldexp(prev, -kScaleExp);
            scale += kScaleExp;
        }
    }
    if (!std::isfinite(cur)) throw std::overflow_error("laguerre_log: non-finite recurrence");
    SignedLog out;
    if (cur == 0.0) return out;
    out.sign = cur > 0 ? 1 : -1;
    out.log_abs = std::log(std::abs(cur)) + static_cast<double>(scale) * kLn2;
    return out;
}

std::vector<double> hermite_psi_all(int nmax, double x) {
    if (nmax < 0) throw std::domain_error("hermite_psi_all: negative degree");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1);
    // Carry psi_n = v_n * exp(log_scale); the start absorbs e^{-x^2/2} so nothing underflows early.
    double log_scale = -0.5 * x * x;
    double prev = 0.0;
    double cur = std::pow(kPi, -0.25);
    out[0] = cur * std::exp(log_scale);
    const double big = std::ldexp(1.0, kScaleExp);
    for (int n = 0; n < nmax; ++n) {
        const double next = std::sqrt(2.0 / (n + 1.0)) * x * cur - std::sqrt(n / (n + 1.0)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > big) {
            cur = std::ldexp(cur, -kScaleExp);
            prev = std::ldexp(prev, -kScaleExp);
            log_scale += kScaleExp * kLn2;
        }
        out[static_cast<std::size_t>(n) + 1] = cur * std::exp(log_scale);
    }
    return out;
}

double hermite_psi(int n, double x) {
    if (n < 0) throw std::domain_error("hermite_psi: negative degree");
    return hermite_psi_all(n, x).back();
}

double hermite_h(int n, double x) {
    if (n < 0 || n > kHermiteRawMaxDegree)
        throw std::domain_error("hermite_h: degree outside [0, 30]; use hermite_psi");
    double prev = 1.0;
    if (n == 0) return prev;
    double cur = 2.0 * x;
    for (int k = 1; k < n; ++k) {
        const double next = 2.0 * x * cur - 2.0 * k * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

double log_hermite_norm(int n) {
    return 0.5 * std::log(kPi) + n * kLn2 + log_factorial(n);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be positive");
    if (std::isinf(x)) return x;
    if (x >= 10.0) return stirling(x);
    if (x < 0.5) return lgamma1p_series(x) - std::log(x);
    if (x < 1.5) return lgamma1p_series(x - 1.0);
    // Shift down into [1.5, 2.5); the accumulated logs are all positive terms.
    double shift = 0.0;
    double y = x;
    while (y >= 2.5) {
        y -= 1.0;
        shift += std::log(y);
    }
    return shift + std::log1p(y - 2.0) + lgamma1p_series(y - 2.0);
}

double log_factorial(int n) {
    if (n < 0) throw std::domain_error("log_factorial: negative argument");
    if (n < 2) return 0.0;
    return log_gamma(n + 1.0);
}

double erf(double x) {
    if (std::isnan(x)) return x;
    if (x < 0.0) return -erf(-x);
    if (x <= 3.0) return erf_series(x);
    return 1.0 - erfc_cf(x);
}

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x > 3.0) return erfc_cf(x);
    if (x < -3.0) return 2.0 - erfc_cf(-x);
    return 1.0 - erf(x);
}

double bessel_j(int order, double x) {
    if (order != 0 && order != 1)
        throw std::domain_error("bessel_j: only orders 0 and 1 are supported");
    const double ax = std::abs(x);
    const double v = ax <= 12.0 ? bessel_series(order, ax) : bessel_asymptotic(order, ax);
    return (order == 1 && x < 0.0) ? -v : v;
}

std::vector<double> psi_cumulative(int nmax, double x) {
    if (nmax < 0) throw std::domain_error("psi_cumulative: negative degree");
    const auto psi = hermite_psi_all(nmax + 1, x);
    std::vector<double> cum(static_cast<std::size_t>(nmax) + 1);
    cum[0] = std::pow(kPi, -0.25) * std::sqrt(kPi / 2.0) * erfc(-x / std::sqrt(2.0));
    // psi_{n}' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}, integrated from -inf.
    for (int m = 0; m + 2 <= nmax; m += 2) {
        const double k = m / 2;
        cum[m + 2] = (std::sqrt(k + 0.5) * cum[m] - psi[m + 1]) / std::sqrt(k + 1.0);
    }
    if (nmax >= 1) cum[1] = -std::sqrt(2.0) * psi[0];
    for (int m = 3; m <= nmax; m += 2) {
        const double k = (m - 1) / 2;
        cum[m] = (std::sqrt(k) * cum[m - 2] - psi[m - 1]) / std::sqrt(k + 0.5);
    }
    return cum;
}

double psi_total(int m) {
    if (m < 0) throw std::domain_error("psi_total: negative degree");
    if (m % 2 == 1) return 0.0;
    double t = std::pow(kPi, -0.25) * std::sqrt(2.0 * kPi);
    for (int k = 0; 2 * k < m; ++k) t *= std::sqrt((2.0 * k + 1.0) / (2.0 * k + 2.0));
    return t;
}

PsiSeries PsiSeries::from_monomial(const std::vector<double>& p) {
    // Horner in x acting on psi-series, seeded with e^{-x^2/2} = pi^{1/4} psi_0.
    const double w0 = std::pow(kPi, 0.25);
    PsiSeries acc;
    for (std::size_t i = p.size(); i-- > 0;) {
        acc = acc.times_x();
        if (acc.c_.empty()) acc.c_.assign(1, 0.0);
        acc.c_[0] += p[i] * w0;
    }
    return acc;
}

int PsiSeries::degree() const {
    for (std::size_t n = c_.size(); n-- > 0;)
        if (c_[n] != 0.0) return static_cast<int>(n);
    return -1;
}

double PsiSeries::operator()(double x) const {
    if (c_.empty()) return 0.0;
    return dot(hermite_psi_all(static_cast<int>(c_.size()) - 1, x));
}

double PsiSeries::dot(const std::vector<double>& basis) const {
    if (basis.size() < c_.size()) throw std::invalid_argument("PsiSeries::dot: basis too short");
    double s = 0.0;
    for (std::size_t n = 0; n < c_.size(); ++n) s += c_[n] * basis[n];
    return s;
}

PsiSeries PsiSeries::derivative() const {
    if (c_.empty()) return {};
    std::vector<double> d(c_.size() + 1, 0.0);
    for (std::size_t n = 0; n < c_.size(); ++n) {
        if (c_[n] == 0.0) continue;
        if (n >= 1) d[n - 1] += c_[n] * std::sqrt(n / 2.0);
        d[n + 1] -= c_[n] * std::sqrt((n + 1) / 2.0);
    }
    return PsiSeries(std::move(d));
}

PsiSeries PsiSeries::times_x() const {
    if (c_.empty()) return {};
    std::vector<double> d(c_.size() + 1, 0.0);
    for (std::size_t n = 0; n < c_.size(); ++n) {
        if (c_[n] == 0.0) continue;
        if (n >= 1) d[n - 1] += c_[n] * std::sqrt(n / 2.0);
        d[n + 1] += c_[n] * std::sqrt((n + 1) / 2.0);
    }
    return PsiSeries(std::move(d));
}

PsiSeries& PsiSeries::operator*=(double s) {
    for (double& v : c_) v *= s;
    return *this;
}

PsiSeries& PsiSeries::operator+=(const PsiSeries& other) {
    if (other.c_.size() > c_.size()) c_.resize(other.c_.size(), 0.0);
    for (std::size_t n = 0; n < other.c_.size(); ++n) c_[n] += other.c_[n];
    return *this;
}

bool PsiSeries::has_parity(int parity, double tol) const {
    for (std::size_t n = 0; n < c_.size(); ++n)
        if (static_cast<int>(n % 2) != parity && std::abs(c_[n]) > tol) return false;
    return true;
}

}  // namespace twocharge
