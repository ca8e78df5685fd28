#include "twocharge/skewpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twocharge {

namespace {

constexpr double kPi = std::numbers::pi;

double log_laguerre_neg(int k, double alpha, double X) {
    // L_k^alpha(-X^2) > 0 for alpha > -1: every coefficient of the expansion is positive.
    return laguerre_log(k, alpha, -X * X).log_abs;
}

// psi_{2k+1} = -(sum_i c[k][i] psi_{2i})'. Row k has k+1 entries.
std::vector<std::vector<double>> odd_antiderivative_table(int kmax) {
    std::vector<std::vector<double>> c(static_cast<std::size_t>(std::max(kmax + 1, 0)));
    for (int k = 0; k <= kmax; ++k) {
        auto& row = c[static_cast<std::size_t>(k)];
        row.assign(static_cast<std::size_t>(k) + 1, 0.0);
        const double inv = 1.0 / std::sqrt(k + 0.5);
        if (k > 0) {
            const auto& prev = c[static_cast<std::size_t>(k) - 1];
            const double f = std::sqrt(static_cast<double>(k)) * inv;
            for (int i = 0; i < k; ++i) row[static_cast<std::size_t>(i)] = f * prev[static_cast<std::size_t>(i)];
        }
        row[static_cast<std::size_t>(k)] = inv;
    }
    return c;
}

// sum_{a,b} f_a g_b <psi_a|psi_b>_1 with <psi_2i|psi_2k+1>_1 = 2 c[k][i].
double form1_exact(const PsiSeries& f, const PsiSeries& g) {
    const std::size_t n = std::max(f.size(), g.size());
    if (n < 2) return 0.0;
    const int kmax = static_cast<int>((n - 2) / 2);
    const auto table = odd_antiderivative_table(kmax);
    double total = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        const std::size_t odd = 2 * static_cast<std::size_t>(k) + 1;
        const double go = g.coeff(odd);
        const double fo = f.coeff(odd);
        if (go == 0.0 && fo == 0.0) continue;
        double ef = 0.0;
        double eg = 0.0;
        for (int i = 0; i <= k; ++i) {
            const double c = table[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
            ef += c * f.coeff(2 * static_cast<std::size_t>(i));
            eg += c * g.coeff(2 * static_cast<std::size_t>(i));
        }
        total += 2.0 * (ef * go - eg * fo);
    }
    return total;
}

double coefficient_dot(const PsiSeries& a, const PsiSeries& b) {
    const std::size_t n = std::min(a.size(), b.size());
    double s = 0.0;
    for (std::size_t m = 0; m < n; ++m) s += a.coeff(m) * b.coeff(m);
    return s;
}

// Laguerre L_k^alpha(t) coefficients in t.
std::vector<double> laguerre_coeffs(int k, double alpha) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i) {
        const double mag = std::exp(log_gamma(k + alpha + 1.0) - log_gamma(k - i + 1.0) -
                                    log_gamma(alpha + i + 1.0) - log_factorial(i));
        c[static_cast<std::size_t>(i)] = (i % 2 == 0 ? 1.0 : -1.0) * mag;
    }
    return c;
}

double monic_even_scale(int j, double X) {
    // L_j(0) j! = Gamma(j+1/2)/sqrt(pi).
    return std::exp(log_gamma(j + 0.5) - 0.5 * std::log(kPi) - log_laguerre_neg(j, -0.5, X));
}

}  // namespace

Polynomial Polynomial::monomial(int k) {
    std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
    c.back() = 1.0;
    return Polynomial(std::move(c));
}

int Polynomial::degree() const {
    for (std::size_t n = c_.size(); n-- > 0;)
        if (c_[n] != 0.0) return static_cast<int>(n);
    return -1;
}

double Polynomial::leading() const {
    const int d = degree();
    return d < 0 ? 0.0 : c_[static_cast<std::size_t>(d)];
}

double Polynomial::operator()(double x) const {
    double s = 0.0;
    for (std::size_t n = c_.size(); n-- > 0;) s = s * x + c_[n];
    return s;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial({0.0});
    std::vector<double> d(c_.size() - 1);
    for (std::size_t n = 1; n < c_.size(); ++n) d[n - 1] = static_cast<double>(n) * c_[n];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::times_x() const {
    std::vector<double> d(c_.size() + 1, 0.0);
    for (std::size_t n = 0; n < c_.size(); ++n) d[n + 1] = c_[n];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<double> d(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t n = 0; n < d.size(); ++n) d[n] = coeff(n) + o.coeff(n);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(double s) const {
    std::vector<double> d = c_;
    for (double& v : d) v *= s;
    return Polynomial(std::move(d));
}

Weight Weight::gaussian() {
    return {"gaussian", [](double x) { return std::exp(-0.5 * x * x); }};
}

Weight Weight::quartic() {
    return {"quartic", [](double x) { return std::exp(-0.25 * x * x * x * x); }};
}

double skew_inner_1(const Polynomial& f, const Polynomial& g, const Weight& w, const QuadratureSpec& spec) {
    const RealFn ft = [&](double x) { return w.w(x) * f(x); };
    const RealFn gt = [&](double x) { return w.w(x) * g(x); };
    const QuadratureSpec inner = spec.tightened(10.0);
    return integrate_line(
        [&](double x) {
            return ft(x) * epsilon1_numeric(gt, x, inner) - gt(x) * epsilon1_numeric(ft, x, inner);
        },
        spec);
}

double skew_inner_4(const Polynomial& f, const Polynomial& g, const Weight& w, const QuadratureSpec& spec) {
    const Polynomial df = f.derivative();
    const Polynomial dg = g.derivative();
    return integrate_line(
        [&](double x) {
            const double ww = w.w(x);
            return ww * ww * (f(x) * dg(x) - g(x) * df(x));
        },
        spec);
}

double skew_inner_X(const Polynomial& f, const Polynomial& g, double X, const Weight& w,
                    const QuadratureSpec& spec) {
    if (X < 0.0) throw std::domain_error("skew_inner_X: fugacity must be nonnegative");
    const double one = X == 0.0 ? 0.0 : skew_inner_1(f, g, w, spec);
    return X * X * one + skew_inner_4(f, g, w, spec);
}

double skew_inner_1(const PsiSeries& f, const PsiSeries& g) { return form1_exact(f, g); }

double skew_inner_4(const PsiSeries& f, const PsiSeries& g) {
    // With f~ = w f: w^2 (f g' - g f') = f~ g~' - g~ f~'.
    return coefficient_dot(f, g.derivative()) - coefficient_dot(g, f.derivative());
}

double skew_inner_X(const PsiSeries& f, const PsiSeries& g, double X) {
    if (X < 0.0) throw std::domain_error("skew_inner_X: fugacity must be nonnegative");
    return X * X * skew_inner_1(f, g) + skew_inner_4(f, g);
}

BasisValues psi_basis_values(int nmax, double x) {
    BasisValues v;
    v.psi = hermite_psi_all(nmax + 1, x);
    v.eps1 = epsilon1_psi_all(nmax, x);
    v.deriv.resize(static_cast<std::size_t>(nmax) + 1);
    for (int m = 0; m <= nmax; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        const double down = m >= 1 ? std::sqrt(m / 2.0) * v.psi[mu - 1] : 0.0;
        v.deriv[mu] = down - std::sqrt((m + 1) / 2.0) * v.psi[mu + 1];
    }
    v.psi.resize(static_cast<std::size_t>(nmax) + 1);
    return v;
}

SkewForms skew_forms_measured(const PsiSeries& f, const PsiSeries& g, const QuadratureSpec& spec,
                              bool need_one) {
    const int nmax = static_cast<int>(std::max({f.size(), g.size(), std::size_t{1}})) - 1;
    QuadratureSpec s = spec;
    s.truncation_radius = std::max(spec.truncation_radius, QuadratureSpec::for_degree(nmax).truncation_radius);
    SkewForms out;
    if (need_one)
        out.one = integrate_line(
            [&](double x) {
                const BasisValues b = psi_basis_values(nmax, x);
                return f.dot(b.psi) * g.dot(b.eps1) - g.dot(b.psi) * f.dot(b.eps1);
            },
            s);
    out.four = integrate_line(
        [&](double x) {
            const BasisValues b = psi_basis_values(nmax, x);
            return f.dot(b.psi) * g.dot(b.deriv) - g.dot(b.psi) * f.dot(b.deriv);
        },
        s);
    return out;
}

double skew_inner_X_measured(const PsiSeries& f, const PsiSeries& g, double X, const QuadratureSpec& spec) {
    if (X < 0.0) throw std::domain_error("skew_inner_X_measured: fugacity must be nonnegative");
    const SkewForms forms = skew_forms_measured(f, g, spec, X != 0.0);
    return X * X * forms.one + forms.four;
}

const char* to_string(FamilyKind kind) { return kind == FamilyKind::capital ? "capital" : "monic"; }

double hermite_coefficient(int k, double X) {
    return std::exp(log_factorial(k) - log_factorial(2 * k) + log_laguerre_neg(k, -0.5, X));
}

double norm_capital(int j, double X) {
    return std::exp(std::log(4.0 * kPi) + log_factorial(j + 1) - log_gamma(j + 0.5) +
                    log_laguerre_neg(j, -0.5, X) + log_laguerre_neg(j + 1, -0.5, X));
}

double log_norm_monic(int j, double X) {
    return std::log(2.0) + log_factorial(j + 1) + log_gamma(j + 0.5) + log_laguerre_neg(j + 1, -0.5, X) -
           log_laguerre_neg(j, -0.5, X);
}

double norm_monic(int j, double X) { return std::exp(log_norm_monic(j, X)); }

double norm_monic_alternative(int j, double X) {
    return std::exp(std::log(4.0) + log_factorial(j + 1) + log_gamma(j + 0.5) - log_factorial(j) +
                    log_laguerre_neg(j + 1, -0.5, X) - log_laguerre_neg(j, -0.5, X));
}

const PsiSeries& SkewOPFamily::member(int n) const {
    if (n < 0 || n >= size())
        throw std::out_of_range("SkewOPFamily: index " + std::to_string(n) + " outside [0, " +
                                std::to_string(size()) + ")");
    return members_[static_cast<std::size_t>(n)];
}

double SkewOPFamily::eval_tilde(int n, double x) const { return member(n)(x); }

SkewOPFamily build_family(int J, double X, FamilyKind kind) {
    if (J < 1) throw std::domain_error("build_family: J must be at least 1");
    if (!(X >= 0.0)) throw std::domain_error("build_family: fugacity must be nonnegative");
    SkewOPFamily fam;
    fam.J_ = J;
    fam.X_ = X;
    fam.kind_ = kind;
    fam.members_.resize(2 * static_cast<std::size_t>(J));
    fam.r_.resize(static_cast<std::size_t>(J));
    fam.r_measured_.resize(static_cast<std::size_t>(J));

    // P~_{2j} = sum_{k<=j} a_k H_{2k} e^{-x^2/2}, and H_{2k} e^{-x^2/2} = sqrt(h_{2k}) psi_{2k}.
    std::vector<double> even(2 * static_cast<std::size_t>(J), 0.0);
    const double quarter_log_pi = 0.25 * std::log(kPi);
    for (int j = 0; j < J; ++j) {
        even[2 * static_cast<std::size_t>(j)] =
            std::exp(quarter_log_pi + j * std::numbers::ln2 + log_factorial(j) - 0.5 * log_factorial(2 * j) +
                     log_laguerre_neg(j, -0.5, X));
        PsiSeries pe(std::vector<double>(even.begin(), even.begin() + 2 * j + 1));
        PsiSeries po = pe.derivative();
        po *= -2.0;  // P~_{2j+1} = -2 (P~_{2j})'
        if (kind == FamilyKind::monic) {
            const double s = monic_even_scale(j, X);
            pe *= s;
            po *= 0.5 * s;
        }
        fam.members_[2 * static_cast<std::size_t>(j)] = std::move(pe);
        fam.members_[2 * static_cast<std::size_t>(j) + 1] = std::move(po);
        fam.r_[static_cast<std::size_t>(j)] = kind == FamilyKind::capital ? norm_capital(j, X) : norm_monic(j, X);
    }

    // Per-member transforms so each Gram entry is a linear-time contraction.
    const int n = 2 * J;
    const auto table = odd_antiderivative_table(J);
    std::vector<std::vector<double>> anti(static_cast<std::size_t>(n));
    std::vector<PsiSeries> deriv(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const PsiSeries& f = fam.member(a);
        auto& e = anti[static_cast<std::size_t>(a)];
        e.assign(static_cast<std::size_t>(J) + 1, 0.0);
        for (int k = 0; k <= J; ++k)
            for (int i = 0; i <= k; ++i)
                e[static_cast<std::size_t>(k)] +=
                    table[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] * f.coeff(2 * static_cast<std::size_t>(i));
        deriv[static_cast<std::size_t>(a)] = f.derivative();
    }
    auto gram = [&](int a, int b) {
        const PsiSeries& f = fam.member(a);
        const PsiSeries& g = fam.member(b);
        const auto& ef = anti[static_cast<std::size_t>(a)];
        const auto& eg = anti[static_cast<std::size_t>(b)];
        double one = 0.0;
        for (int k = 0; k <= J; ++k) {
            const std::size_t odd = 2 * static_cast<std::size_t>(k) + 1;
            one += ef[static_cast<std::size_t>(k)] * g.coeff(odd) - eg[static_cast<std::size_t>(k)] * f.coeff(odd);
        }
        const double four = coefficient_dot(f, deriv[static_cast<std::size_t>(b)]) -
                            coefficient_dot(g, deriv[static_cast<std::size_t>(a)]);
        return X * X * 2.0 * one + four;
    };

    double worst = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double got = gram(a, b);
            const bool paired = (a % 2 == 0) && (b == a + 1);
            const double expected = paired ? fam.r_[static_cast<std::size_t>(a / 2)] : 0.0;
            if (paired) fam.r_measured_[static_cast<std::size_t>(a / 2)] = got;
            const double scale = std::max(
                1.0, std::sqrt(fam.r_[static_cast<std::size_t>(a / 2)] * fam.r_[static_cast<std::size_t>(b / 2)]));
            worst = std::max(worst, std::abs(got - expected) / scale);
        }
    }
    fam.max_residual_ = worst;
    if (!(worst <= kFamilyResidualTol))
        throw std::logic_error("build_family: skew-orthogonality residual " + std::to_string(worst) +
                               " exceeds tolerance (J=" + std::to_string(J) + ", X=" + std::to_string(X) + ")");
    return fam;
}

Polynomial family_polynomial(int n, double X, FamilyKind kind) {
    if (n < 0) throw std::domain_error("family_polynomial: negative index");
    const int j = n / 2;
    // P_{2j}(x) = sum_k (-1)^k L_k(-X^2)/L_k(0) L_k(x^2), L_k = L_k^(-1/2).
    std::vector<double> c(2 * static_cast<std::size_t>(j) + 1, 0.0);
    for (int k = 0; k <= j; ++k) {
        const double ratio = laguerre(k, -0.5, -X * X) / laguerre(k, -0.5, 0.0);
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        const auto lc = laguerre_coeffs(k, -0.5);
        for (int i = 0; i <= k; ++i) c[2 * static_cast<std::size_t>(i)] += sign * ratio * lc[static_cast<std::size_t>(i)];
    }
    Polynomial p(std::move(c));
    double scale = 1.0;
    if (kind == FamilyKind::monic) scale = laguerre(j, -0.5, 0.0) * std::exp(log_factorial(j)) / laguerre(j, -0.5, -X * X);
    if (n % 2 == 0) return p * scale;
    const Polynomial odd = p.times_x() * 2.0 - p.derivative() * 2.0;
    return odd * (kind == FamilyKind::monic ? 0.5 * scale : 1.0);
}

double odd_alternative_form(int j, double X, double x, bool plus_sign) {
    if (j < 0) throw std::domain_error("odd_alternative_form: negative index");
    double sum = 0.0;
    for (int k = 0; k < j; ++k) {
        const double sign = k % 2 == 0 ? 1.0 : -1.0;
        sum += sign * laguerre(k, 0.5, -X * X) / laguerre(k, 0.5, 0.0) * laguerre(k, 0.5, x * x);
    }
    const double first = (plus_sign ? 4.0 : -4.0) * X * X * x * sum;
    const double sign_j = j % 2 == 0 ? 1.0 : -1.0;
    const double second =
        2.0 * x * sign_j * laguerre(j, -0.5, -X * X) / laguerre(j, -0.5, 0.0) * laguerre(j, 0.5, x * x);
    return first + second;
}

}  // namespace twocharge
