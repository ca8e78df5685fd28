#pragma once

#include <functional>
#include <string>
#include <vector>

#include "twocharge/quadrature.hpp"
#include "twocharge/specfun.hpp"

namespace twocharge {

// Monomial-basis polynomial, c[k] multiplies x^k.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> c) : c_(std::move(c)) {}
    static Polynomial monomial(int k);

    int degree() const;
    double leading() const;
    double coeff(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }
    const std::vector<double>& coeffs() const { return c_; }

    double operator()(double x) const;
    Polynomial derivative() const;
    Polynomial times_x() const;
    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(double s) const;

private:
    std::vector<double> c_;
};

// Positive weight w on the line; charge-2 terms use w^2.
struct Weight {
    std::string name;
    std::function<double(double)> w;

    static Weight gaussian();  // e^{-x^2/2}
    static Weight quartic();   // e^{-x^4/4}
};

// Skew forms by quadrature, f~ = w f. The 1-form uses the numeric epsilon1.
double skew_inner_1(const Polynomial& f, const Polynomial& g, const Weight& w = Weight::gaussian(),
                    const QuadratureSpec& spec = {});
double skew_inner_4(const Polynomial& f, const Polynomial& g, const Weight& w = Weight::gaussian(),
                    const QuadratureSpec& spec = {});
double skew_inner_X(const Polynomial& f, const Polynomial& g, double X,
                    const Weight& w = Weight::gaussian(), const QuadratureSpec& spec = {});

// Exact skew forms of psi-series (f~ given directly).
double skew_inner_1(const PsiSeries& f, const PsiSeries& g);
double skew_inner_4(const PsiSeries& f, const PsiSeries& g);
double skew_inner_X(const PsiSeries& f, const PsiSeries& g, double X);

// Quadrature of int (f e1 g - g e1 f) and int (f g' - g f') with closed-form e1 per node.
struct SkewForms {
    double one = 0.0;
    double four = 0.0;
};
SkewForms skew_forms_measured(const PsiSeries& f, const PsiSeries& g, const QuadratureSpec& spec = {},
                              bool need_one = true);
double skew_inner_X_measured(const PsiSeries& f, const PsiSeries& g, double X,
                             const QuadratureSpec& spec = {});

// psi_m, epsilon1 psi_m and psi_m' at x for m = 0..nmax.
struct BasisValues {
    std::vector<double> psi;
    std::vector<double> eps1;
    std::vector<double> deriv;
};
BasisValues psi_basis_values(int nmax, double x);

enum class FamilyKind { capital, monic };
const char* to_string(FamilyKind kind);

// Closed-form normalizations <p~_2j | p~_2j+1>^(X).
double norm_capital(int j, double X);
double norm_monic(int j, double X);
double log_norm_monic(int j, double X);
// Alternative closed form differing from norm_monic by j!/2; kept for the adjudication report.
double norm_monic_alternative(int j, double X);

class SkewOPFamily {
public:
    int J() const { return J_; }
    double X() const { return X_; }
    FamilyKind kind() const { return kind_; }
    int size() const { return 2 * J_; }

    const PsiSeries& member(int n) const;
    const std::vector<PsiSeries>& members() const { return members_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& r_measured() const { return r_measured_; }
    // Largest |Gram - expected| / max(1, scale) seen at construction.
    double max_residual() const { return max_residual_; }

    double eval_tilde(int n, double x) const;

private:
    friend SkewOPFamily build_family(int J, double X, FamilyKind kind);
    int J_ = 0;
    double X_ = 0.0;
    FamilyKind kind_ = FamilyKind::capital;
    std::vector<PsiSeries> members_;
    std::vector<double> r_;
    std::vector<double> r_measured_;
    double max_residual_ = 0.0;
};

inline constexpr double kFamilyResidualTol = 1e-8;

// Throws std::logic_error if the measured Gram is not skew-orthogonal.
SkewOPFamily build_family(int J, double X, FamilyKind kind);

// Independent monomial-form construction from the Laguerre expression (small n only).
Polynomial family_polynomial(int n, double X, FamilyKind kind);

// Alternative closed form of the capital odd member P_{2j+1}(x) at index m = j.
// plus_sign = true uses +4X^2 in the first term (does not match for X != 0); false uses -4X^2.
double odd_alternative_form(int j, double X, double x, bool plus_sign);

// Hermite-Laguerre coefficient a_k = (k!/(2k)!) L_k^(-1/2)(-X^2).
double hermite_coefficient(int k, double X);

}  // namespace twocharge
