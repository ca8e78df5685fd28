#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "twocharge/specfun.hpp"

namespace twocharge {

struct QuadratureSpec {
    double abs_tol = 1e-11;
    double rel_tol = 1e-10;
    // Integrals over R are cut to [-R, R]. e^{-98} swamps any moderate polynomial factor.
    double truncation_radius = 14.0;
    int max_subdivisions = 4000;

    // R = max(14, sqrt(2N) + 8) for integrands carrying degree-N polynomials.
    static QuadratureSpec for_degree(int n);
    QuadratureSpec tightened(double factor = 10.0) const;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_; }

private:
    double estimate_;
    double error_;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    int intervals = 0;
};

using RealFn = std::function<double(double)>;

// Globally adaptive G7-K15 on [a, b], split first at the given breakpoints.
QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec,
                           const std::vector<double>& breakpoints = {});

// int_{-R}^{R} f for f with Gaussian decay.
double integrate_line(const RealFn& f, const QuadratureSpec& spec = {},
                      const std::vector<double>& breakpoints = {});

// (1/2) int f(y) sgn(y - x) dy from two adaptive integrals.
double epsilon1_numeric(const RealFn& f_tilde, double x, const QuadratureSpec& spec = {});

// Closed-form epsilon1 of sum c_k psi_k. The even variant rejects odd components.
double epsilon1_even_closed(const PsiSeries& s, double x);
double epsilon1_closed(const PsiSeries& s, double x);
// epsilon1 psi_m(x) for m = 0..nmax.
std::vector<double> epsilon1_psi_all(int nmax, double x);

}  // namespace twocharge
