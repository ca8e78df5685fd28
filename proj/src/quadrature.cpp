#include "twocharge/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace twocharge {

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const RealFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kWgk[7] * fc;
    double gauss = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double s = f(c - dx) + f(c + dx);
        kron += kWgk[j] * s;
        if (j % 2 == 1) gauss += kWg[j / 2] * s;
    }
    kron *= h;
    gauss *= h;
    return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadratureSpec QuadratureSpec::for_degree(int n) {
    QuadratureSpec s;
    s.truncation_radius = std::max(14.0, std::sqrt(2.0 * n) + 8.0);
    return s;
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
    QuadratureSpec s = *this;
    s.abs_tol /= factor;
    s.rel_tol /= factor;
    return s;
}

QuadratureResult integrate(const RealFn& f, double a, double b, const QuadratureSpec& spec,
                           const std::vector<double>& breakpoints) {
    QuadratureResult out;
    if (a == b) return out;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> cuts{a};
    for (double p : breakpoints)
        if (p > a && p < b) cuts.push_back(p);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Panel> heap;
    double total = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p = gk15(f, cuts[i], cuts[i + 1]);
        out.evaluations += 15;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    int panels = static_cast<int>(heap.size());
    while (!(err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total)))) {
        // A NaN error estimate means the integrand produced a non-finite value.
        if (!std::isfinite(total) || !std::isfinite(err))
            throw QuadratureError("integrate: non-finite integrand on [" + std::to_string(a) + ", " +
                                      std::to_string(b) + "]",
                                  sign * total, err);
        if (panels >= spec.max_subdivisions) {
            throw QuadratureError("integrate: subdivision budget exhausted on [" + std::to_string(a) +
                                      ", " + std::to_string(b) + "], estimate " +
                                      std::to_string(total) + " +- " + std::to_string(err),
                                  sign * total, err);
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval collapsed to adjacent doubles; accept its contribution as is.
            err -= worst.error;
            heap.push({worst.a, worst.b, worst.value, 0.0});
            continue;
        }
        const Panel left = gk15(f, worst.a, mid);
        const Panel right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Recompute the sum from panels to shed accumulated update rounding.
    double sum = 0.0;
    double err_sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err_sum += heap.top().error;
        heap.pop();
    }
    out.value = sign * sum;
    out.error = err_sum;
    out.intervals = panels;
    return out;
}

double integrate_line(const RealFn& f, const QuadratureSpec& spec, const std::vector<double>& breakpoints) {
    const double r = spec.truncation_radius;
    return integrate(f, -r, r, spec, breakpoints).value;
}

double epsilon1_numeric(const RealFn& f_tilde, double x, const QuadratureSpec& spec) {
    const double r = spec.truncation_radius;
    const double upper = x < r ? integrate(f_tilde, x, r, spec).value : 0.0;
    const double lower = x > -r ? integrate(f_tilde, -r, x, spec).value : 0.0;
    return 0.5 * (upper - lower);
}

std::vector<double> epsilon1_psi_all(int nmax, double x) {
    std::vector<double> e = psi_cumulative(nmax, x);
    for (int m = 0; m <= nmax; ++m) e[static_cast<std::size_t>(m)] = 0.5 * psi_total(m) - e[static_cast<std::size_t>(m)];
    return e;
}

double epsilon1_closed(const PsiSeries& s, double x) {
    if (s.size() == 0) return 0.0;
    return s.dot(epsilon1_psi_all(static_cast<int>(s.size()) - 1, x));
}

double epsilon1_even_closed(const PsiSeries& s, double x) {
    if (!s.has_parity(0)) throw std::domain_error("epsilon1_even_closed: input has odd components");
    return epsilon1_closed(s, x);
}

}  // namespace twocharge
