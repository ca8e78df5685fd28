#include "twocharge/ensemble_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "twocharge/pfaffian.hpp"

namespace twocharge {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
        else comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void check_even(int N, const char* who) {
    if (N < 2 || N % 2 != 0) throw std::domain_error(std::string(who) + ": N must be a positive even integer");
}

double log_lag(int k, double alpha, double X) { return laguerre_log(k, alpha, -X * X).log_abs; }

// Integrates Omega over free alpha (ordered) and free beta (ordered) with the fixed points held.
class NestedOmega {
public:
    NestedOmega(const Weight& w, const QuadratureSpec& q, const std::vector<double>& fixed_alpha,
                const std::vector<double>& fixed_beta, int free_L, int free_M)
        : w_(w), q_(q), fixed_L_(static_cast<int>(fixed_alpha.size())),
          fixed_M_(static_cast<int>(fixed_beta.size())), free_L_(free_L), free_M_(free_M),
          alpha_(fixed_alpha), beta_(fixed_beta), kinks_(fixed_alpha) {
        alpha_.resize(fixed_alpha.size() + static_cast<std::size_t>(free_L));
        beta_.resize(fixed_beta.size() + static_cast<std::size_t>(free_M));
    }

    double run() { return level(0); }

private:
    double level(int v) {
        if (v == free_L_ + free_M_) return boltzmann_factor(alpha_, beta_, w_);
        const double r = q_.truncation_radius;
        const bool is_alpha = v < free_L_;
        double lo = -r;
        std::size_t slot;
        if (is_alpha) {
            slot = static_cast<std::size_t>(fixed_L_ + v);
            if (v > 0) lo = alpha_[slot - 1];
        } else {
            const int u = v - free_L_;
            slot = static_cast<std::size_t>(fixed_M_ + u);
            if (u > 0) lo = beta_[slot - 1];
        }
        if (lo >= r) return 0.0;
        std::vector<double>& target = is_alpha ? alpha_ : beta_;
        const std::vector<double> none;
        return integrate(
                   [&](double t) {
                       target[slot] = t;
                       return level(v + 1);
                   },
                   lo, r, q_, is_alpha ? kinks_ : none)
            .value;
    }

    const Weight& w_;
    QuadratureSpec q_;
    int fixed_L_;
    int fixed_M_;
    int free_L_;
    int free_M_;
    std::vector<double> alpha_;
    std::vector<double> beta_;
    std::vector<double> kinks_;
};

}  // namespace

double PopulationLaw::prob(int L) const {
    if (L < 0 || L > N || L % 2 != 0) return 0.0;
    return sectors[static_cast<std::size_t>(L / 2)].prob;
}

double log_partition_product(int N, double X) {
    check_even(N, "log_partition_product");
    if (X < 0.0) throw std::domain_error("log_partition_product: fugacity must be nonnegative");
    const int J = N / 2;
    CompensatedSum s;
    for (int j = 0; j < J; ++j) s.add(std::log(2.0) + log_factorial(j + 1) + log_gamma(j + 0.5));
    // prod L_{j+1}/L_j telescopes to L_J(-X^2).
    s.add(log_lag(J, -0.5, X));
    return s.value();
}

PopulationLaw population_law(int N, double X) {
    check_even(N, "population_law");
    if (N > kPopulationMaxN) throw std::domain_error("population_law: N above " + std::to_string(kPopulationMaxN));
    if (X < 0.0) throw std::domain_error("population_law: fugacity must be nonnegative");
    const int J = N / 2;
    PopulationLaw law;
    law.N = N;
    law.X = X;
    std::vector<double> lw(static_cast<std::size_t>(J) + 1);
    double top = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= J; ++i) {
        const int L = 2 * i;
        const int M = J - i;
        double v = -log_factorial(L) - log_factorial(M);
        if (L > 0) v += X > 0.0 ? L * std::log(2.0 * X) : -std::numeric_limits<double>::infinity();
        lw[static_cast<std::size_t>(i)] = v;
        top = std::max(top, v);
    }
    CompensatedSum norm;
    for (double v : lw) norm.add(std::exp(v - top));
    const double z = norm.value();
    CompensatedSum m1;
    for (int i = 0; i <= J; ++i) {
        const double p = std::exp(lw[static_cast<std::size_t>(i)] - top) / z;
        law.sectors.push_back({2 * i, J - i, p});
        m1.add(2.0 * i * p);
    }
    law.mean_L_pmf = m1.value();
    CompensatedSum m2;
    for (const auto& s : law.sectors) m2.add((s.L - law.mean_L_pmf) * (s.L - law.mean_L_pmf) * s.prob);
    law.var_L_pmf = m2.value();

    // E(L) = X d/dX log L_J(-X^2) = 2 X^2 L_{J-1}^{1/2}(-X^2) / L_J(-X^2).
    law.mean_L = X > 0.0 ? std::exp(std::log(2.0 * X * X) + log_lag(J - 1, 0.5, X) - log_lag(J, -0.5, X)) : 0.0;
    law.var_L = X == 1.0 ? 4.0 * J - law.mean_L - law.mean_L * law.mean_L : law.var_L_pmf;
    law.log_Z = log_partition_product(N, X);
    return law;
}

PartitionValues partition_function(int N, double X, bool with_pfaffian, const QuadratureSpec& spec) {
    check_even(N, "partition_function");
    PartitionValues out;
    out.log_product = log_partition_product(N, X);
    out.product = std::exp(out.log_product);
    if (!with_pfaffian) return out;
    if (N > kPartitionPfaffianMaxN) return out;
    const SkewOPFamily fam = build_family(N / 2, 1.0, FamilyKind::monic);
    SkewMatrix c(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k) {
            const SkewForms f = skew_forms_measured(fam.member(j), fam.member(k), spec, X != 0.0);
            c.set(static_cast<std::size_t>(j), static_cast<std::size_t>(k), X * X * f.one + f.four);
        }
    out.pfaffian = pfaffian(c);
    return out;
}

double partition_pfaffian_monomial(int N, double X, const Weight& w, const QuadratureSpec& spec) {
    check_even(N, "partition_pfaffian_monomial");
    SkewMatrix c(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j)
        for (int k = j + 1; k < N; ++k)
            c.set(static_cast<std::size_t>(j), static_cast<std::size_t>(k),
                  skew_inner_X(Polynomial::monomial(j), Polynomial::monomial(k), X, w, spec));
    return pfaffian(c);
}

double boltzmann_factor(const std::vector<double>& alpha, const std::vector<double>& beta, const Weight& w) {
    double v = 1.0;
    for (double a : alpha) v *= w.w(a);
    for (double b : beta) {
        const double wb = w.w(b);
        v *= wb * wb;
    }
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (std::size_t k = j + 1; k < alpha.size(); ++k) v *= std::abs(alpha[j] - alpha[k]);
    for (std::size_t m = 0; m < beta.size(); ++m)
        for (std::size_t n = m + 1; n < beta.size(); ++n) {
            const double d = beta[m] - beta[n];
            v *= d * d * d * d;
        }
    for (double a : alpha)
        for (double b : beta) v *= (a - b) * (a - b);
    return v;
}

double SectorIntegral::rel_change() const {
    return std::abs(value - coarse) / std::max(std::abs(value), std::numeric_limits<double>::min());
}

SectorIntegral brute_force_sector(int L, int M, const Weight& w, const BruteForceSpec& spec) {
    if (L < 0 || M < 0 || L + M == 0) throw std::domain_error("brute_force_sector: empty or negative sector");
    if (L + 2 * M > kBruteForceMaxN) throw std::domain_error("brute_force_sector: N above brute-force limit");
    SectorIntegral s;
    s.L = L;
    s.M = M;
    s.value = NestedOmega(w, spec.quad, {}, {}, L, M).run();
    QuadratureSpec coarse = spec.quad;
    coarse.rel_tol *= spec.coarse_factor;
    coarse.abs_tol *= spec.coarse_factor;
    s.coarse = NestedOmega(w, coarse, {}, {}, L, M).run();
    return s;
}

BruteForceZ brute_force_Z(int N, double X, const Weight& w, const BruteForceSpec& spec) {
    check_even(N, "brute_force_Z");
    if (N > kBruteForceMaxN) throw std::domain_error("brute_force_Z: N above brute-force limit");
    BruteForceZ out;
    for (int L = N; L >= 0; L -= 2) {
        const SectorIntegral s = brute_force_sector(L, (N - L) / 2, w, spec);
        out.Z += std::pow(X, L) * s.value;
        out.sectors.push_back(s);
    }
    return out;
}

double brute_force_correlation(int N, double X, const std::vector<double>& xs, const std::vector<double>& ys,
                               double Z, const Weight& w, const BruteForceSpec& spec) {
    check_even(N, "brute_force_correlation");
    if (N > kBruteForceMaxN) throw std::domain_error("brute_force_correlation: N above brute-force limit");
    const int l = static_cast<int>(xs.size());
    const int m = static_cast<int>(ys.size());
    double total = 0.0;
    for (int L = N % 2; L <= N; L += 2) {
        const int M = (N - L) / 2;
        if (L < l || M < m) continue;
        const double fug = std::pow(X, L);
        if (fug == 0.0) continue;
        total += fug * NestedOmega(w, spec.quad, xs, ys, L - l, M - m).run();
    }
    return total / Z;
}

MomentEstimate asymptotic_moments(int N) {
    if (N < 2) throw std::domain_error("asymptotic_moments: N must be at least 2");
    const double n = N;
    return {std::sqrt(2.0 * n) - 1.0 + 1.0 / (3.0 * std::sqrt(n)), std::sqrt(2.0 * n) - 4.0 / 3.0};
}

MomentEstimate refined_asymptotic_moments(int N) {
    if (N < 2) throw std::domain_error("refined_asymptotic_moments: N must be at least 2");
    const double n = N;
    const double s = std::sqrt(2.0 * n);
    return {s - 1.0 + 1.0 / s - 1.0 / (4.0 * n), s - 2.0 + std::sqrt(2.0 / n)};
}

std::vector<CltPoint> local_clt_profile(const PopulationLaw& law, const std::vector<double>& c_grid) {
    const double n2 = 2.0 * law.N;
    const double spread = std::pow(n2, 0.25);
    const double center = std::sqrt(n2);
    std::vector<CltPoint> out;
    for (double c : c_grid) {
        const double target = center + spread * c;
        const int k = 2 * static_cast<int>(std::lround(target / 2.0));
        if (k < 0 || k > law.N)
            throw std::domain_error("local_clt_profile: grid point c=" + std::to_string(c) + " outside the support");
        CltPoint p;
        p.c = c;
        p.k = k;
        p.scaled_pmf = spread * law.prob(k);
        p.lattice_corrected = 0.5 * p.scaled_pmf;
        p.gaussian = std::exp(-0.5 * c * c) / std::sqrt(2.0 * kPi);
        out.push_back(p);
    }
    return out;
}

std::vector<CltPoint> local_clt_profile(int N, const std::vector<double>& c_grid) {
    return local_clt_profile(population_law(N), c_grid);
}

TailCheck tail_bound_check(const PopulationLaw& law, double eps, double C) {
    if (!(eps > 0.0)) throw std::domain_error("tail_bound_check: epsilon must be positive");
    const double root = std::sqrt(2.0 * law.N);
    CompensatedSum lhs;
    for (const auto& s : law.sectors)
        if (std::abs(s.L / root - 1.0) >= eps) lhs.add(s.prob);
    TailCheck t;
    t.lhs = lhs.value();
    const double base = law.N * std::exp(-std::min(eps, 1.0) * root);
    t.rhs = C * base;
    t.fitted_C = t.lhs / base;
    return t;
}

FourierValue fourier_scaled_density(const KernelContext& ctx, int species, double t, const QuadratureSpec& spec) {
    if (species != 1 && species != 2) throw std::domain_error("fourier_scaled_density: species must be 1 or 2");
    if (std::abs(t) > kFourierMaxT)
        throw std::domain_error("fourier_scaled_density: |t| above the configured limit");
    const double n = ctx.N();
    const double rn = std::sqrt(n);
    const double factor = species == 1 ? 1.0 / std::sqrt(2.0 * n) : 2.0 / n;
    QuadratureSpec s = spec;
    s.truncation_radius = std::max(spec.truncation_radius, QuadratureSpec::for_degree(ctx.N()).truncation_radius);
    FourierValue out;
    out.re = factor * integrate_line([&](double y) { return std::cos(t * y / rn) * density(ctx, species, y); }, s);
    if (t != 0.0) {
        out.im = factor * integrate_line([&](double y) { return std::sin(t * y / rn) * density(ctx, species, y); }, s);
        if (std::abs(out.im) > 1e-8)
            throw std::logic_error("fourier_scaled_density: imaginary part " + std::to_string(out.im) +
                                   " breaks the even symmetry");
    }
    return out;
}

double limit_s1(double t) {
    const double z = std::sqrt(2.0) * t;
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 6.0;
    return std::sin(z) / z;
}

double limit_s2(double t) {
    const double z = std::sqrt(2.0) * t;
    if (std::abs(z) < 1e-6) return 1.0 - z * z / 8.0;
    return 2.0 * bessel_j(1, z) / z;
}

double uniform_limit_density(double x) { return std::abs(x) <= std::sqrt(2.0) ? 1.0 / (2.0 * std::sqrt(2.0)) : 0.0; }

double semicircle_limit_density(double x) {
    const double v = 2.0 - x * x;
    return v > 0.0 ? std::sqrt(v) / kPi : 0.0;
}

}  // namespace twocharge
