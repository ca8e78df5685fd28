#pragma once

#include <optional>
#include <vector>

#include "twocharge/kernel.hpp"
#include "twocharge/quadrature.hpp"
#include "twocharge/skewpoly.hpp"

namespace twocharge {

struct SectorProb {
    int L = 0;
    int M = 0;
    double prob = 0.0;
};

// Exact law of (L, M) with L + 2M = N; only even L carries mass.
struct PopulationLaw {
    int N = 0;
    double X = 1.0;
    std::vector<SectorProb> sectors;  // L ascending
    double log_Z = 0.0;               // log Z(X) from the normalization product
    double mean_L = 0.0;              // Laguerre-ratio closed form
    double var_L = 0.0;               // 4J - E - E^2 at X = 1, pmf sum otherwise
    double mean_L_pmf = 0.0;
    double var_L_pmf = 0.0;

    double prob(int L) const;
};

inline constexpr int kPopulationMaxN = 100000;

PopulationLaw population_law(int N, double X = 1.0);

// log prod_{j<J} r_j^(X), telescoped so the cost is O(J).
double log_partition_product(int N, double X);

struct PartitionValues {
    double log_product = 0.0;
    double product = 0.0;
    std::optional<double> pfaffian;  // Pf(X^2 A + B), N <= 16
};

inline constexpr int kPartitionPfaffianMaxN = 16;

// Path (b) assembles A, B by quadrature over the monic family built at X = 1.
PartitionValues partition_function(int N, double X, bool with_pfaffian = true, const QuadratureSpec& spec = {});

// Pf(X^2 A + B) over the monomial basis for an arbitrary weight; A uses the numeric epsilon1.
double partition_pfaffian_monomial(int N, double X, const Weight& w, const QuadratureSpec& spec = {});

// Boltzmann factor with weight w on charge-1 and w^2 on charge-2 positions.
double boltzmann_factor(const std::vector<double>& alpha, const std::vector<double>& beta, const Weight& w);

struct BruteForceSpec {
    QuadratureSpec quad{1e-13, 1e-8, 10.0, 4000};
    // Second pass at rel_tol * coarse_factor; the change between passes is reported.
    double coarse_factor = 100.0;
};

struct SectorIntegral {
    int L = 0;
    int M = 0;
    double value = 0.0;
    double coarse = 0.0;
    double rel_change() const;
};

// Z_{L,M} = (1/(L! M!)) int Omega, integrated over ordered alpha and ordered beta.
SectorIntegral brute_force_sector(int L, int M, const Weight& w = Weight::gaussian(),
                                  const BruteForceSpec& spec = {});

struct BruteForceZ {
    double Z = 0.0;
    std::vector<SectorIntegral> sectors;
};

inline constexpr int kBruteForceMaxN = 4;
BruteForceZ brute_force_Z(int N, double X, const Weight& w = Weight::gaussian(), const BruteForceSpec& spec = {});

// Direct-integral R_{l,m}(xs; ys) = (1/Z) sum_{L,M} X^L / ((L-l)! (M-m)!) int Omega.
double brute_force_correlation(int N, double X, const std::vector<double>& xs, const std::vector<double>& ys,
                               double Z, const Weight& w = Weight::gaussian(), const BruteForceSpec& spec = {});

struct MomentEstimate {
    double mean = 0.0;
    double var = 0.0;
};

// sqrt(2N) - 1 + 1/(3 sqrt N) and sqrt(2N) - 4/3.
MomentEstimate asymptotic_moments(int N);
// Expansion fitted to the exact law: sqrt(2N) - 1 + 1/sqrt(2N) - 1/(4N), sqrt(2N) - 2 + sqrt(2/N).
MomentEstimate refined_asymptotic_moments(int N);

struct CltPoint {
    double c = 0.0;
    int k = 0;                   // nearest even L to sqrt(2N) + (2N)^{1/4} c
    double scaled_pmf = 0.0;     // (2N)^{1/4} p_N(k)
    double lattice_corrected = 0.0;  // scaled_pmf / 2: L lives on the even lattice
    double gaussian = 0.0;       // phi(c)
};

std::vector<CltPoint> local_clt_profile(const PopulationLaw& law, const std::vector<double>& c_grid);
std::vector<CltPoint> local_clt_profile(int N, const std::vector<double>& c_grid);

struct TailCheck {
    double lhs = 0.0;        // Prob(|L/sqrt(2N) - 1| >= eps)
    double rhs = 0.0;        // C N e^{-min(eps,1) sqrt(2N)}
    double fitted_C = 0.0;   // lhs / (N e^{-min(eps,1) sqrt(2N)})
    bool holds() const { return lhs <= rhs; }
};

TailCheck tail_bound_check(const PopulationLaw& law, double eps, double C = 10.0);

struct FourierValue {
    double re = 0.0;
    double im = 0.0;
};

inline constexpr double kFourierMaxT = 8.0;

// int e^{itx} s_species(x) dx by adaptive quadrature in the unscaled variable.
FourierValue fourier_scaled_density(const KernelContext& ctx, int species, double t, const QuadratureSpec& spec = {});

double limit_s1(double t);  // sin(sqrt2 t)/(sqrt2 t)
double limit_s2(double t);  // (sqrt2/t) J1(sqrt2 t)
double uniform_limit_density(double x);     // 1/(2 sqrt2) on |x| <= sqrt2
double semicircle_limit_density(double x);  // (1/pi) sqrt(2 - x^2)

}  // namespace twocharge
