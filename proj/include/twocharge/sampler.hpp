#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "twocharge/ensemble_stats.hpp"

namespace twocharge {

struct ParticleState {
    std::vector<double> alpha;  // charge-1 positions
    std::vector<double> beta;   // charge-2 positions
};

struct ChainConfig {
    std::uint64_t seed = 42;
    int burn_in = 2000;      // sweeps per sector chain, proposal scale adapts during these only
    int thinning = 10;       // sweeps between kept samples
    double proposal_scale = 0.0;  // 0 means 0.5 / sqrt(N)
    int chain_count = 4;
    long steps = 100000;     // kept samples per chain
    int adapt_window = 1000;  // max proposals between scale updates
    double target_acceptance = 0.3;
};

// mt19937_64 seeded from (seed, stream) so each chain owns an independent stream.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream);
    double uniform();  // [0, 1)
    double normal();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

// log of the Boltzmann factor with V(x) = x^2/2; -inf at coincident points.
double log_boltzmann(const ParticleState& s);

bool metropolis_accept(double log_ratio, double u);

// Inverse-CDF draw over the even-L support.
std::pair<int, int> sample_population(const PopulationLaw& law, double u);
std::pair<int, int> sample_population(const PopulationLaw& law, Rng& rng);

// Single-site Gaussian random-walk Metropolis inside one (L, M) sector.
class MetropolisChain {
public:
    MetropolisChain(int L, int M, double proposal_scale, Rng& rng);

    void sweep();
    // Runs the sweeps while rescaling the proposal toward the target acceptance every window proposals.
    void burn_in(int sweeps, int window, double target);

    const ParticleState& state() const { return state_; }
    double proposal_scale() const { return scale_; }
    // Acceptance over the post-burn-in proposals.
    double acceptance_rate() const;
    long proposals() const { return proposed_; }

private:
    bool move(std::size_t site);

    ParticleState state_;
    double scale_;
    Rng& rng_;
    long proposed_ = 0;
    long accepted_ = 0;
};

inline constexpr double kAcceptanceLow = 0.1;
inline constexpr double kAcceptanceHigh = 0.7;

struct Histogram {
    double lo = -4.0;
    double hi = 4.0;
    std::vector<long> counts = std::vector<long>(20, 0);
    double width() const { return (hi - lo) / static_cast<double>(counts.size()); }
    void add(double x);
};

struct SectorDiagnostics {
    int L = 0;
    int M = 0;
    double proposal_scale = 0.0;
    double acceptance = 0.0;
};

struct ChainResult {
    std::vector<long> population;  // indexed by L/2
    Histogram charge1;
    Histogram charge2;
    long kept = 0;
    // Per-sample counts of charge-1 and charge-2 points in [-1, 1].
    double interval1_sum = 0.0;
    double interval1_sumsq = 0.0;
    double interval2_sum = 0.0;
    double interval2_sumsq = 0.0;
    std::vector<SectorDiagnostics> sectors;
    std::vector<std::string> warnings;
};

struct SamplerResult {
    int N = 0;
    std::vector<ChainResult> chains;
    ChainResult pooled;
};

// Each kept sample draws (L, M) exactly, then advances that sector's persistent chain
// by config.thinning sweeps. Chains run on separate threads; merging follows chain order.
SamplerResult run_sampler(int N, const ChainConfig& config);

}  // namespace twocharge
