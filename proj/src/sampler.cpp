#include "twocharge/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <exception>
#include <map>
#include <memory>
#include <stdexcept>
#include <thread>

namespace twocharge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_abs(double d) { return d == 0.0 ? kNegInf : std::log(std::abs(d)); }

void merge_into(ChainResult& into, const ChainResult& from) {
    if (into.population.size() < from.population.size()) into.population.resize(from.population.size(), 0);
    for (std::size_t i = 0; i < from.population.size(); ++i) into.population[i] += from.population[i];
    for (std::size_t i = 0; i < from.charge1.counts.size(); ++i) into.charge1.counts[i] += from.charge1.counts[i];
    for (std::size_t i = 0; i < from.charge2.counts.size(); ++i) into.charge2.counts[i] += from.charge2.counts[i];
    into.kept += from.kept;
    into.interval1_sum += from.interval1_sum;
    into.interval1_sumsq += from.interval1_sumsq;
    into.interval2_sum += from.interval2_sum;
    into.interval2_sumsq += from.interval2_sumsq;
    into.sectors.insert(into.sectors.end(), from.sectors.begin(), from.sectors.end());
    into.warnings.insert(into.warnings.end(), from.warnings.begin(), from.warnings.end());
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform() { return std::generate_canonical<double, 53>(engine_); }

double Rng::normal() { return normal_(engine_); }

double log_boltzmann(const ParticleState& s) {
    // Sorting fixes the summation order so permuted inputs give bitwise-equal results.
    std::vector<double> a = s.alpha;
    std::vector<double> b = s.beta;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double v = 0.0;
    for (double x : a) v -= 0.5 * x * x;
    for (double y : b) v -= y * y;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t k = j + 1; k < a.size(); ++k) v += log_abs(a[k] - a[j]);
    for (std::size_t m = 0; m < b.size(); ++m)
        for (std::size_t n = m + 1; n < b.size(); ++n) v += 4.0 * log_abs(b[n] - b[m]);
    for (double x : a)
        for (double y : b) v += 2.0 * log_abs(x - y);
    return std::isnan(v) ? kNegInf : v;
}

bool metropolis_accept(double log_ratio, double u) {
    if (std::isnan(log_ratio) || log_ratio == kNegInf) return false;
    if (log_ratio >= 0.0) return true;
    return u < std::exp(log_ratio);
}

std::pair<int, int> sample_population(const PopulationLaw& law, double u) {
    double acc = 0.0;
    for (const auto& s : law.sectors) {
        acc += s.prob;
        if (u < acc) return {s.L, s.M};
    }
    // u within rounding of 1: take the last sector with mass.
    for (auto it = law.sectors.rbegin(); it != law.sectors.rend(); ++it)
        if (it->prob > 0.0) return {it->L, it->M};
    throw std::logic_error("sample_population: law has no mass");
}

std::pair<int, int> sample_population(const PopulationLaw& law, Rng& rng) {
    return sample_population(law, rng.uniform());
}

MetropolisChain::MetropolisChain(int L, int M, double proposal_scale, Rng& rng) : scale_(proposal_scale), rng_(rng) {
    if (L < 0 || M < 0 || L + M == 0) throw std::domain_error("MetropolisChain: empty or negative sector");
    if (!(proposal_scale > 0.0)) throw std::domain_error("MetropolisChain: proposal scale must be positive");
    // Distinct starting points, charges interleaved.
    const int n = L + M;
    int a = 0, b = 0;
    for (int i = 0; i < n; ++i) {
        const double x = n == 1 ? 0.0 : -1.0 + 2.0 * i / (n - 1);
        const bool take_alpha = a < L && (b >= M || i % 2 == 0);
        if (take_alpha) {
            state_.alpha.push_back(x);
            ++a;
        } else {
            state_.beta.push_back(x);
            ++b;
        }
    }
}

bool MetropolisChain::move(std::size_t site) {
    const std::size_t L = state_.alpha.size();
    const bool is_alpha = site < L;
    const std::size_t idx = is_alpha ? site : site - L;
    const double old = is_alpha ? state_.alpha[idx] : state_.beta[idx];
    const double nu = old + scale_ * rng_.normal();
    double delta = 0.0;
    // Local change: pair terms involving the moved particle plus its own potential.
    if (is_alpha) {
        delta -= 0.5 * (nu * nu - old * old);
        for (std::size_t j = 0; j < L; ++j)
            if (j != idx) delta += log_abs(nu - state_.alpha[j]) - log_abs(old - state_.alpha[j]);
        for (double y : state_.beta) delta += 2.0 * (log_abs(nu - y) - log_abs(old - y));
    } else {
        delta -= nu * nu - old * old;
        for (std::size_t n = 0; n < state_.beta.size(); ++n)
            if (n != idx) delta += 4.0 * (log_abs(nu - state_.beta[n]) - log_abs(old - state_.beta[n]));
        for (double x : state_.alpha) delta += 2.0 * (log_abs(nu - x) - log_abs(old - x));
    }
    const double u = rng_.uniform();
    if (!metropolis_accept(delta, u)) return false;
    (is_alpha ? state_.alpha[idx] : state_.beta[idx]) = nu;
    return true;
}

void MetropolisChain::sweep() {
    const std::size_t n = state_.alpha.size() + state_.beta.size();
    for (std::size_t s = 0; s < n; ++s) {
        ++proposed_;
        if (move(s)) ++accepted_;
    }
}

void MetropolisChain::burn_in(int sweeps, int window, double target) {
    const std::size_t n = state_.alpha.size() + state_.beta.size();
    // Small sectors see few proposals; shrink the window so every chain gets at least 20 updates.
    const long total = static_cast<long>(sweeps) * static_cast<long>(n);
    const long win = window > 0 ? std::min<long>(window, std::max<long>(50, total / 20)) : 0;
    long win_prop = 0, win_acc = 0;
    for (int i = 0; i < sweeps; ++i) {
        for (std::size_t s = 0; s < n; ++s) {
            ++win_prop;
            if (move(s)) ++win_acc;
            if (win > 0 && win_prop >= win) {
                const double rate = static_cast<double>(win_acc) / static_cast<double>(win_prop);
                scale_ *= std::exp(rate - target);
                win_prop = 0;
                win_acc = 0;
            }
        }
    }
}

double MetropolisChain::acceptance_rate() const {
    return proposed_ == 0 ? 0.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

void Histogram::add(double x) {
    if (x < lo || x >= hi) return;
    const auto bin = static_cast<std::size_t>((x - lo) / width());
    counts[std::min(bin, counts.size() - 1)] += 1;
}

SamplerResult run_sampler(int N, const ChainConfig& config) {
    if (N < 2 || N % 2 != 0) throw std::domain_error("run_sampler: N must be a positive even integer");
    if (config.chain_count < 1 || config.steps < 1 || config.thinning < 1 || config.burn_in < 0)
        throw std::domain_error("run_sampler: counts must be positive");
    if (config.proposal_scale < 0.0) throw std::domain_error("run_sampler: proposal scale must be positive");
    const double scale0 = config.proposal_scale > 0.0 ? config.proposal_scale : 0.5 / std::sqrt(static_cast<double>(N));
    const PopulationLaw law = population_law(N);

    SamplerResult out;
    out.N = N;
    out.chains.resize(static_cast<std::size_t>(config.chain_count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(config.chain_count));
    auto run_chain = [&](int c) {
        try {
            ChainResult& res = out.chains[static_cast<std::size_t>(c)];
            res.population.assign(law.sectors.size(), 0);
            Rng rng(config.seed, static_cast<std::uint64_t>(c));
            std::map<int, std::unique_ptr<MetropolisChain>> by_sector;
            for (long step = 0; step < config.steps; ++step) {
                const auto [L, M] = sample_population(law, rng);
                auto& chain = by_sector[L];
                if (!chain) {
                    chain = std::make_unique<MetropolisChain>(L, M, scale0, rng);
                    chain->burn_in(config.burn_in, config.adapt_window, config.target_acceptance);
                }
                for (int t = 0; t < config.thinning; ++t) chain->sweep();
                const ParticleState& s = chain->state();
                res.population[static_cast<std::size_t>(L / 2)] += 1;
                double in1 = 0.0, in2 = 0.0;
                for (double x : s.alpha) {
                    res.charge1.add(x);
                    if (std::abs(x) <= 1.0) in1 += 1.0;
                }
                for (double y : s.beta) {
                    res.charge2.add(y);
                    if (std::abs(y) <= 1.0) in2 += 1.0;
                }
                res.interval1_sum += in1;
                res.interval1_sumsq += in1 * in1;
                res.interval2_sum += in2;
                res.interval2_sumsq += in2 * in2;
                ++res.kept;
            }
            for (const auto& [L, chain] : by_sector) {
                const double rate = chain->acceptance_rate();
                res.sectors.push_back({L, (N - L) / 2, chain->proposal_scale(), rate});
                if (rate < kAcceptanceLow || rate > kAcceptanceHigh)
                    res.warnings.push_back("chain " + std::to_string(c) + " sector L=" + std::to_string(L) +
                                           ": acceptance " + std::to_string(rate) + " outside [0.1, 0.7]");
            }
        } catch (...) {
            errors[static_cast<std::size_t>(c)] = std::current_exception();
        }
    };

    std::vector<std::thread> threads;
    for (int c = 0; c < config.chain_count; ++c) threads.emplace_back(run_chain, c);
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    out.pooled.population.assign(law.sectors.size(), 0);
    for (const auto& r : out.chains) merge_into(out.pooled, r);
    return out;
}

}  // namespace twocharge
