// twocharge: command-line front end for the two-charge ensemble library.
//
// Data goes to --output (default stdout) as CSV or JSON; diagnostics go to stderr.
// Exit codes: 0 success, 1 verify tolerance failure or numerical failure, 2 argument error.
// Every CSV float is printed with %.17g so files round-trip and are byte-stable.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "twocharge/ensemble_stats.hpp"
#include "twocharge/kernel.hpp"
#include "twocharge/pfaffian.hpp"
#include "twocharge/sampler.hpp"
#include "twocharge/skewpoly.hpp"
#include "twocharge/specfun.hpp"

using namespace twocharge;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr double kPi = std::numbers::pi;

class ArgumentError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int points = 0;
    double at(int i) const { return points == 1 ? lo : lo + (hi - lo) * i / (points - 1); }
};

// "min:max:points" or a single value.
Grid parse_grid(const std::string& s, const char* what) {
    Grid g;
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    try {
        if (parts.size() == 1) {
            g.lo = g.hi = std::stod(parts[0]);
            g.points = 1;
            return g;
        }
        if (parts.size() != 3) throw ArgumentError("");
        g.lo = std::stod(parts[0]);
        g.hi = std::stod(parts[1]);
        g.points = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw ArgumentError(std::string(what) + ": expected min:max:points, got '" + s + "'");
    }
    if (!(g.lo < g.hi) || g.points < 2)
        throw ArgumentError(std::string(what) + ": need min < max and at least 2 points");
    return g;
}

void require_even(int N) {
    if (N < 2 || N % 2 != 0) throw ArgumentError("--N must be a positive even integer, got " + std::to_string(N));
}

void require_species(int s) {
    if (s != 1 && s != 2) throw ArgumentError("--species must be 1 or 2");
}

FamilyKind parse_kind(const std::string& k) {
    if (k == "capital") return FamilyKind::capital;
    if (k == "monic") return FamilyKind::monic;
    throw ArgumentError("--family must be capital or monic");
}

// Evaluates f at every grid index on worker threads; results stay in grid order.
template <class T>
std::vector<T> parallel_map(int n, int threads, const std::function<T(int)>& f) {
    std::vector<T> out(static_cast<std::size_t>(n));
    const int workers = std::max(1, std::min(threads, n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) out[static_cast<std::size_t>(i)] = f(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw ArgumentError("cannot open output file " + path);
        }
    }
    std::ostream& out() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void write_side_json(const std::string& path, const json& j) {
    if (path.empty()) {
        std::cerr << j.dump(2) << "\n";
        return;
    }
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot open summary file " + path);
    f << j.dump(2) << "\n";
}

struct Common {
    int N = 0;
    double X = 1.0;
    std::string format = "csv";
    std::string output;
    int threads = 0;
    int worker_count() const {
        if (threads > 0) return threads;
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

void add_common(CLI::App* sub, Common& c, bool with_X = true) {
    sub->add_option("--N", c.N, "number of unit charges (even)")->required();
    if (with_X) sub->add_option("--X", c.X, "fugacity (default 1)");
    sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "output path (default stdout)");
    sub->add_option("--threads", c.threads, "worker threads for grid points (default: hardware)");
}

// ---------------------------------------------------------------- population

int cmd_population(const Common& c, const std::string& summary) {
    require_even(c.N);
    if (c.X < 0.0) throw ArgumentError("--X must be nonnegative");
    const PopulationLaw law = population_law(c.N, c.X);
    const MomentEstimate est = asymptotic_moments(c.N);
    json s;
    s["schema_version"] = kSchemaVersion;
    s["command"] = "population";
    s["N"] = c.N;
    s["X"] = c.X;
    s["log_Z"] = law.log_Z;
    s["mean_L"] = law.mean_L;
    s["var_L"] = law.var_L;
    s["asymptotic_mean"] = est.mean;
    s["asymptotic_var"] = est.var;
    Sink sink(c.output);
    if (c.format == "json") {
        json probs = json::object();
        for (auto it = law.sectors.rbegin(); it != law.sectors.rend(); ++it)
            probs["(" + std::to_string(it->L) + "," + std::to_string(it->M) + ")"] = it->prob;
        json j = s;
        j["probs"] = probs;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "L,M,prob\n";
    for (const auto& sec : law.sectors) sink.out() << sec.L << "," << sec.M << "," << fmt(sec.prob) << "\n";
    write_side_json(summary, s);
    return 0;
}

// ---------------------------------------------------------------- densities

int cmd_density(const Common& c, const std::string& grid_s, const std::string& family) {
    require_even(c.N);
    const Grid g = parse_grid(grid_s, "--grid");
    const KernelContext ctx = build_context(c.N, parse_kind(family), c.X);
    const auto rows = parallel_map<std::pair<double, double>>(g.points, c.worker_count(), [&](int i) {
        const double x = g.at(i);
        return std::make_pair(density(ctx, 1, x), density(ctx, 2, x));
    });
    Sink sink(c.output);
    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "density"}, {"N", c.N}, {"X", c.X}};
        json pts = json::array();
        for (int i = 0; i < g.points; ++i)
            pts.push_back({{"x", g.at(i)}, {"R10", rows[static_cast<std::size_t>(i)].first},
                           {"R01", rows[static_cast<std::size_t>(i)].second}});
        j["points"] = pts;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "x,R10,R01\n";
    for (int i = 0; i < g.points; ++i)
        sink.out() << fmt(g.at(i)) << "," << fmt(rows[static_cast<std::size_t>(i)].first) << ","
                   << fmt(rows[static_cast<std::size_t>(i)].second) << "\n";
    return 0;
}

int cmd_scaled_density(const Common& c, int species, const std::string& grid_s) {
    require_even(c.N);
    require_species(species);
    const Grid g = parse_grid(grid_s, "--grid");
    const KernelContext ctx = build_context(c.N, FamilyKind::capital, c.X);
    const auto vals = parallel_map<double>(g.points, c.worker_count(),
                                           [&](int i) { return scaled_density(ctx, species, g.at(i)); });
    const auto limit = [&](double x) { return species == 1 ? uniform_limit_density(x) : semicircle_limit_density(x); };
    const std::string col = species == 1 ? "s1" : "s2";
    const std::string lim = species == 1 ? "uniform_limit" : "semicircle_limit";
    Sink sink(c.output);
    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "scaled-density"}, {"N", c.N}, {"X", c.X},
               {"species", species}};
        json pts = json::array();
        for (int i = 0; i < g.points; ++i)
            pts.push_back({{"x", g.at(i)}, {col, vals[static_cast<std::size_t>(i)]}, {lim, limit(g.at(i))}});
        j["points"] = pts;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "x," << col << "," << lim << "\n";
    for (int i = 0; i < g.points; ++i)
        sink.out() << fmt(g.at(i)) << "," << fmt(vals[static_cast<std::size_t>(i)]) << "," << fmt(limit(g.at(i)))
                   << "\n";
    return 0;
}

// ---------------------------------------------------------------- kernel / correlation

int cmd_kernel(const Common& c, const std::string& grid_s, double y) {
    require_even(c.N);
    const Grid g = parse_grid(grid_s, "--grid");
    const KernelContext ctx = build_context(c.N, FamilyKind::capital, c.X);
    const std::vector<std::pair<Op, Op>> ops{{Op::id, Op::id},     {Op::id, Op::eps1}, {Op::eps1, Op::eps1},
                                             {Op::id, Op::eps2},   {Op::eps2, Op::eps2}, {Op::eps1, Op::eps2}};
    const std::vector<std::string> names{"kappa", "kappa_id_eps1", "kappa_eps1_eps1",
                                         "kappa_id_eps2", "kappa_eps2_eps2", "kappa_eps1_eps2"};
    const auto rows = parallel_map<std::vector<double>>(g.points, c.worker_count(), [&](int i) {
        std::vector<double> r;
        for (const auto& [l, rr] : ops) r.push_back(kappa_eps(ctx, g.at(i), y, l, rr));
        return r;
    });
    Sink sink(c.output);
    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "kernel"}, {"N", c.N}, {"X", c.X}, {"y", y}};
        json pts = json::array();
        for (int i = 0; i < g.points; ++i) {
            json p{{"x", g.at(i)}};
            for (std::size_t k = 0; k < names.size(); ++k) p[names[k]] = rows[static_cast<std::size_t>(i)][k];
            pts.push_back(p);
        }
        j["points"] = pts;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "x,y";
    for (const auto& n : names) sink.out() << "," << n;
    sink.out() << "\n";
    for (int i = 0; i < g.points; ++i) {
        sink.out() << fmt(g.at(i)) << "," << fmt(y);
        for (double v : rows[static_cast<std::size_t>(i)]) sink.out() << "," << fmt(v);
        sink.out() << "\n";
    }
    return 0;
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
    return s;
}

int cmd_correlation(const Common& c, const std::vector<double>& alpha, const std::vector<double>& beta,
                    bool oracle) {
    require_even(c.N);
    if (alpha.empty() && beta.empty()) throw ArgumentError("give at least one point via --alpha or --beta");
    if (oracle && c.N > kBruteForceMaxN) throw ArgumentError("--oracle needs N <= 4");
    const KernelContext ctx = build_context(c.N, FamilyKind::capital, c.X);
    const double value = correlation(ctx, alpha, beta);
    std::optional<double> direct;
    if (oracle) {
        const double Z = std::exp(log_partition_product(c.N, c.X));
        direct = brute_force_correlation(c.N, c.X, alpha, beta, Z);
    }
    Sink sink(c.output);
    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "correlation"}, {"N", c.N}, {"X", c.X},
               {"alpha", alpha}, {"beta", beta}, {"value", value}};
        if (direct) j["oracle"] = *direct;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "l,m,alpha,beta,value" << (oracle ? ",oracle" : "") << "\n";
    sink.out() << alpha.size() << "," << beta.size() << "," << join(alpha) << "," << join(beta) << "," << fmt(value);
    if (direct) sink.out() << "," << fmt(*direct);
    sink.out() << "\n";
    return 0;
}

// ---------------------------------------------------------------- fourier

int cmd_fourier(const Common& c, int species, const std::string& t_s) {
    require_even(c.N);
    require_species(species);
    const Grid g = parse_grid(t_s, "--t");
    if (std::max(std::abs(g.lo), std::abs(g.hi)) > kFourierMaxT)
        throw ArgumentError("--t values must satisfy |t| <= " + fmt(kFourierMaxT));
    const KernelContext ctx = build_context(c.N, FamilyKind::capital, c.X);
    const auto vals = parallel_map<double>(g.points, c.worker_count(),
                                           [&](int i) { return fourier_scaled_density(ctx, species, g.at(i)).re; });
    Sink sink(c.output);
    const auto limit = [&](double t) { return species == 1 ? limit_s1(t) : limit_s2(t); };
    if (c.format == "json") {
        json j{{"schema_version", kSchemaVersion}, {"command", "fourier"}, {"N", c.N}, {"X", c.X},
               {"species", species}};
        json pts = json::array();
        for (int i = 0; i < g.points; ++i) {
            const double v = vals[static_cast<std::size_t>(i)];
            pts.push_back({{"t", g.at(i)}, {"ft_value", v}, {"limit_value", limit(g.at(i))},
                           {"abs_error", std::abs(v - limit(g.at(i)))}});
        }
        j["points"] = pts;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "t,ft_value,limit_value,abs_error\n";
    for (int i = 0; i < g.points; ++i) {
        const double v = vals[static_cast<std::size_t>(i)];
        const double l = limit(g.at(i));
        sink.out() << fmt(g.at(i)) << "," << fmt(v) << "," << fmt(l) << "," << fmt(std::abs(v - l)) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- sample

int cmd_sample(const Common& c, const ChainConfig& cfg, const std::string& stats_path) {
    require_even(c.N);
    if (c.X != 1.0) throw ArgumentError("sample runs at X = 1 only");
    if (cfg.chain_count < 1 || cfg.steps < 1 || cfg.thinning < 1 || cfg.burn_in < 0 || cfg.proposal_scale < 0.0)
        throw ArgumentError("chains, steps and thinning must be positive; burn-in and scale nonnegative");
    const SamplerResult res = run_sampler(c.N, cfg);
    const KernelContext ctx = build_context(c.N);
    const PopulationLaw law = population_law(c.N);
    const double K = static_cast<double>(res.pooled.kept);

    struct Row {
        int species;
        double lo, hi;
        long count;
        double expected, emp, exact, z;
    };
    std::vector<Row> rows;
    for (int s = 1; s <= 2; ++s) {
        const Histogram& h = s == 1 ? res.pooled.charge1 : res.pooled.charge2;
        for (std::size_t b = 0; b < h.counts.size(); ++b) {
            const double lo = h.lo + static_cast<double>(b) * h.width();
            const double hi = lo + h.width();
            const double mass =
                integrate([&](double x) { return density(ctx, s, x); }, lo, hi, QuadratureSpec{}).value;
            const double expected = K * mass;
            const long count = h.counts[b];
            rows.push_back({s, lo, hi, count, expected, count / (K * h.width()), mass / h.width(),
                            expected > 0.0 ? (count - expected) / std::sqrt(expected) : 0.0});
        }
    }

    json stats{{"schema_version", kSchemaVersion}, {"command", "sample"}, {"N", c.N}, {"seed", cfg.seed},
               {"chains", cfg.chain_count}, {"steps", cfg.steps}, {"thinning", cfg.thinning},
               {"burn_in", cfg.burn_in}, {"kept", res.pooled.kept}};
    json pop = json::array();
    for (std::size_t i = 0; i < law.sectors.size(); ++i) {
        const double p = law.sectors[i].prob;
        const double e = K * p;
        const double sd = std::sqrt(K * p * (1.0 - p));
        pop.push_back({{"L", law.sectors[i].L}, {"M", law.sectors[i].M}, {"count", res.pooled.population[i]},
                       {"expected", e}, {"z", sd > 0.0 ? (res.pooled.population[i] - e) / sd : 0.0}});
    }
    stats["population"] = pop;
    const auto interval = [&](double sum, double sumsq, int s) {
        const double mean = sum / K;
        const double var = std::max(0.0, sumsq / K - mean * mean);
        const double exact = integrate([&](double x) { return density(ctx, s, x); }, -1.0, 1.0, QuadratureSpec{}).value;
        return json{{"mean", mean}, {"stderr", std::sqrt(var / K)}, {"exact", exact}};
    };
    stats["interval_counts"] = {{"charge1", interval(res.pooled.interval1_sum, res.pooled.interval1_sumsq, 1)},
                                {"charge2", interval(res.pooled.interval2_sum, res.pooled.interval2_sumsq, 2)}};
    json sectors = json::array();
    for (std::size_t ch = 0; ch < res.chains.size(); ++ch)
        for (const auto& d : res.chains[ch].sectors)
            sectors.push_back({{"chain", ch}, {"L", d.L}, {"M", d.M}, {"proposal_scale", d.proposal_scale},
                               {"acceptance", d.acceptance}});
    stats["acceptance"] = sectors;
    stats["warnings"] = res.pooled.warnings;
    for (const auto& w : res.pooled.warnings) std::cerr << "warning: " << w << "\n";

    Sink sink(c.output);
    if (c.format == "json") {
        json j = stats;
        json bins = json::array();
        for (const auto& r : rows)
            bins.push_back({{"species", r.species}, {"bin_lo", r.lo}, {"bin_hi", r.hi}, {"count", r.count},
                            {"expected_count", r.expected}, {"empirical_density", r.emp}, {"exact_density", r.exact},
                            {"z", r.z}});
        j["bins"] = bins;
        sink.out() << j.dump(2) << "\n";
        return 0;
    }
    sink.out() << "species,bin_lo,bin_hi,count,expected_count,empirical_density,exact_density,z\n";
    for (const auto& r : rows)
        sink.out() << r.species << "," << fmt(r.lo) << "," << fmt(r.hi) << "," << r.count << "," << fmt(r.expected)
                   << "," << fmt(r.emp) << "," << fmt(r.exact) << "," << fmt(r.z) << "\n";
    write_side_json(stats_path, stats);
    return 0;
}

// ---------------------------------------------------------------- verify

double tolerance_scale() {
    const char* env = std::getenv("TWOCHARGE_TOL");
    if (env == nullptr || *env == '\0') return 1.0;
    const std::string v = env;
    if (v == "strict") return 0.1;
    if (v == "default") return 1.0;
    if (v == "loose") return 10.0;
    try {
        std::size_t pos = 0;
        const double s = std::stod(v, &pos);
        if (pos == v.size() && s > 0.0 && std::isfinite(s)) return s;
    } catch (const std::exception&) {
    }
    throw ArgumentError("TWOCHARGE_TOL must be strict, default, loose or a positive number, got '" + v + "'");
}

class Report {
public:
    explicit Report(double scale) : scale_(scale) {}

    // |value - reference| <= tol * max(|reference|, floor).
    void rel(const std::string& suite, const std::string& name, double value, double reference, double tol,
             double floor = 0.0) {
        const double t = tol * scale_;
        const double err = std::abs(value - reference) / std::max(std::abs(reference), floor);
        add(suite, name, value, reference, err, t, err <= t);
    }
    void abs(const std::string& suite, const std::string& name, double value, double reference, double tol) {
        const double t = tol * scale_;
        const double err = std::abs(value - reference);
        add(suite, name, value, reference, err, t, err <= t);
    }
    // Statistical bands and asymptotic rates do not follow TWOCHARGE_TOL.
    void bound(const std::string& suite, const std::string& name, double value, double reference, double tol) {
        const double err = std::abs(value - reference);
        add(suite, name, value, reference, err, tol, err <= tol);
    }
    void holds(const std::string& suite, const std::string& name, bool ok, const std::string& detail) {
        checks_.push_back({{"suite", suite}, {"name", name}, {"detail", detail}, {"pass", ok}});
        failed_ += ok ? 0 : 1;
    }
    void error(const std::string& suite, const std::string& what) { holds(suite, "exception", false, what); }

    const json& checks() const { return checks_; }
    int failed() const { return failed_; }

private:
    void add(const std::string& suite, const std::string& name, double value, double reference, double err, double t,
             bool ok) {
        checks_.push_back({{"suite", suite}, {"name", name}, {"value", value}, {"reference", reference},
                           {"error", err}, {"tolerance", t}, {"pass", ok}});
        failed_ += ok ? 0 : 1;
    }
    double scale_;
    json checks_ = json::array();
    int failed_ = 0;
};

// Runs one suite, turning an escaped exception into a failed check.
void suite(Report& r, const std::string& name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        r.error(name, e.what());
    }
}

SkewMatrix random_skew(std::size_t n, Rng& rng) {
    SkewMatrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a.set(i, j, 2.0 * rng.uniform() - 1.0);
    return a;
}

void verify_partition(Report& r, bool quick) {
    suite(r, "partition", [&] {
        const double sqrt_pi = std::sqrt(kPi);
        for (double X : {0.0, 1.0, 2.0}) {
            const PartitionValues p = partition_function(2, X);
            const double bf = brute_force_Z(2, X).Z;
            const std::string tag = "N=2 X=" + fmt(X);
            r.rel("partition", tag + " product vs direct integral", p.product, bf, 1e-6);
            r.rel("partition", tag + " pfaffian vs direct integral", *p.pfaffian, bf, 1e-6);
        }
        r.rel("partition", "N=2 X=1 product vs 3 sqrt(pi)", partition_function(2, 1.0, false).product, 3.0 * sqrt_pi,
              1e-12);
        const PartitionValues p4 = partition_function(4, 1.0);
        r.rel("partition", "N=4 X=1 product vs 19 pi/2", p4.product, 19.0 * kPi / 2.0, 1e-12);
        r.rel("partition", "N=4 X=1 pfaffian vs product", *p4.pfaffian, p4.product, 1e-8);
        if (!quick) {
            const BruteForceZ bf = brute_force_Z(4, 1.0);
            r.rel("partition", "N=4 X=1 product vs direct integral", p4.product, bf.Z, 1e-3);
        }
        for (double X : {0.0, 2.0}) {
            const PartitionValues p = partition_function(8, X);
            r.rel("partition", "N=8 X=" + fmt(X) + " pfaffian vs product", *p.pfaffian, p.product, 1e-8);
        }
    });
    suite(r, "non_gaussian", [&] {
        const Weight w = Weight::quartic();
        for (double X : {0.0, 1.0, 2.0}) {
            const double pf = partition_pfaffian_monomial(2, X, w);
            const double bf = brute_force_Z(2, X, w).Z;
            r.rel("non_gaussian", "N=2 quartic weight X=" + fmt(X) + " pfaffian vs direct integral", pf, bf, 1e-6);
        }
    });
}

void verify_skew(Report& r) {
    suite(r, "skew_orthogonality", [&] {
        for (FamilyKind kind : {FamilyKind::capital, FamilyKind::monic})
            for (double X : {0.0, 1.0, 2.0}) {
                const SkewOPFamily fam = build_family(8, X, kind);
                const std::string tag = std::string(to_string(kind)) + " X=" + fmt(X);
                r.abs("skew_orthogonality", tag + " scaled Gram residual, 16 members", fam.max_residual(), 0.0, 1e-8);
                for (int j = 0; j < 8; ++j) {
                    const double closed = kind == FamilyKind::capital ? norm_capital(j, X) : norm_monic(j, X);
                    r.rel("skew_orthogonality", tag + " r_" + std::to_string(j) + " measured vs closed form",
                          fam.r_measured()[static_cast<std::size_t>(j)], closed, 1e-10);
                }
            }
        // Independent path: monomial-form members, quadrature with numeric epsilon1.
        for (double X : {0.0, 1.0, 2.0}) {
            double worst = 0.0;
            for (int a = 0; a < 6; ++a)
                for (int b = a + 1; b < 6; ++b) {
                    const double v = skew_inner_X(family_polynomial(a, X, FamilyKind::capital),
                                                  family_polynomial(b, X, FamilyKind::capital), X);
                    const double expected = (a % 2 == 0 && b == a + 1) ? norm_capital(a / 2, X) : 0.0;
                    worst = std::max(worst, std::abs(v - expected) / std::max(1.0, std::abs(expected)));
                }
            r.abs("skew_orthogonality", "capital X=" + fmt(X) + " monomial-form Gram residual, 6 members", worst, 0.0,
                  1e-8);
        }
    });
}

void verify_normalization(Report& r, json& table) {
    suite(r, "normalization", [&] {
        const double sqrt_pi = std::sqrt(kPi);
        const double cap = skew_inner_X(family_polynomial(0, 1.0, FamilyKind::capital),
                                        family_polynomial(1, 1.0, FamilyKind::capital), 1.0);
        const double mon = skew_inner_X(family_polynomial(0, 1.0, FamilyKind::monic),
                                        family_polynomial(1, 1.0, FamilyKind::monic), 1.0);
        r.rel("normalization", "capital <P0|P1> at X=1 vs 6 sqrt(pi)", cap, 6.0 * sqrt_pi, 1e-8);
        r.rel("normalization", "monic r_0 at X=1 vs 3 sqrt(pi)", mon, 3.0 * sqrt_pi, 1e-8);
        r.rel("normalization", "monic r_0 / alternative constant vs 0.5", mon / norm_monic_alternative(0, 1.0), 0.5,
              1e-6);
        const SkewOPFamily capital = build_family(6, 1.0, FamilyKind::capital);
        const SkewOPFamily monic = build_family(6, 1.0, FamilyKind::monic);
        for (int j = 0; j < 6; ++j) {
            const auto u = static_cast<std::size_t>(j);
            const double alternative = norm_monic_alternative(j, 1.0);
            table.push_back({{"j", j},
                             {"X", 1.0},
                             {"measured_capital", capital.r_measured()[u]},
                             {"closed_capital", norm_capital(j, 1.0)},
                             {"measured_monic", monic.r_measured()[u]},
                             {"closed_monic", norm_monic(j, 1.0)},
                             {"alternative_constant", alternative},
                             {"ratio_measured_monic_to_alternative", monic.r_measured()[u] / alternative}});
        }
    });
}

void verify_pfaffian(Report& r, bool quick) {
    suite(r, "pfaffian", [&] {
        Rng rng(2024, 0);
        const int count = quick ? 60 : 200;
        double worst_det = 0.0, worst_oracle = 0.0;
        for (int i = 0; i < count; ++i) {
            const std::size_t n = 2 + 2 * static_cast<std::size_t>(i % 6);
            const SkewMatrix a = random_skew(n, rng);
            const double pf = pfaffian(a);
            const double det = determinant(a.dense());
            worst_det = std::max(worst_det, std::abs(pf * pf - det) / std::abs(det));
            worst_oracle = std::max(worst_oracle, std::abs(pf - pfaffian_oracle(a)) / std::abs(pf));
        }
        r.abs("pfaffian", "Pf^2 vs det, max relative error over " + std::to_string(count) + " matrices", worst_det, 0.0,
              1e-9);
        r.abs("pfaffian", "fast vs expansion oracle, max relative error", worst_oracle, 0.0, 1e-10);
        double worst_sum = 0.0;
        for (int i = 0; i < 20; ++i) {
            const SkewMatrix a = random_skew(6, rng);
            const SkewMatrix b = random_skew(6, rng);
            const double lhs = pfaffian(a + b);
            worst_sum = std::max(worst_sum, std::abs(pfaffian_sum_expansion(a, b) - lhs) / std::abs(lhs));
        }
        r.abs("pfaffian", "sum-expansion identity on 20 pairs 6x6, max relative error", worst_sum, 0.0, 1e-10);
    });
    suite(r, "vandermonde", [&] {
        Rng rng(7, 0);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const int N = 2 + static_cast<int>(rng.uniform() * 9.0);
            const int M = static_cast<int>(rng.uniform() * (N / 2 + 1));
            std::vector<double> alpha, beta;
            for (int k = 0; k < N - 2 * M; ++k) alpha.push_back(4.0 * rng.uniform() - 2.0);
            for (int k = 0; k < M; ++k) beta.push_back(4.0 * rng.uniform() - 2.0);
            const Vandermonde v = confluent_vandermonde(alpha, beta);
            const double prod = confluent_vandermonde_product(alpha, beta);
            worst = std::max(worst, std::abs(v.det - prod) / std::abs(prod));
        }
        r.abs("vandermonde", "det vs product over 50 instances, max relative error", worst, 0.0, 1e-8);
    });
}

void verify_kernel(Report& r, bool quick) {
    suite(r, "kernel", [&] {
        struct Case {
            int N;
            double X;
        };
        std::vector<Case> cases{{2, 1.0}, {2, 2.0}};
        if (!quick) cases.push_back({4, 1.0});
        const std::vector<std::pair<std::vector<double>, std::vector<double>>> pts{
            {{0.3}, {}}, {{}, {-0.5}}, {{0.3, -0.8}, {}}, {{0.3}, {-0.5}}, {{}, {0.5, -0.2}}};
        for (const auto& c : cases) {
            const KernelContext ctx = build_context(c.N, FamilyKind::capital, c.X);
            const double Z = brute_force_Z(c.N, c.X).Z;
            for (const auto& [xs, ys] : pts) {
                const double k = correlation(ctx, xs, ys);
                const double o = brute_force_correlation(c.N, c.X, xs, ys, Z);
                r.rel("kernel",
                      "N=" + std::to_string(c.N) + " X=" + fmt(c.X) + " R_" + std::to_string(xs.size()) + "," +
                          std::to_string(ys.size()) + " at (" + join(xs) + "|" + join(ys) + ") vs direct integral",
                      k, o, 1e-4, 1e-6);
            }
        }
        const KernelContext skew = build_context(8);
        const KernelContext mono = build_context_monomial(8);
        for (double x : {-1.3, 0.0, 0.7, 2.1})
            for (int s : {1, 2})
                r.rel("kernel", "N=8 species " + std::to_string(s) + " density at " + fmt(x) + ": monomial vs skew-OP",
                      density(mono, s, x), density(skew, s, x), 1e-8);
        const Matrix& z = skew.zeta();
        const double r0 = skew.family()->r()[0];
        r.rel("kernel", "zeta(0,1) = 1/r_0", z(0, 1), 1.0 / r0, 1e-14);
        r.rel("kernel", "zeta(1,0) = -1/r_0", z(1, 0), -1.0 / r0, 1e-14);
    });
}

void verify_moments(Report& r, bool quick) {
    suite(r, "moments", [&] {
        std::vector<int> Ns{2, 4, 8};
        if (!quick) Ns.push_back(16);
        for (int N : Ns) {
            const KernelContext ctx = build_context(N);
            const PopulationLaw law = population_law(N);
            const QuadratureSpec spec = QuadratureSpec::for_degree(N);
            const double i1 = integrate_line([&](double x) { return density(ctx, 1, x); }, spec);
            const double i2 = integrate_line([&](double x) { return density(ctx, 2, x); }, spec);
            r.rel("moments", "N=" + std::to_string(N) + " int R10 vs E[L]", i1, law.mean_L, 1e-6);
            r.rel("moments", "N=" + std::to_string(N) + " int R01 vs E[M]", i2, (N - law.mean_L) / 2.0, 1e-6);
        }
        const KernelContext ctx = build_context(10);
        const PopulationLaw law = population_law(10);
        r.rel("moments", "N=10 species 1 transform at t=0 vs E[L]/sqrt(2N)", fourier_scaled_density(ctx, 1, 0.0).re,
              law.mean_L / std::sqrt(20.0), 1e-8);
        r.rel("moments", "N=10 species 2 transform at t=0 vs 2E[M]/N", fourier_scaled_density(ctx, 2, 0.0).re,
              (10.0 - law.mean_L) / 10.0, 1e-8);
    });
}

void verify_population(Report& r) {
    suite(r, "population", [&] {
        const PopulationLaw l2 = population_law(2);
        r.rel("population", "N=2 Prob(2,0)", l2.prob(2), 2.0 / 3.0, 1e-14);
        r.rel("population", "N=2 Prob(0,1)", l2.prob(0), 1.0 / 3.0, 1e-14);
        r.rel("population", "N=2 E[L]", l2.mean_L, 4.0 / 3.0, 1e-14);
        r.rel("population", "N=2 Var(L)", l2.var_L, 8.0 / 9.0, 1e-14);
        const PopulationLaw l4 = population_law(4);
        r.rel("population", "N=4 Prob(4,0)", l4.prob(4), 4.0 / 19.0, 1e-14);
        r.rel("population", "N=4 Prob(2,1)", l4.prob(2), 12.0 / 19.0, 1e-14);
        r.rel("population", "N=4 Prob(0,2)", l4.prob(0), 3.0 / 19.0, 1e-14);
        for (int N : {10, 100, 1000, 10000}) {
            const PopulationLaw law = population_law(N);
            double total = 0.0;
            for (const auto& s : law.sectors) total += s.prob;
            const std::string tag = "N=" + std::to_string(N);
            r.abs("population", tag + " total probability", total, 1.0, 1e-12);
            r.rel("population", tag + " closed-form mean vs pmf", law.mean_L, law.mean_L_pmf, 1e-10);
            r.rel("population", tag + " variance identity vs pmf", law.var_L, law.var_L_pmf, 1e-10);
        }
        for (int N : {2, 10, 40})
            for (double X : {0.0, 0.5, 1.0, 2.0}) {
                const PopulationLaw law = population_law(N);
                double gen = 0.0;
                for (const auto& s : law.sectors) gen += s.prob * std::pow(X, s.L);
                const int J = N / 2;
                const double ratio = laguerre(J, -0.5, -X * X) / laguerre(J, -0.5, -1.0);
                r.rel("population", "N=" + std::to_string(N) + " X=" + fmt(X) + " generating polynomial", gen, ratio,
                      1e-10);
            }
        // X d/dX log Z and (X d/dX)^2 log Z by Richardson-extrapolated central differences in log X.
        for (int N : {10, 40})
            for (double X : {0.5, 1.0, 2.0}) {
                const auto f = [&](double u) { return log_partition_product(N, std::exp(u)); };
                const double u = std::log(X);
                const auto d1 = [&](double h) { return (f(u + h) - f(u - h)) / (2.0 * h); };
                const auto d2 = [&](double h) { return (f(u + h) - 2.0 * f(u) + f(u - h)) / (h * h); };
                const double h = 1e-2;
                const double m1 = (4.0 * d1(h / 2) - d1(h)) / 3.0;
                const double m2 = (4.0 * d2(h / 2) - d2(h)) / 3.0;
                const PopulationLaw law = population_law(N, X);
                const std::string tag = "N=" + std::to_string(N) + " X=" + fmt(X);
                r.rel("population", tag + " derivative of log Z vs pmf mean", m1, law.mean_L_pmf, 1e-6);
                r.rel("population", tag + " second derivative of log Z vs pmf variance", m2, law.var_L_pmf, 1e-6);
            }
    });
    suite(r, "local_clt", [&] {
        std::vector<double> grid;
        for (int i = 0; i <= 8; ++i) grid.push_back(-3.0 + 0.75 * i);
        std::vector<double> sups;
        for (int N : {100, 1000, 10000}) {
            double sup = 0.0;
            for (const auto& p : local_clt_profile(N, grid)) sup = std::max(sup, std::abs(p.lattice_corrected - p.gaussian));
            sups.push_back(sup);
        }
        r.bound("local_clt", "N=10^4 sup |corrected pmf - phi|", sups[2], 0.0, 0.05);
        r.holds("local_clt", "sup error nonincreasing over N=10^2,10^3,10^4", sups[0] >= sups[1] && sups[1] >= sups[2],
                fmt(sups[0]) + " " + fmt(sups[1]) + " " + fmt(sups[2]));
    });
    suite(r, "tail_bound", [&] {
        for (int N : {100, 400, 1000}) {
            const PopulationLaw law = population_law(N);
            double prev = 2.0;
            bool monotone = true;
            for (double eps : {0.1, 0.25, 0.5, 1.0, 2.0}) {
                const TailCheck t = tail_bound_check(law, eps);
                monotone = monotone && t.lhs <= prev;
                prev = t.lhs;
            }
            r.holds("tail_bound", "N=" + std::to_string(N) + " tail mass nonincreasing in eps", monotone, "");
            // (1 + eps) sqrt(2N) > N once eps > sqrt(N/2) - 1.
            r.abs("tail_bound", "N=" + std::to_string(N) + " tail mass beyond the support",
                  tail_bound_check(law, std::sqrt(N / 2.0)).lhs, 0.0, 0.0);
        }
    });
}

void verify_sampler(Report& r, bool quick) {
    suite(r, "sampler", [&] {
        const PopulationLaw law = population_law(4);
        Rng rng(11, 0);
        const int draws = 100000;
        std::vector<long> counts(law.sectors.size(), 0);
        for (int i = 0; i < draws; ++i) counts[static_cast<std::size_t>(sample_population(law, rng).first / 2)] += 1;
        for (std::size_t i = 0; i < counts.size(); ++i) {
            const double p = law.sectors[i].prob;
            r.bound("sampler", "N=4 population draw frequency L=" + std::to_string(law.sectors[i].L), counts[i],
                    draws * p, 4.0 * std::sqrt(draws * p * (1.0 - p)));
        }
        if (quick) return;
        ChainConfig cfg;
        cfg.steps = 20000;
        const SamplerResult res = run_sampler(8, cfg);
        const KernelContext ctx = build_context(8);
        const double K = static_cast<double>(res.pooled.kept);
        for (int s : {1, 2}) {
            const Histogram& h = s == 1 ? res.pooled.charge1 : res.pooled.charge2;
            double worst = 0.0;
            for (std::size_t b = 0; b < h.counts.size(); ++b) {
                const double lo = h.lo + static_cast<double>(b) * h.width();
                const double e =
                    K * integrate([&](double x) { return density(ctx, s, x); }, lo, lo + h.width(), QuadratureSpec{})
                            .value;
                worst = std::max(worst, std::abs(h.counts[b] - e) / std::sqrt(std::max(e, 1.0)));
            }
            r.bound("sampler", "N=8 species " + std::to_string(s) + " histogram, max Poisson z-score", worst, 0.0, 4.0);
        }
    });
}

// Stated closed forms that disagree with measured values, with the form adopted.
json typo_ledger() {
    json ledger = json::array();
    const double sqrt_pi = std::sqrt(kPi);
    const auto entry = [&](const std::string& id, const std::string& stated, const json& stated_value,
                           const json& measured_value, const std::string& adopted) {
        ledger.push_back({{"id", id}, {"stated_formula", stated}, {"stated_value", stated_value},
                          {"measured_value", measured_value}, {"adopted", adopted}});
    };
    try {
        entry("monic_normalization_factor", "r_j = 4 (j+1)! Gamma(j+1/2)/j! L_{j+1}(-X^2)/L_j(-X^2)",
              norm_monic_alternative(0, 1.0),
              skew_inner_X(family_polynomial(0, 1.0, FamilyKind::monic), family_polynomial(1, 1.0, FamilyKind::monic),
                           1.0),
              "r_j = 2 (j+1)! Gamma(j+1/2) L_{j+1}(-X^2)/L_j(-X^2); values at j=0, X=1 (3 sqrt(pi) = " +
                  fmt(3.0 * sqrt_pi) + ")");

        const double x = 0.7;
        entry("odd_alternative_form_sign", "P_{2j+1}(x) = +4X^2 x sum_{k<j} ... + 2x(-1)^j ...",
              odd_alternative_form(1, 1.0, x, true), family_polynomial(3, 1.0, FamilyKind::capital)(x),
              "first term carries -4X^2; corrected form gives " + fmt(odd_alternative_form(1, 1.0, x, false)) +
                  " at j=1, X=1, x=0.7");

        const double lag = laguerre(2, 0.5, -1.0);
        entry("laguerre_contiguous_index", "L_k^a = L_k^{a+1} - L_{k-1}^a",
              laguerre(2, 1.5, -1.0) - laguerre(1, 0.5, -1.0), lag,
              "L_k^a = L_k^{a+1} - L_{k-1}^{a+1}; values at k=2, a=1/2, x=-1");

        // <H_{2m}, H_{2n+1}>_4 at m = n+1 with weight e^{-x^2}, n = 1.
        const double gse = integrate_line([](double t) {
            const double h4 = hermite_h(4, t), h3 = hermite_h(3, t);
            const double dh4 = 8.0 * hermite_h(3, t), dh3 = 6.0 * hermite_h(2, t);
            return std::exp(-t * t) * (h4 * dh3 - h3 * dh4);
        });
        entry("hermite_skew_norm_index", "<H_{2m}, H_{2n+1}>_4 = -h_{2n+1} at m = n+1",
              -std::exp(log_hermite_norm(3)), gse, "-h_{2n+2}; values at n=1");

        // The stated K^{1,1} correction sign flips the charge-1 eps-eps correction.
        const KernelContext ctx = build_context(4);
        const std::vector<double> xs{0.3, -0.8};
        Matrix m = correlation_matrix(ctx, xs, {});
        for (std::size_t p = 0; p < 2; ++p)
            for (std::size_t q = 0; q < 2; ++q) {
                const double s = (xs[q] > xs[p]) - (xs[q] < xs[p]);
                m(2 * p + 1, 2 * q + 1) += 2.0 * s;
            }
        entry("kernel_correction_sign", "K^{1,1} correction +1/4 sgn(y-x)", pfaffian(SkewMatrix(m, 1e-9)),
              correlation(ctx, xs, {}), "-1/4 sgn(y-x); R_{2,0} at N=4, x=(0.3,-0.8); direct integral agrees with the adopted value");

        const InverseResult inv = inverse_transpose(ctx.c_matrix());
        entry("zeta_block_sign", "zeta block [[0, -1/r], [1/r, 0]]", -1.0 / ctx.family()->r()[0], inv.value(0, 1),
              "zeta = C^{-T} = [[0, 1/r], [-1/r, 0]]; entry (0,1) at N=4");

        const PopulationLaw l4 = population_law(4, 1.0);
        entry("population_fraction_display", "Prob(L,M) displayed with the normalizing sum misplaced", nullptr,
              l4.prob(2),
              "Prob(L,M) = [2^L/(L!M!)] / sum 2^l/(l!m!); Prob(2,1) at N=4 is 12/19");

        const TailCheck tail = tail_bound_check(population_law(1000), 1.0);
        entry("population_tail_rate", "Prob(|L/sqrt(2N) - 1| >= eps) <= C N e^{-min(eps,1) sqrt(2N)}", tail.rhs,
              tail.lhs,
              "no fixed C works; the exact decay rate is about ((1+eps) log(1+eps) - eps) sqrt(2N). Values at N=1000, "
              "eps=1 with C=10");

        entry("kernel_argument_labels", "charge-2 blocks written with arguments (x_k, x_k')", nullptr, nullptr,
              "charge-2 arguments are the y positions; the R_{1,1} and R_{0,2} checks in suite 'kernel' confirm");
    } catch (const std::exception& e) {
        ledger.push_back({{"id", "error"}, {"detail", e.what()}});
    }
    return ledger;
}

// Asymptotic statements reported for information; they do not set the exit code.
json claims() {
    json out = json::array();
    try {
        json mean_rows = json::array();
        std::vector<double> mean_err, var_err;
        bool ok = true;
        for (int N : {100, 1000, 10000}) {
            const PopulationLaw law = population_law(N);
            const MomentEstimate est = asymptotic_moments(N);
            const double em = std::abs(law.mean_L - est.mean);
            const double ev = std::abs(law.var_L - est.var);
            mean_err.push_back(em);
            var_err.push_back(ev);
            ok = ok && em <= 5.0 / N && ev <= 5.0 / std::sqrt(static_cast<double>(N));
            mean_rows.push_back({{"N", N}, {"mean_exact", law.mean_L}, {"mean_estimate", est.mean},
                                 {"mean_error", em}, {"mean_bound", 5.0 / N}, {"var_exact", law.var_L},
                                 {"var_estimate", est.var}, {"var_error", ev},
                                 {"var_bound", 5.0 / std::sqrt(static_cast<double>(N))}});
        }
        ok = ok && mean_err[0] > mean_err[1] && mean_err[1] > mean_err[2] && var_err[0] > var_err[1] &&
             var_err[1] > var_err[2];
        out.push_back({{"claim", "population moment asymptotics"}, {"holds", ok}, {"rows", mean_rows}});

        json rows = json::array();
        bool ok9 = true;
        for (int s : {1, 2})
            for (double t : {0.5, 1.0, 2.0, 4.0}) {
                std::vector<double> errs;
                for (int N : {10, 30, 90}) {
                    const KernelContext ctx = build_context(N);
                    const double lim = s == 1 ? limit_s1(t) : limit_s2(t);
                    errs.push_back(std::abs(fourier_scaled_density(ctx, s, t).re - lim));
                }
                const bool row_ok = errs[0] > errs[1] && errs[1] > errs[2] && errs[2] <= 0.05;
                ok9 = ok9 && row_ok;
                rows.push_back({{"species", s}, {"t", t}, {"error_N10", errs[0]}, {"error_N30", errs[1]},
                                {"error_N90", errs[2]}, {"holds", row_ok}});
            }
        out.push_back({{"claim", "Fourier transforms of scaled densities near their limits"}, {"holds", ok9},
                       {"rows", rows}});

        json tail_rows = json::array();
        bool ok_tail = true;
        for (int N : {100, 400, 1000, 10000})
            for (double eps : {0.25, 0.5, 1.0}) {
                const TailCheck t = tail_bound_check(population_law(N), eps);
                ok_tail = ok_tail && t.holds();
                tail_rows.push_back({{"N", N}, {"eps", eps}, {"tail_mass", t.lhs}, {"bound_C10", t.rhs},
                                     {"fitted_C", t.fitted_C}, {"holds", t.holds()}});
            }
        out.push_back({{"claim", "population tail bound with C = 10"}, {"holds", ok_tail}, {"rows", tail_rows}});
    } catch (const std::exception& e) {
        out.push_back({{"claim", "error"}, {"detail", e.what()}});
    }
    return out;
}

int cmd_verify(bool quick, const std::string& output) {
    const double scale = tolerance_scale();
    Report r(scale);
    json table = json::array();
    verify_partition(r, quick);
    verify_skew(r);
    verify_normalization(r, table);
    verify_pfaffian(r, quick);
    verify_kernel(r, quick);
    verify_moments(r, quick);
    verify_population(r);
    verify_sampler(r, quick);
    json report{{"schema_version", kSchemaVersion},
                {"command", "verify"},
                {"quick", quick},
                {"tolerance_scale", scale},
                {"pass", r.failed() == 0},
                {"failed", r.failed()},
                {"checks", r.checks()},
                {"r_adjudication", table},
                {"typo_ledger", typo_ledger()},
                {"claims", claims()}};
    Sink sink(output);
    sink.out() << report.dump(2) << "\n";
    std::cerr << "verify: " << r.checks().size() << " checks, " << r.failed() << " failed\n";
    return r.failed() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and Monte Carlo computations for the two-charge ensemble on the line"};
    app.require_subcommand(1);

    Common pop_c, den_c, sden_c, ker_c, cor_c, fou_c, sam_c;
    std::string pop_summary, sam_stats, den_grid = "-6:6:241", sden_grid = "-2:2:401", ker_grid = "-4:4:81",
                                        fou_t = "0:6:61", den_family = "capital";
    int sden_species = 1, fou_species = 1;
    double ker_y = 0.0;
    std::vector<double> cor_alpha, cor_beta;
    bool cor_oracle = false, quick = false;
    std::string verify_output;
    ChainConfig cfg;

    auto* pop = app.add_subcommand("population", "exact law of (L, M)");
    add_common(pop, pop_c);
    pop->add_option("--summary", pop_summary, "JSON summary path (default stderr)");

    auto* den = app.add_subcommand("density", "one-point densities R10 and R01");
    add_common(den, den_c);
    den->add_option("--grid", den_grid, "min:max:points in the unscaled variable");
    den->add_option("--family", den_family, "capital or monic skew-orthogonal family");

    auto* sden = app.add_subcommand("scaled-density", "scaled densities s1 or s2 with their limits");
    add_common(sden, sden_c);
    sden->add_option("--species", sden_species, "1 or 2");
    sden->add_option("--grid", sden_grid, "min:max:points in the scaled variable");

    auto* ker = app.add_subcommand("kernel", "kernel seed kappa and its epsilon transforms");
    add_common(ker, ker_c);
    ker->add_option("--grid", ker_grid, "min:max:points for the first argument");
    ker->add_option("--y", ker_y, "second argument");

    auto* cor = app.add_subcommand("correlation", "correlation function R_{l,m}");
    add_common(cor, cor_c);
    cor->add_option("--alpha", cor_alpha, "charge-1 points, comma separated")->delimiter(',');
    cor->add_option("--beta", cor_beta, "charge-2 points, comma separated")->delimiter(',');
    cor->add_flag("--oracle", cor_oracle, "also evaluate the direct integral (N <= 4)");

    auto* fou = app.add_subcommand("fourier", "Fourier transform of a scaled density");
    add_common(fou, fou_c);
    fou->add_option("--species", fou_species, "1 or 2");
    fou->add_option("--t", fou_t, "min:max:points or a single t");

    auto* sam = app.add_subcommand("sample", "Metropolis sampler with exact population draws");
    add_common(sam, sam_c, false);
    sam->add_option("--chains", cfg.chain_count, "independent chains");
    sam->add_option("--steps", cfg.steps, "kept samples per chain");
    sam->add_option("--seed", cfg.seed, "64-bit seed");
    sam->add_option("--burn-in", cfg.burn_in, "adaptive burn-in sweeps per sector chain");
    sam->add_option("--thinning", cfg.thinning, "sweeps between kept samples");
    sam->add_option("--scale", cfg.proposal_scale, "initial proposal scale (default 0.5/sqrt(N))");
    sam->add_option("--stats", sam_stats, "JSON acceptance and population stats path (default stderr)");

    auto* ver = app.add_subcommand("verify", "invariant suites, normalization table and typo ledger");
    ver->add_flag("--quick", quick, "skip the slow direct integrals and the sampler run");
    ver->add_option("--output,-o", verify_output, "report path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*pop) return cmd_population(pop_c, pop_summary);
        if (*den) return cmd_density(den_c, den_grid, den_family);
        if (*sden) return cmd_scaled_density(sden_c, sden_species, sden_grid);
        if (*ker) return cmd_kernel(ker_c, ker_grid, ker_y);
        if (*cor) return cmd_correlation(cor_c, cor_alpha, cor_beta, cor_oracle);
        if (*fou) return cmd_fourier(fou_c, fou_species, fou_t);
        if (*sam) return cmd_sample(sam_c, cfg, sam_stats);
        if (*ver) return cmd_verify(quick, verify_output);
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
