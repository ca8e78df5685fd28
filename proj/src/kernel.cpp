#include "twocharge/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <string>

#include "twocharge/pfaffian.hpp"

namespace twocharge {

namespace {

std::atomic<std::uint64_t> g_clipped{0};

constexpr double kClipRel = 1e-9;
constexpr double kAntisymTol = 1e-9;

void check_N(int N) {
    if (N < 2 || N % 2 != 0) throw std::domain_error("kernel: N must be a positive even integer");
    if (N > kDenseKernelMaxN)
        throw std::domain_error("kernel: N above the dense limit " + std::to_string(kDenseKernelMaxN));
}

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

const std::vector<double>& PointData::under(Op op) const {
    switch (op) {
        case Op::id: return f;
        case Op::eps1: return eps1;
        case Op::eps2: return eps2;
    }
    return f;
}

void KernelContext::finish() {
    std::size_t ncoef = 0;
    for (const auto& b : basis_) ncoef = std::max(ncoef, b.size());
    coeffs_ = Matrix(basis_.size(), ncoef);
    for (std::size_t n = 0; n < basis_.size(); ++n)
        for (std::size_t m = 0; m < basis_[n].size(); ++m) coeffs_(n, m) = basis_[n].coeff(m);
    const Matrix check = c_.transpose() * zeta_ - Matrix::identity(c_.rows());
    zeta_residual_ = check.norm_inf();
}

PointData KernelContext::at(double x) const {
    const int nmax = static_cast<int>(coeffs_.cols()) - 1;
    const BasisValues b = psi_basis_values(nmax, x);
    PointData p;
    p.x = x;
    const std::size_t n = coeffs_.rows();
    p.f.assign(n, 0.0);
    p.eps1.assign(n, 0.0);
    p.eps2.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double sf = 0.0, se = 0.0, sd = 0.0;
        for (std::size_t m = 0; m < coeffs_.cols(); ++m) {
            const double c = coeffs_(i, m);
            if (c == 0.0) continue;
            sf += c * b.psi[m];
            se += c * b.eps1[m];
            sd += c * b.deriv[m];
        }
        p.f[i] = sf;
        p.eps1[i] = se;
        p.eps2[i] = sd;
    }
    return p;
}

double KernelContext::contract(const std::vector<double>& u, const std::vector<double>& v) const {
    if (!inv_r_.empty()) {
        double s = 0.0;
        for (std::size_t j = 0; j < inv_r_.size(); ++j)
            s += (u[2 * j] * v[2 * j + 1] - u[2 * j + 1] * v[2 * j]) * inv_r_[j];
        return s;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < zeta_.rows(); ++j) {
        if (u[j] == 0.0) continue;
        double row = 0.0;
        for (std::size_t k = 0; k < zeta_.cols(); ++k) row += zeta_(j, k) * v[k];
        s += u[j] * row;
    }
    return s;
}

KernelContext build_context(int N, FamilyKind kind, double X) {
    check_N(N);
    KernelContext ctx;
    ctx.N_ = N;
    ctx.X_ = X;
    ctx.family_ = build_family(N / 2, X, kind);
    ctx.basis_ = ctx.family_->members();
    ctx.c_ = Matrix(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    ctx.zeta_ = Matrix(static_cast<std::size_t>(N), static_cast<std::size_t>(N));
    for (int j = 0; j < N / 2; ++j) {
        const double r = ctx.family_->r()[static_cast<std::size_t>(j)];
        const auto e = static_cast<std::size_t>(2 * j);
        ctx.c_(e, e + 1) = r;
        ctx.c_(e + 1, e) = -r;
        ctx.zeta_(e, e + 1) = 1.0 / r;
        ctx.zeta_(e + 1, e) = -1.0 / r;
        ctx.inv_r_.push_back(1.0 / r);
    }
    ctx.finish();
    return ctx;
}

KernelContext build_context_monomial(int N, double X, const QuadratureSpec& spec) {
    check_N(N);
    if (N > kMonomialKernelMaxN)
        throw std::domain_error("build_context_monomial: N=" + std::to_string(N) +
                                " is beyond the monomial path; use the skew-OP path");
    KernelContext ctx;
    ctx.N_ = N;
    ctx.X_ = X;
    for (int n = 0; n < N; ++n) {
        std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
        p.back() = 1.0;
        ctx.basis_.push_back(PsiSeries::from_monomial(p));
    }
    const auto n = static_cast<std::size_t>(N);
    ctx.c_ = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            const double v = skew_inner_X_measured(ctx.basis_[j], ctx.basis_[k], X, spec);
            ctx.c_(j, k) = v;
            ctx.c_(k, j) = -v;
        }
    try {
        ctx.zeta_ = inverse_transpose(ctx.c_).value;
    } catch (const IllConditioned& e) {
        throw IllConditioned(std::string(e.what()) + "; the monomial Gram is too ill-conditioned, use the skew-OP path",
                             e.condition());
    }
    ctx.finish();
    return ctx;
}

double kappa(const KernelContext& ctx, double x, double y) { return kappa_eps(ctx, x, y, Op::id, Op::id); }

double kappa_eps(const KernelContext& ctx, double x, double y, Op left, Op right) {
    const PointData px = ctx.at(x);
    const PointData py = ctx.at(y);
    return ctx.contract(px.under(left), py.under(right));
}

Matrix correlation_matrix(const KernelContext& ctx, const std::vector<double>& xs, const std::vector<double>& ys) {
    struct Pt {
        PointData data;
        int species;
    };
    std::vector<Pt> pts;
    for (double x : xs) pts.push_back({ctx.at(x), 1});
    for (double y : ys) pts.push_back({ctx.at(y), 2});
    const double X2 = ctx.X() * ctx.X();
    const double s1 = 2.0 * X2;  // charge-1 epsilon slot factor
    const std::size_t n = pts.size();
    Matrix m(2 * n, 2 * n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const Op lo = a == 0 ? Op::id : (pts[p].species == 1 ? Op::eps1 : Op::eps2);
                    const Op ro = b == 0 ? Op::id : (pts[q].species == 1 ? Op::eps1 : Op::eps2);
                    double v = ctx.contract(pts[p].data.under(lo), pts[q].data.under(ro));
                    if (lo == Op::eps1) v *= s1;
                    if (ro == Op::eps1) v *= s1;
                    if (a == 1 && b == 1 && pts[p].species == 1 && pts[q].species == 1)
                        v -= X2 * sgn(pts[q].data.x - pts[p].data.x);
                    m(2 * p + static_cast<std::size_t>(a), 2 * q + static_cast<std::size_t>(b)) = v;
                }
            }
        }
    }
    return m;
}

double correlation(const KernelContext& ctx, const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.empty() && ys.empty()) throw std::domain_error("correlation: need at least one point");
    const Matrix m = correlation_matrix(ctx, xs, ys);
    double scale = 1.0;
    for (std::size_t p = 0; p < m.rows() / 2; ++p) scale *= std::abs(m(2 * p, 2 * p + 1));
    const double tol = kAntisymTol * std::max(1.0, m.norm_inf());
    const double value = pfaffian(SkewMatrix(m, tol));
    if (value >= 0.0) return value;
    if (value >= -kClipRel * std::max(scale, 1e-300)) {
        g_clipped.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    throw std::runtime_error("correlation: negative value " + std::to_string(value) + " beyond clip threshold");
}

std::uint64_t clipped_correlation_count() { return g_clipped.load(std::memory_order_relaxed); }

double density_charge1(const KernelContext& ctx, double x) {
    const PointData p = ctx.at(x);
    return 2.0 * ctx.X() * ctx.X() * ctx.contract(p.f, p.eps1);
}

double density_charge2(const KernelContext& ctx, double x) {
    const PointData p = ctx.at(x);
    return ctx.contract(p.f, p.eps2);
}

double density(const KernelContext& ctx, int species, double x) {
    if (species == 1) return density_charge1(ctx, x);
    if (species == 2) return density_charge2(ctx, x);
    throw std::domain_error("density: species must be 1 or 2");
}

double scaled_density(const KernelContext& ctx, int species, double x) {
    const double rn = std::sqrt(static_cast<double>(ctx.N()));
    if (species == 1) return density_charge1(ctx, rn * x) / std::sqrt(2.0);
    if (species == 2) return 2.0 / rn * density_charge2(ctx, rn * x);
    throw std::domain_error("scaled_density: species must be 1 or 2");
}

}  // namespace twocharge
