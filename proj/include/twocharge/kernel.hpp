#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "twocharge/matrix.hpp"
#include "twocharge/quadrature.hpp"
#include "twocharge/skewpoly.hpp"

namespace twocharge {

// Operator applied to one argument of kappa: identity, epsilon1, or d/dx.
enum class Op { id, eps1, eps2 };

// Values of every basis function at one point under the three operators.
struct PointData {
    double x = 0.0;
    std::vector<double> f;
    std::vector<double> eps1;
    std::vector<double> eps2;

    const std::vector<double>& under(Op op) const;
};

class KernelContext {
public:
    int N() const { return N_; }
    double X() const { return X_; }
    bool skew_path() const { return family_.has_value(); }
    const std::optional<SkewOPFamily>& family() const { return family_; }
    const std::vector<PsiSeries>& basis() const { return basis_; }
    // C = X^2 A + B over the basis and zeta = C^{-T}.
    const Matrix& c_matrix() const { return c_; }
    const Matrix& zeta() const { return zeta_; }
    // ||C^T zeta - I||_inf.
    double zeta_residual() const { return zeta_residual_; }

    PointData at(double x) const;
    // sum_{j,k} u_j zeta_{jk} v_k
    double contract(const std::vector<double>& u, const std::vector<double>& v) const;

private:
    friend KernelContext build_context(int N, FamilyKind kind, double X);
    friend KernelContext build_context_monomial(int N, double X, const QuadratureSpec& spec);
    void finish();

    int N_ = 0;
    double X_ = 1.0;
    std::optional<SkewOPFamily> family_;
    std::vector<PsiSeries> basis_;
    Matrix coeffs_;  // N x ncoef, row n = psi coefficients of basis n
    Matrix c_;
    Matrix zeta_;
    std::vector<double> inv_r_;  // skew path: 1/r_j
    double zeta_residual_ = 0.0;
};

inline constexpr int kDenseKernelMaxN = 128;
inline constexpr int kMonomialKernelMaxN = 16;

// Skew-OP path: zeta is block diagonal with blocks [[0, 1/r_j], [-1/r_j, 0]].
KernelContext build_context(int N, FamilyKind kind = FamilyKind::capital, double X = 1.0);
// Monomial basis x^n e^{-x^2/2}; C assembled by quadrature and inverted.
KernelContext build_context_monomial(int N, double X = 1.0, const QuadratureSpec& spec = {});

double kappa(const KernelContext& ctx, double x, double y);
double kappa_eps(const KernelContext& ctx, double x, double y, Op left, Op right);

// Block matrix fed to the Pfaffian. Charge-1 epsilon slots carry the factor 2X^2,
// so R = Pf of this matrix. Both triangles are computed independently.
Matrix correlation_matrix(const KernelContext& ctx, const std::vector<double>& xs,
                          const std::vector<double>& ys);

// R_{l,m}(xs; ys). Negative values above -1e-9 * scale are clipped to 0 and counted.
double correlation(const KernelContext& ctx, const std::vector<double>& xs, const std::vector<double>& ys);
std::uint64_t clipped_correlation_count();

double density_charge1(const KernelContext& ctx, double x);
double density_charge2(const KernelContext& ctx, double x);
double density(const KernelContext& ctx, int species, double x);

// s1(x) = R_{1,0}(sqrt(N) x)/sqrt(2); s2(x) = (2/sqrt(N)) R_{0,1}(sqrt(N) x).
double scaled_density(const KernelContext& ctx, int species, double x);

}  // namespace twocharge
