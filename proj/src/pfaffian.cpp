#include "twocharge/pfaffian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace twocharge {

SkewMatrix::SkewMatrix(const Matrix& dense, double tol) : m_(dense) {
    if (!dense.square()) throw std::invalid_argument("SkewMatrix: matrix is not square");
    const std::size_t n = dense.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(dense(i, i)) > tol)
            throw std::invalid_argument("SkewMatrix: nonzero diagonal entry");
        m_(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(dense(i, j) + dense(j, i)) > tol)
                throw std::invalid_argument("SkewMatrix: entries (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") are not antisymmetric");
            const double v = 0.5 * (dense(i, j) - dense(j, i));
            m_(i, j) = v;
            m_(j, i) = -v;
        }
    }
}

SkewMatrix SkewMatrix::from_upper(std::size_t n, const std::vector<double>& upper) {
    if (upper.size() != n * (n - (n > 0 ? 1 : 0)) / 2)
        throw std::invalid_argument("SkewMatrix::from_upper: wrong number of entries");
    SkewMatrix s(n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s.set(i, j, upper[k++]);
    return s;
}

void SkewMatrix::set(std::size_t i, std::size_t j, double v) {
    if (i == j) {
        if (v != 0.0) throw std::invalid_argument("SkewMatrix::set: diagonal must be zero");
        return;
    }
    m_(i, j) = v;
    m_(j, i) = -v;
}

SkewMatrix SkewMatrix::submatrix(const std::vector<int>& idx) const {
    SkewMatrix s(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
            s.set(a, b, m_(static_cast<std::size_t>(idx[a]), static_cast<std::size_t>(idx[b])));
    return s;
}

SkewMatrix SkewMatrix::operator+(const SkewMatrix& other) const {
    if (size() != other.size()) throw std::invalid_argument("SkewMatrix: size mismatch");
    SkewMatrix s(*this);
    s.m_ += other.m_;
    return s;
}

SkewMatrix SkewMatrix::operator*(double scale) const {
    SkewMatrix s(*this);
    s.m_ *= scale;
    return s;
}

IndexSubset::IndexSubset(int n, std::vector<int> indices) : n_(n), idx_(std::move(indices)) {
    for (std::size_t i = 0; i < idx_.size(); ++i) {
        if (idx_[i] < 0 || idx_[i] >= n_) throw std::out_of_range("IndexSubset: index out of range");
        if (i > 0 && idx_[i] <= idx_[i - 1])
            throw std::invalid_argument("IndexSubset: indices must be strictly increasing");
    }
}

IndexSubset IndexSubset::from_mask(int n, unsigned mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) idx.push_back(i);
    return IndexSubset(n, std::move(idx));
}

IndexSubset IndexSubset::complement() const {
    std::vector<int> out;
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i) {
        if (k < idx_.size() && idx_[k] == i) {
            ++k;
            continue;
        }
        out.push_back(i);
    }
    return IndexSubset(n_, std::move(out));
}

int IndexSubset::sign() const {
    // Each t_i is preceded by (t_i - i) complement indices, one inversion each.
    long long inv = 0;
    for (std::size_t i = 0; i < idx_.size(); ++i) inv += idx_[i] - static_cast<int>(i);
    return inv % 2 == 0 ? 1 : -1;
}

double pfaffian(const SkewMatrix& skew, OddPolicy odd) {
    const std::size_t n = skew.size();
    if (n % 2 == 1) {
        if (odd == OddPolicy::zero) return 0.0;
        throw std::domain_error("pfaffian: odd dimension " + std::to_string(n));
    }
    if (n == 0) return 1.0;
    Matrix a = skew.dense();
    double pf = 1.0;
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        std::size_t kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (std::size_t i = k + 2; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                kp = i;
            }
        }
        if (kp != k + 1) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k + 1, j), a(kp, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, kp));
            pf = -pf;
        }
        if (a(k + 1, k) == 0.0) return 0.0;
        const double pivot = a(k, k + 1);
        pf *= pivot;
        if (k + 2 < n) {
            // A[k+2:,k+2:] += tau u^T - u tau^T, tau = A[k,k+2:]/pivot, u = A[k+2:,k+1].
            for (std::size_t i = k + 2; i < n; ++i) {
                const double tau_i = a(k, i) / pivot;
                const double u_i = a(i, k + 1);
                for (std::size_t j = k + 2; j < n; ++j) {
                    const double tau_j = a(k, j) / pivot;
                    const double u_j = a(j, k + 1);
                    a(i, j) += tau_i * u_j - u_i * tau_j;
                }
            }
        }
    }
    return pf;
}

namespace {

double oracle_rec(const SkewMatrix& a, std::vector<int>& live) {
    if (live.empty()) return 1.0;
    const int first = live.front();
    double total = 0.0;
    for (std::size_t j = 1; j < live.size(); ++j) {
        const double aij = a(static_cast<std::size_t>(first), static_cast<std::size_t>(live[j]));
        if (aij == 0.0) continue;
        std::vector<int> rest;
        rest.reserve(live.size() - 2);
        for (std::size_t k = 1; k < live.size(); ++k)
            if (k != j) rest.push_back(live[k]);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        total += sign * aij * oracle_rec(a, rest);
    }
    return total;
}

int permutation_sign(const std::vector<int>& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return inv % 2 == 0 ? 1 : -1;
}

void matchings_rec(const SkewMatrix& a, std::vector<int>& unused, std::vector<int>& perm,
                   double prod, double& total) {
    if (unused.empty()) {
        total += permutation_sign(perm) * prod;
        return;
    }
    const int i = unused.front();
    for (std::size_t k = 1; k < unused.size(); ++k) {
        const int j = unused[k];
        std::vector<int> rest;
        for (std::size_t m = 1; m < unused.size(); ++m)
            if (m != k) rest.push_back(unused[m]);
        perm.push_back(i);
        perm.push_back(j);
        matchings_rec(a, rest, perm, prod * a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)),
                      total);
        perm.pop_back();
        perm.pop_back();
    }
}

}  // namespace

double pfaffian_oracle(const SkewMatrix& a) {
    const std::size_t n = a.size();
    if (n > kPfaffianOracleMax)
        throw std::domain_error("pfaffian_oracle: dimension above " + std::to_string(kPfaffianOracleMax));
    if (n % 2 == 1) throw std::domain_error("pfaffian_oracle: odd dimension");
    std::vector<int> live(n);
    for (std::size_t i = 0; i < n; ++i) live[i] = static_cast<int>(i);
    return oracle_rec(a, live);
}

double pfaffian_matching_sum(const SkewMatrix& a) {
    const std::size_t n = a.size();
    if (n > kMatchingOracleMax)
        throw std::domain_error("pfaffian_matching_sum: dimension above " +
                                std::to_string(kMatchingOracleMax));
    if (n % 2 == 1) throw std::domain_error("pfaffian_matching_sum: odd dimension");
    std::vector<int> unused(n);
    for (std::size_t i = 0; i < n; ++i) unused[i] = static_cast<int>(i);
    std::vector<int> perm;
    double total = 0.0;
    matchings_rec(a, unused, perm, 1.0, total);
    return total;
}

double pfaffian_sum_expansion(const SkewMatrix& a, const SkewMatrix& b) {
    if (a.size() != b.size()) throw std::invalid_argument("pfaffian_sum_expansion: dimension mismatch");
    const std::size_t n = a.size();
    if (n > kSumExpansionMax || n % 2 == 1)
        throw std::domain_error("pfaffian_sum_expansion: need even dimension <= 10");
    const int ni = static_cast<int>(n);
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << ni); ++mask) {
        const IndexSubset t = IndexSubset::from_mask(ni, mask);
        if (t.size() % 2 == 1) continue;
        const IndexSubset tc = t.complement();
        total += t.sign() * pfaffian(a.submatrix(t.indices())) * pfaffian(b.submatrix(tc.indices()));
    }
    return total;
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<std::size_t> perm;
    int sign = 1;
    bool singular = false;
};

Lu lu_decompose(const Matrix& a) {
    if (!a.square()) throw std::invalid_argument("LU: matrix is not square");
    const std::size_t n = a.rows();
    Lu out{a, std::vector<std::size_t>(n), 1, false};
    for (std::size_t i = 0; i < n; ++i) out.perm[i] = i;
    Matrix& m = out.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > std::abs(m(p, k))) p = i;
        if (m(p, k) == 0.0) {
            out.singular = true;
            continue;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(out.perm[k], out.perm[p]);
            out.sign = -out.sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            m(i, k) = f;
            if (f == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return out;
}

}  // namespace

double determinant(const Matrix& a) {
    const Lu lu = lu_decompose(a);
    if (lu.singular) return 0.0;
    double det = lu.sign;
    for (std::size_t i = 0; i < a.rows(); ++i) det *= lu.lu(i, i);
    return det;
}

InverseResult inverse_transpose(const Matrix& c) {
    const Lu lu = lu_decompose(c);
    if (lu.singular)
        throw IllConditioned("inverse_transpose: matrix is singular",
                             std::numeric_limits<double>::infinity());
    const std::size_t n = c.rows();
    Matrix inv(n, n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = lu.perm[i] == j ? 1.0 : 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < i; ++k) col[i] -= lu.lu(i, k) * col[k];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t k = i + 1; k < n; ++k) col[i] -= lu.lu(i, k) * col[k];
            col[i] /= lu.lu(i, i);
        }
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    const double cond = c.norm_inf() * inv.norm_inf();
    if (!(cond <= kConditionLimit))
        throw IllConditioned("inverse_transpose: condition estimate " + std::to_string(cond) +
                                 " exceeds limit",
                             cond);
    return {inv.transpose(), cond};
}

Vandermonde confluent_vandermonde(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const std::size_t n = alpha.size() + 2 * beta.size();
    if (n == 0) throw std::invalid_argument("confluent_vandermonde: no particles");
    Matrix v(n, n);
    for (std::size_t c = 0; c < alpha.size(); ++c) {
        double p = 1.0;
        for (std::size_t r = 0; r < n; ++r, p *= alpha[c]) v(r, c) = p;
    }
    for (std::size_t m = 0; m < beta.size(); ++m) {
        const std::size_t c = alpha.size() + 2 * m;
        double p = 1.0;  // beta^r
        double pm1 = 0.0;  // beta^{r-1}
        for (std::size_t r = 0; r < n; ++r) {
            v(r, c) = p;
            v(r, c + 1) = static_cast<double>(r) * pm1;
            pm1 = p;
            p *= beta[m];
        }
    }
    return {v, determinant(v)};
}

double confluent_vandermonde_product(const std::vector<double>& alpha, const std::vector<double>& beta) {
    double prod = 1.0;
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (std::size_t k = j + 1; k < alpha.size(); ++k) prod *= alpha[k] - alpha[j];
    for (std::size_t m = 0; m < beta.size(); ++m)
        for (std::size_t k = m + 1; k < beta.size(); ++k) prod *= std::pow(beta[m] - beta[k], 4);
    for (double a : alpha)
        for (double b : beta) prod *= (a - b) * (a - b);
    return prod;
}

}  // namespace twocharge
