#pragma once

#include <stdexcept>
#include <vector>

#include "twocharge/matrix.hpp"

namespace twocharge {

// Dense antisymmetric matrix. Construction from a dense matrix rejects
// anything that is not antisymmetric within the given tolerance.
class SkewMatrix {
public:
    SkewMatrix() = default;
    explicit SkewMatrix(std::size_t n) : m_(n, n) {}
    explicit SkewMatrix(const Matrix& dense, double tol = 0.0);

    // Upper-triangle entries a_{01}, a_{02}, ..., a_{0,n-1}, a_{12}, ... row by row.
    static SkewMatrix from_upper(std::size_t n, const std::vector<double>& upper);

    std::size_t size() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    void set(std::size_t i, std::size_t j, double v);

    const Matrix& dense() const { return m_; }
    SkewMatrix submatrix(const std::vector<int>& idx) const;

    SkewMatrix operator+(const SkewMatrix& other) const;
    SkewMatrix operator*(double s) const;

private:
    Matrix m_;
};

// Strictly increasing subset of {0..n-1}.
class IndexSubset {
public:
    IndexSubset(int n, std::vector<int> indices);
    static IndexSubset from_mask(int n, unsigned mask);

    int n() const { return n_; }
    int size() const { return static_cast<int>(idx_.size()); }
    const std::vector<int>& indices() const { return idx_; }
    IndexSubset complement() const;
    // Sign of the permutation (t, t') that lists the subset first, then its complement.
    int sign() const;

private:
    int n_;
    std::vector<int> idx_;
};

enum class OddPolicy { reject, zero };

// Parlett-Reid style skew elimination with partial pivoting, O(n^3).
double pfaffian(const SkewMatrix& a, OddPolicy odd = OddPolicy::reject);

inline constexpr std::size_t kPfaffianOracleMax = 12;
inline constexpr std::size_t kMatchingOracleMax = 8;
// First-row expansion; test oracle only.
double pfaffian_oracle(const SkewMatrix& a);
// Signed sum over perfect matchings; second test oracle.
double pfaffian_matching_sum(const SkewMatrix& a);

inline constexpr std::size_t kSumExpansionMax = 10;
// sum over even subsets t of sgn(t) Pf(A_tt) Pf(B_t't').
double pfaffian_sum_expansion(const SkewMatrix& a, const SkewMatrix& b);

double determinant(const Matrix& a);

class IllConditioned : public std::runtime_error {
public:
    IllConditioned(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

inline constexpr double kConditionLimit = 1e12;

struct InverseResult {
    Matrix value;
    double condition = 0.0;  // infinity-norm condition number
};

// Returns C^{-T}. Throws IllConditioned past kConditionLimit.
InverseResult inverse_transpose(const Matrix& c);

struct Vandermonde {
    Matrix matrix;
    double det = 0.0;
};

// Rows are powers 0..N-1; columns are the alpha values, then (beta, d/dbeta) pairs.
Vandermonde confluent_vandermonde(const std::vector<double>& alpha, const std::vector<double>& beta);
double confluent_vandermonde_product(const std::vector<double>& alpha, const std::vector<double>& beta);

}  // namespace twocharge
