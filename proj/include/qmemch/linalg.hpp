#pragma once

// Small dense complex linear algebra: enough for one- and two-qubit
// operators and their 16x16 superoperators. Storage is row-major.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "qmemch/errors.hpp"

namespace qmemch {

using Complex = std::complex<double>;

// Fixed tolerances shared by every module.
inline constexpr double kResidualTol = 1e-10;
inline constexpr double kPivotTol = 1e-12;
inline constexpr double kJacobiOffDiagTol = 1e-14;
inline constexpr int kJacobiMaxSweeps = 100;

class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex{0.0, 0.0}) {}

    // Row-by-row literal; all rows must have equal length.
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& row : rows) {
            if (row.size() != cols_) {
                throw DimensionError("ragged matrix literal");
            }
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static ComplexMatrix diagonal(std::initializer_list<Complex> entries) {
        ComplexMatrix m(entries.size(), entries.size());
        std::size_t i = 0;
        for (const auto& e : entries) {
            m(i, i) = e;
            ++i;
        }
        return m;
    }

    // |ket><bra| for computational-basis indices.
    static ComplexMatrix basis_projector(std::size_t dim, std::size_t ket, std::size_t bra) {
        ComplexMatrix m(dim, dim);
        m(ket, bra) = 1.0;
        return m;
    }

    // Column vector |v><v| outer product helper input: column matrix.
    static ComplexMatrix column(std::initializer_list<Complex> entries) {
        ComplexMatrix m(entries.size(), 1);
        std::copy(entries.begin(), entries.end(), m.data_.begin());
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const noexcept { return data_; }
    std::vector<Complex>& entries() noexcept { return data_; }

    ComplexMatrix& operator+=(const ComplexMatrix& other) {
        require_same_shape(*this, other, "add");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& other) {
        require_same_shape(*this, other, "subtract");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
        return *this;
    }

    ComplexMatrix& operator*=(Complex c) {
        for (auto& e : data_) e *= c;
        return *this;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

    static void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
            throw DimensionError(std::string(op) + ": shape mismatch " + a.shape() + " vs " +
                                 b.shape());
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

inline ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out += b;
    return out;
}

inline ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out = a;
    out -= b;
    return out;
}

inline ComplexMatrix scale(Complex c, const ComplexMatrix& a) {
    ComplexMatrix out = a;
    out *= c;
    return out;
}

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: shape mismatch " + a.shape() + " vs " + b.shape());
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }
inline ComplexMatrix operator*(Complex c, ComplexMatrix a) { return a *= c; }

inline ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = std::conj(a(i, j));
    return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

inline ComplexMatrix conjugate(const ComplexMatrix& a) {
    ComplexMatrix out = a;
    for (auto& e : out.entries()) e = std::conj(e);
    return out;
}

inline Complex trace(const ComplexMatrix& a) {
    if (!a.is_square()) throw DimensionError("trace: matrix is not square (" + a.shape() + ")");
    Complex t{};
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// Block (i,j) of the result is a(i,j) * b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

inline double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const auto& e : a.entries()) s += std::norm(e);
    return std::sqrt(s);
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix::require_same_shape(a, b, "frobenius_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i) s += std::norm(a.entries()[i] - b.entries()[i]);
    return std::sqrt(s);
}

inline bool all_finite(const ComplexMatrix& a) {
    return std::all_of(a.entries().begin(), a.entries().end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

// ---------------------------------------------------------------------------
// Vectorization
//
// Row-major stacking: vec(X)[i*cols + j] = X(i, j). Under this convention
//     vec(A X B) = (A ⊗ Bᵀ) vec(X).
// Note the plain transpose on B, not the adjoint.
// ---------------------------------------------------------------------------

inline ComplexMatrix vectorize(const ComplexMatrix& m) {
    ComplexMatrix v(m.rows() * m.cols(), 1);
    v.entries() = m.entries();
    return v;
}

inline ComplexMatrix devectorize(const ComplexMatrix& v, std::size_t rows, std::size_t cols) {
    if (v.cols() != 1 || v.rows() != rows * cols) {
        throw DimensionError("devectorize: vector of shape " + v.shape() + " cannot fill " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
    ComplexMatrix m(rows, cols);
    m.entries() = v.entries();
    return m;
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition (cyclic complex Jacobi)
// ---------------------------------------------------------------------------

struct HermitianEigenResult {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
};

inline HermitianEigenResult hermitian_eigen(const ComplexMatrix& input, double tol = kResidualTol) {
    if (!input.is_square()) {
        throw DimensionError("hermitian_eigen: matrix is not square (" + input.shape() + ")");
    }
    const std::size_t n = input.rows();
    const double norm = frobenius_norm(input);
    const double skew = frobenius_distance(input, adjoint(input));
    if (skew > tol * std::max(1.0, norm)) {
        throw InvariantError("hermitian_eigen: input is not Hermitian (||A - A^H||_F = " +
                             std::to_string(skew) + ")");
    }

    // Symmetrize so rounding noise in the input cannot stall the sweeps.
    ComplexMatrix a = scale(0.5, input + adjoint(input));
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double threshold = kJacobiOffDiagTol * norm;

    auto max_off_diagonal = [&] {
        double m = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) m = std::max(m, std::abs(a(p, q)));
        return m;
    };
    auto off_diagonal_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    int sweep = 0;
    while (max_off_diagonal() > threshold) {
        if (sweep++ >= kJacobiMaxSweeps) throw ConvergenceError(off_diagonal_norm());
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r <= threshold) continue;
                const Complex phase = apq / r;
                // After the phase change D = diag(.., 1_p, .., conj(phase)_q, ..) the (p,q)
                // element is the real r; then a real rotation annihilates it.
                const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary V acting on columns p, q:
                //   V(p,p) = c, V(p,q) = s, V(q,p) = -s*conj(phase), V(q,q) = c*conj(phase)
                const Complex vpp = c, vpq = s, vqp = -s * std::conj(phase), vqq = c * std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {  // A <- A V
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * vpp + akq * vqp;
                    a(k, q) = akp * vpq + akq * vqq;
                }
                for (std::size_t k = 0; k < n; ++k) {  // A <- V^H A
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
                    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t k = 0; k < n; ++k) {  // V_total <- V_total V
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * vpp + vkq * vqp;
                    v(k, q) = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermitianEigenResult result{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        result.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) result.eigenvectors(r, k) = v(r, order[k]);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Linear systems
// ---------------------------------------------------------------------------

// Solves a x = b (b may carry several right-hand-side columns) by Gaussian
// elimination with partial pivoting.
inline ComplexMatrix solve_linear(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square()) throw DimensionError("solve_linear: matrix is not square (" + a.shape() + ")");
    if (b.rows() != a.rows()) {
        throw DimensionError("solve_linear: shape mismatch " + a.shape() + " vs " + b.shape());
    }
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    const double pivot_floor = kPivotTol * frobenius_norm(a);
    ComplexMatrix lu = a;
    ComplexMatrix x = b;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
        const double magnitude = std::abs(lu(pivot, col));
        if (!(magnitude > pivot_floor)) throw SingularMatrixError(col, magnitude);
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(lu(col, c), lu(pivot, c));
            for (std::size_t c = 0; c < m; ++c) std::swap(x(col, c), x(pivot, c));
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex factor = lu(r, col) / lu(col, col);
            if (factor == Complex{}) continue;
            for (std::size_t c = col; c < n; ++c) lu(r, c) -= factor * lu(col, c);
            for (std::size_t c = 0; c < m; ++c) x(r, c) -= factor * x(col, c);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            Complex s = x(col, c);
            for (std::size_t k = col + 1; k < n; ++k) s -= lu(col, k) * x(k, c);
            x(col, c) = s / lu(col, col);
        }
    }
    return x;
}

// ---------------------------------------------------------------------------
// Matrix exponential by scaling and squaring with a truncated Taylor kernel.
// Accurate to ~1e-14 relative for the small superoperators used here.
// ---------------------------------------------------------------------------

inline ComplexMatrix expm(const ComplexMatrix& a) {
    if (!a.is_square()) throw DimensionError("expm: matrix is not square (" + a.shape() + ")");
    const std::size_t n = a.rows();
    const double norm = frobenius_norm(a);
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const ComplexMatrix scaled = scale(std::ldexp(1.0, -squarings), a);

    ComplexMatrix result = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = scale(1.0 / k, matmul(term, scaled));
        result += term;
        if (frobenius_norm(term) < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) result = matmul(result, result);
    return result;
}

}  // namespace qmemch
