#pragma once

// Kraus descriptions of the one- and two-qubit noise channels and their
// memory mixtures.
//
// Basis order is |00>, |01>, |10>, |11>, and |0> is the EXCITED state, |1>
// the ground state. Amplitude damping therefore moves population from index
// 0 towards index 1.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmemch/errors.hpp"
#include "qmemch/linalg.hpp"

namespace qmemch {

namespace pauli {

inline ComplexMatrix identity() { return ComplexMatrix::identity(2); }
inline ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix y() { return {{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
inline ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }

// {I, σx, σy, σz}
inline std::array<ComplexMatrix, 4> all() { return {identity(), x(), y(), z()}; }

// Lowering operator (σx - iσy)/2 = |1><0|: excited -> ground.
inline ComplexMatrix lowering() { return {{0.0, 0.0}, {1.0, 0.0}}; }
inline ComplexMatrix raising() { return {{0.0, 1.0}, {0.0, 0.0}}; }

}  // namespace pauli

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

class DensityMatrix {
public:
    // Validates Hermiticity, unit trace and positivity to within `tol`.
    explicit DensityMatrix(ComplexMatrix mat, double tol = kResidualTol) : mat_(std::move(mat)) {
        if (!mat_.is_square() || (mat_.rows() != 2 && mat_.rows() != 4)) {
            throw DimensionError("DensityMatrix: expected 2x2 or 4x4, got " + mat_.shape());
        }
        if (!all_finite(mat_)) throw InvariantError("DensityMatrix: non-finite entry");
        const double skew = frobenius_distance(mat_, adjoint(mat_));
        if (skew > tol) {
            throw InvariantError("DensityMatrix: not Hermitian (||rho - rho^H||_F = " + std::to_string(skew) + ")");
        }
        const double trace_defect = std::abs(trace(mat_) - 1.0);
        if (trace_defect > tol) {
            throw InvariantError("DensityMatrix: trace defect " + std::to_string(trace_defect));
        }
        const double min_eig = hermitian_eigen(mat_, 1.0).eigenvalues.front();
        if (min_eig < -tol) {
            throw InvariantError("DensityMatrix: negative eigenvalue " + std::to_string(min_eig));
        }
    }

    // Pure state |psi><psi| from a column of amplitudes.
    static DensityMatrix pure(const ComplexMatrix& ket) {
        return DensityMatrix(matmul(ket, adjoint(ket)));
    }

    static DensityMatrix basis_state(std::size_t dim, std::size_t index) {
        return DensityMatrix(ComplexMatrix::basis_projector(dim, index, index));
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        return DensityMatrix(scale(1.0 / static_cast<double>(dim), ComplexMatrix::identity(dim)));
    }

    const ComplexMatrix& matrix() const noexcept { return mat_; }
    std::size_t dim() const noexcept { return mat_.rows(); }

private:
    ComplexMatrix mat_;
};

// ---------------------------------------------------------------------------
// KrausSet / ChannelParams
// ---------------------------------------------------------------------------

struct KrausSet {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> ops;

    KrausSet() = default;
    explicit KrausSet(std::vector<ComplexMatrix> operators) : ops(std::move(operators)) {
        if (ops.empty()) throw DimensionError("KrausSet: operator list is empty");
        dim = ops.front().rows();
        for (const auto& k : ops) {
            if (k.rows() != dim || k.cols() != dim) {
                throw DimensionError("KrausSet: operator shape " + k.shape() + " differs from " +
                                     std::to_string(dim) + "x" + std::to_string(dim));
            }
        }
    }
};

enum class ChannelFamily { amplitude_damping, dephasing, depolarizing };

inline std::string_view to_tag(ChannelFamily f) {
    switch (f) {
        case ChannelFamily::amplitude_damping: return "ad";
        case ChannelFamily::dephasing: return "dephasing";
        case ChannelFamily::depolarizing: return "dp";
    }
    return "?";
}

inline ChannelFamily parse_family(std::string_view tag) {
    if (tag == "ad") return ChannelFamily::amplitude_damping;
    if (tag == "dephasing") return ChannelFamily::dephasing;
    if (tag == "dp") return ChannelFamily::depolarizing;
    throw ParameterError("unknown channel tag '" + std::string(tag) + "' (expected ad, dephasing or dp)");
}

namespace detail {

inline void require_in(double value, double lo, double hi, const char* name) {
    if (!(value >= lo && value <= hi)) {
        throw ParameterError(std::string(name) + " = " + std::to_string(value) + " outside [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

inline void require_chi(double chi) { require_in(chi, 0.0, std::numbers::pi / 2, "chi"); }
inline void require_p(double p) { require_in(p, 0.0, 1.0, "p"); }
inline void require_mu(double mu) { require_in(mu, 0.0, 1.0, "mu"); }

}  // namespace detail

struct ChannelParams {
    double mu = 0.0;
    double chi = 0.0;
    double p = 0.0;
    ChannelFamily which = ChannelFamily::amplitude_damping;

    void validate() const {
        detail::require_mu(mu);
        detail::require_chi(chi);
        detail::require_p(p);
    }

    // η = 1 - 4p/3, in [-1/3, 1].
    double eta() const { return 1.0 - 4.0 * p / 3.0; }
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

// E0 = diag(cos χ, 1), E1 = sin χ |1><0|.
inline KrausSet amplitude_damping_kraus(double chi) {
    detail::require_chi(chi);
    ComplexMatrix e0 = ComplexMatrix::diagonal({std::cos(chi), 1.0});
    ComplexMatrix e1(2, 2);
    e1(1, 0) = std::sin(chi);
    return KrausSet({std::move(e0), std::move(e1)});
}

// {E0⊗E0, E0⊗E1, E1⊗E0, E1⊗E1}
inline KrausSet ad_uncorrelated_kraus2(double chi) {
    const KrausSet single = amplitude_damping_kraus(chi);
    std::vector<ComplexMatrix> ops;
    for (const auto& a : single.ops)
        for (const auto& b : single.ops) ops.push_back(kron(a, b));
    return KrausSet(std::move(ops));
}

// E^c_00 = diag(cos χ, 1, 1, 1); E^c_11 = sin χ |11><00|. Not a product of
// single-qubit operators: only |00> decays, everything else passes untouched.
inline KrausSet ad_correlated_kraus2(double chi) {
    detail::require_chi(chi);
    ComplexMatrix e00 = ComplexMatrix::diagonal({std::cos(chi), 1.0, 1.0, 1.0});
    ComplexMatrix e11(4, 4);
    e11(3, 0) = std::sin(chi);
    return KrausSet({std::move(e00), std::move(e11)});
}

inline KrausSet dephasing_uncorrelated_kraus(double p) {
    detail::require_p(p);
    const ComplexMatrix i = pauli::identity(), z = pauli::z();
    const double cross = std::sqrt(p * (1.0 - p));
    return KrausSet({scale(1.0 - p, kron(i, i)), scale(cross, kron(i, z)), scale(cross, kron(z, i)),
                     scale(p, kron(z, z))});
}

inline KrausSet dephasing_correlated_kraus(double p) {
    detail::require_p(p);
    const ComplexMatrix i = pauli::identity(), z = pauli::z();
    return KrausSet({scale(std::sqrt(1.0 - p), kron(i, i)), scale(std::sqrt(p), kron(z, z))});
}

// Probabilities (p0, p1, p2, p3) = (1 - p, p/3, p/3, p/3).
inline std::array<double, 4> depolarizing_weights(double p) {
    detail::require_p(p);
    return {1.0 - p, p / 3.0, p / 3.0, p / 3.0};
}

// A^u_ij, row-major in (i, j). Coefficients are p_i on the diagonal and
// sqrt(p_i p_j) off it, i.e. sqrt(p_i p_j) throughout.
inline KrausSet depolarizing_uncorrelated_kraus2(double p) {
    const auto w = depolarizing_weights(p);
    const auto sigma = pauli::all();
    std::vector<ComplexMatrix> ops;
    ops.reserve(16);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double coeff = i == j ? w[i] : std::sqrt(w[i] * w[j]);
            ops.push_back(scale(coeff, kron(sigma[i], sigma[j])));
        }
    }
    return KrausSet(std::move(ops));
}

// A^c_kk = sqrt(p_k) σ_k⊗σ_k
inline KrausSet depolarizing_correlated_kraus2(double p) {
    const auto w = depolarizing_weights(p);
    const auto sigma = pauli::all();
    std::vector<ComplexMatrix> ops;
    for (std::size_t k = 0; k < 4; ++k) ops.push_back(scale(std::sqrt(w[k]), kron(sigma[k], sigma[k])));
    return KrausSet(std::move(ops));
}

// {sqrt(1-μ) unc, sqrt(μ) cor}: the convex mixture (1-μ)Φ_u + μΦ_c.
inline KrausSet memory_channel(const KrausSet& unc, const KrausSet& cor, double mu) {
    if (unc.dim != cor.dim) {
        throw DimensionError("memory_channel: dimension mismatch " + std::to_string(unc.dim) + " vs " +
                             std::to_string(cor.dim));
    }
    detail::require_mu(mu);
    std::vector<ComplexMatrix> ops;
    ops.reserve(unc.ops.size() + cor.ops.size());
    for (const auto& k : unc.ops) ops.push_back(scale(std::sqrt(1.0 - mu), k));
    for (const auto& k : cor.ops) ops.push_back(scale(std::sqrt(mu), k));
    return KrausSet(std::move(ops));
}

// Two-use memory channel of a family; `param` is χ for amplitude damping
// and p otherwise.
inline KrausSet family_memory_channel(ChannelFamily family, double mu, double param) {
    switch (family) {
        case ChannelFamily::amplitude_damping:
            return memory_channel(ad_uncorrelated_kraus2(param), ad_correlated_kraus2(param), mu);
        case ChannelFamily::dephasing:
            return memory_channel(dephasing_uncorrelated_kraus(param), dephasing_correlated_kraus(param), mu);
        case ChannelFamily::depolarizing:
            return memory_channel(depolarizing_uncorrelated_kraus2(param), depolarizing_correlated_kraus2(param), mu);
    }
    throw ParameterError("invalid channel family");
}

inline KrausSet family_memory_channel(const ChannelParams& params) {
    params.validate();
    const double param = params.which == ChannelFamily::amplitude_damping ? params.chi : params.p;
    return family_memory_channel(params.which, params.mu, param);
}

// ---------------------------------------------------------------------------
// Verification and action
// ---------------------------------------------------------------------------

// ||Σ K† K - I||_F. Thresholding is left to the caller.
inline double check_cptp(const KrausSet& k) {
    ComplexMatrix sum(k.dim, k.dim);
    for (const auto& op : k.ops) sum += matmul(adjoint(op), op);
    return frobenius_distance(sum, ComplexMatrix::identity(k.dim));
}

// Σ K ρ K† without validating the result.
inline ComplexMatrix apply_raw(const KrausSet& k, const ComplexMatrix& rho) {
    if (rho.rows() != k.dim || rho.cols() != k.dim) {
        throw DimensionError("apply: channel acts on " + std::to_string(k.dim) + "x" + std::to_string(k.dim) +
                             ", state is " + rho.shape());
    }
    ComplexMatrix out(k.dim, k.dim);
    for (const auto& op : k.ops) out += matmul(matmul(op, rho), adjoint(op));
    return out;
}

inline DensityMatrix apply(const KrausSet& k, const DensityMatrix& rho, double tol = kResidualTol) {
    if (rho.dim() != k.dim) {
        throw DimensionError("apply: channel acts on dimension " + std::to_string(k.dim) +
                             ", state has dimension " + std::to_string(rho.dim()));
    }
    const double residual = check_cptp(k);
    if (residual > tol) {
        throw InvariantError("apply: Kraus set is not trace preserving (residual " + std::to_string(residual) + ")");
    }
    return DensityMatrix(apply_raw(k, rho.matrix()), tol);
}

}  // namespace qmemch
