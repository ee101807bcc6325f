#pragma once

// Lindblad generators in jump-operator form
//
//     L(π) = Σ_k γ_k ( J_k π J_k† - ½ {J_k† J_k, π} ),
//
// the printed right-eigenoperator catalogs of the correlated two-qubit
// dephasing and amplitude-damping generators, their left duals, and the
// spectral form of the evolution
//
//     Φ_t(π) = Σ_i tr(L_i π) exp(λ_i t) R_i.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmemch/channels.hpp"
#include "qmemch/errors.hpp"
#include "qmemch/linalg.hpp"

namespace qmemch {

struct LindbladTerm {
    double rate = 0.0;
    ComplexMatrix jump;
};

struct LindbladSpec {
    std::size_t dim = 0;
    std::vector<LindbladTerm> terms;

    LindbladSpec() = default;
    explicit LindbladSpec(std::vector<LindbladTerm> ts) : terms(std::move(ts)) {
        if (terms.empty()) throw DimensionError("LindbladSpec: no terms");
        dim = terms.front().jump.rows();
        for (const auto& t : terms) {
            if (!(t.rate >= 0.0)) throw ParameterError("LindbladSpec: negative rate " + std::to_string(t.rate));
            if (t.jump.rows() != dim || t.jump.cols() != dim) {
                throw DimensionError("LindbladSpec: jump operator " + t.jump.shape() + " does not match dimension " +
                                     std::to_string(dim));
            }
        }
    }
};

inline ComplexMatrix apply_generator(const LindbladSpec& spec, const ComplexMatrix& pi) {
    if (pi.rows() != spec.dim || pi.cols() != spec.dim) {
        throw DimensionError("apply_generator: generator acts on dimension " + std::to_string(spec.dim) +
                             ", operand is " + pi.shape());
    }
    ComplexMatrix out(spec.dim, spec.dim);
    for (const auto& [rate, jump] : spec.terms) {
        const ComplexMatrix jd = adjoint(jump);
        const ComplexMatrix jdj = matmul(jd, jump);
        ComplexMatrix term = matmul(matmul(jump, pi), jd);
        term -= scale(0.5, matmul(jdj, pi) + matmul(pi, jdj));
        out += scale(rate, term);
    }
    return out;
}

// S with S vec(π) = vec(L(π)), row-major vec:
//   J π J†  -> J ⊗ conj(J)
//   J†J π   -> J†J ⊗ I
//   π J†J   -> I ⊗ (J†J)ᵀ
inline ComplexMatrix superoperator_matrix(const LindbladSpec& spec) {
    const std::size_t d = spec.dim;
    const ComplexMatrix id = ComplexMatrix::identity(d);
    ComplexMatrix s(d * d, d * d);
    for (const auto& [rate, jump] : spec.terms) {
        const ComplexMatrix jdj = matmul(adjoint(jump), jump);
        ComplexMatrix term = kron(jump, conjugate(jump));
        term -= scale(0.5, kron(jdj, id) + kron(id, transpose(jdj)));
        s += scale(rate, term);
    }
    return s;
}

// exp(t L) π via the dense superoperator exponential.
inline ComplexMatrix evolve_exact(const LindbladSpec& spec, double t, const ComplexMatrix& pi) {
    const ComplexMatrix propagator = expm(scale(t, superoperator_matrix(spec)));
    return devectorize(matmul(propagator, vectorize(pi)), spec.dim, spec.dim);
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

// Single-qubit amplitude damping: rate α, jump σ = |1><0|.
inline LindbladSpec amplitude_damping_spec(double alpha_rate) {
    return LindbladSpec({{alpha_rate, pauli::lowering()}});
}

// Single-qubit dephasing: -½Γ(π - σz π σz), i.e. rate Γ/2 with jump σz.
inline LindbladSpec dephasing_spec(double gamma_rate) {
    return LindbladSpec({{gamma_rate / 2.0, pauli::z()}});
}

// Correlated dephasing: jump σz⊗σz at rate Γ/2.
inline LindbladSpec dephasing_correlated_spec(double gamma_rate) {
    return LindbladSpec({{gamma_rate / 2.0, kron(pauli::z(), pauli::z())}});
}

// Correlated amplitude damping: jump σ⊗σ at rate α.
inline LindbladSpec ad_correlated_spec(double alpha_rate) {
    return LindbladSpec({{alpha_rate, kron(pauli::lowering(), pauli::lowering())}});
}

// Independent dephasing on each qubit: jumps I⊗σz and σz⊗I, each at Γ/2.
inline LindbladSpec dephasing_uncorrelated_spec(double gamma_rate) {
    if (!(gamma_rate >= 0.0)) throw ParameterError("gamma_rate must be nonnegative");
    const ComplexMatrix i = pauli::identity(), z = pauli::z();
    return LindbladSpec({{gamma_rate / 2.0, kron(i, z)}, {gamma_rate / 2.0, kron(z, i)}});
}

// ---------------------------------------------------------------------------
// Eigenoperator catalogs
// ---------------------------------------------------------------------------

struct CatalogEntry {
    std::string label;
    ComplexMatrix right;
    double eigenvalue = 0.0;
};

struct EigenoperatorCatalog {
    std::size_t dim = 4;
    std::vector<CatalogEntry> entries;
    std::vector<ComplexMatrix> lefts;  // empty until dual_basis

    bool has_lefts() const noexcept { return !lefts.empty() && lefts.size() == entries.size(); }

    const CatalogEntry& at(std::string_view label) const {
        for (const auto& e : entries)
            if (e.label == label) return e;
        throw ParameterError("catalog has no entry '" + std::string(label) + "'");
    }

    std::size_t index_of(std::string_view label) const {
        for (std::size_t i = 0; i < entries.size(); ++i)
            if (entries[i].label == label) return i;
        throw ParameterError("catalog has no entry '" + std::string(label) + "'");
    }
};

namespace detail {

// (±|a><b| + |b><a|)/√2 for a < b: the off-diagonal "±" pair shape shared by
// both catalogs. Entry (a,b) carries the sign.
inline ComplexMatrix signed_pair(std::size_t a, std::size_t b, double sign) {
    ComplexMatrix m(4, 4);
    m(a, b) = sign / std::numbers::sqrt2;
    m(b, a) = 1.0 / std::numbers::sqrt2;
    return m;
}

inline ComplexMatrix diag4(double d0, double d1, double d2, double d3, double factor = 1.0) {
    return ComplexMatrix::diagonal({d0 * factor, d1 * factor, d2 * factor, d3 * factor});
}

struct OffDiagonalLambdas {
    double l01, l02, l03, l12, l13, l23;
};

// Appends R01±, R02±, R03±, R11, R12±, R13±, R22, R23± with the given
// eigenvalues for each pair (R11, R22 always have λ = 0 in both catalogs).
inline void append_shared_entries(std::vector<CatalogEntry>& out, const OffDiagonalLambdas& lam) {
    auto pair = [&](const char* name, std::size_t a, std::size_t b, double lambda) {
        out.push_back({std::string(name) + "+", signed_pair(a, b, +1.0), lambda});
        out.push_back({std::string(name) + "-", signed_pair(a, b, -1.0), lambda});
    };
    pair("R01", 0, 1, lam.l01);
    pair("R02", 0, 2, lam.l02);
    pair("R03", 0, 3, lam.l03);
    out.push_back({"R11", ComplexMatrix::basis_projector(4, 1, 1), 0.0});
    pair("R12", 1, 2, lam.l12);
    pair("R13", 1, 3, lam.l13);
    out.push_back({"R22", ComplexMatrix::basis_projector(4, 2, 2), 0.0});
    pair("R23", 2, 3, lam.l23);
}

}  // namespace detail

// Right eigenoperators of the correlated dephasing generator (jump σz⊗σz,
// rate Γ/2). Coherences between basis states of equal σz⊗σz parity are
// protected (λ = 0); the others decay at Γ.
inline EigenoperatorCatalog catalog_dephasing_correlated(double gamma_rate) {
    if (!(gamma_rate >= 0.0)) throw ParameterError("gamma_rate must be nonnegative");
    const double g = gamma_rate;
    EigenoperatorCatalog cat;
    cat.entries.push_back({"R00", detail::diag4(1, 0, 0, 1, 1.0 / std::numbers::sqrt2), 0.0});
    cat.entries.push_back({"R33", detail::diag4(1, 0, 0, -1, 1.0 / std::numbers::sqrt2), 0.0});
    detail::append_shared_entries(cat.entries, {-g, -g, 0.0, 0.0, -g, -g});
    return cat;
}

// Right eigenoperators of the correlated amplitude-damping generator (jump
// σ⊗σ, rate α). R00 is printed as diag(0,0,0,2)/√2, i.e. not unit-normalized;
// it is kept as printed.
inline EigenoperatorCatalog catalog_ad_correlated(double alpha_rate) {
    if (!(alpha_rate >= 0.0)) throw ParameterError("alpha_rate must be nonnegative");
    const double a = alpha_rate;
    EigenoperatorCatalog cat;
    cat.entries.push_back({"R00", detail::diag4(0, 0, 0, 2, 1.0 / std::numbers::sqrt2), 0.0});
    cat.entries.push_back({"R33", detail::diag4(1, 0, 0, -1, 1.0 / std::numbers::sqrt2), -a});
    detail::append_shared_entries(cat.entries, {-a / 2, -a / 2, -a / 2, 0.0, 0.0, 0.0});
    return cat;
}

// Solves tr(L_i R_j) = δ_ij (plain trace, no conjugation).
//
// tr(L R) = Σ_ab L(a,b) R(b,a) = vec(Rᵀ) · vec(L), so with M's row j equal to
// vec(R_jᵀ), vec(L_i) is column i of M⁻¹.
inline EigenoperatorCatalog dual_basis(EigenoperatorCatalog cat) {
    const std::size_t d = cat.dim;
    const std::size_t n = cat.entries.size();
    if (n != d * d) {
        throw DimensionError("dual_basis: catalog has " + std::to_string(n) + " entries, expected " +
                             std::to_string(d * d));
    }
    ComplexMatrix gram(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const ComplexMatrix rt = transpose(cat.entries[j].right);
        for (std::size_t k = 0; k < n; ++k) gram(j, k) = rt.entries()[k];
    }
    ComplexMatrix inverse;
    try {
        inverse = solve_linear(gram, ComplexMatrix::identity(n));
    } catch (const SingularMatrixError& e) {
        throw InvariantError(std::string("dual_basis: right eigenoperators do not span the operator space (") +
                             e.what() + ")");
    }
    cat.lefts.clear();
    for (std::size_t i = 0; i < n; ++i) {
        ComplexMatrix left(d, d);
        for (std::size_t k = 0; k < n; ++k) left.entries()[k] = inverse(k, i);
        cat.lefts.push_back(std::move(left));
    }
    return cat;
}

// Max |tr(L_i R_j) - δ_ij| over all pairs.
inline double duality_residual(const EigenoperatorCatalog& cat) {
    if (!cat.has_lefts()) throw InvariantError("duality_residual: catalog has no left eigenoperators");
    double worst = 0.0;
    for (std::size_t i = 0; i < cat.entries.size(); ++i)
        for (std::size_t j = 0; j < cat.entries.size(); ++j) {
            const Complex overlap = trace(matmul(cat.lefts[i], cat.entries[j].right));
            worst = std::max(worst, std::abs(overlap - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

// exp(λt) with the t = ∞ limit taken per eigenvalue.
inline double spectral_factor(double lambda, double t) {
    if (lambda == 0.0) return 1.0;
    if (std::isinf(t)) return lambda < 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::exp(lambda * t);
}

inline ComplexMatrix evolve_raw(const EigenoperatorCatalog& cat, double t, const ComplexMatrix& pi) {
    if (!cat.has_lefts()) throw InvariantError("evolve: catalog has no left eigenoperators; call dual_basis first");
    if (!(t >= 0.0)) throw ParameterError("evolve: t must be nonnegative");
    if (pi.rows() != cat.dim || pi.cols() != cat.dim) {
        throw DimensionError("evolve: catalog acts on dimension " + std::to_string(cat.dim) + ", state is " +
                             pi.shape());
    }
    ComplexMatrix out(cat.dim, cat.dim);
    for (std::size_t i = 0; i < cat.entries.size(); ++i) {
        const double factor = spectral_factor(cat.entries[i].eigenvalue, t);
        if (factor == 0.0) continue;
        const Complex weight = trace(matmul(cat.lefts[i], pi)) * factor;
        out += scale(weight, cat.entries[i].right);
    }
    return out;
}

inline DensityMatrix evolve(const EigenoperatorCatalog& cat, double t, const DensityMatrix& pi) {
    return DensityMatrix(evolve_raw(cat, t, pi.matrix()));
}

// ||L(R_i) - λ_i R_i||_F per entry.
inline std::vector<double> verify_eigen(const LindbladSpec& spec, const EigenoperatorCatalog& cat) {
    if (spec.dim != cat.dim) {
        throw DimensionError("verify_eigen: generator dimension " + std::to_string(spec.dim) +
                             " vs catalog dimension " + std::to_string(cat.dim));
    }
    std::vector<double> residuals;
    residuals.reserve(cat.entries.size());
    for (const auto& e : cat.entries) {
        residuals.push_back(
            frobenius_distance(apply_generator(spec, e.right), scale(e.eigenvalue, e.right)));
    }
    return residuals;
}

// ---------------------------------------------------------------------------
// Kraus / Lindblad parameter identification
// ---------------------------------------------------------------------------

// p = ½(1 - exp(-Γt))
inline double dephasing_p_from_time(double gamma_t) { return 0.5 * (1.0 - std::exp(-gamma_t)); }

// cos χ = exp(-αt/2), sin χ = sqrt(1 - exp(-αt))
inline double ad_chi_from_time(double alpha_t) {
    return std::atan2(std::sqrt(-std::expm1(-alpha_t)), std::exp(-alpha_t / 2.0));
}

// Random density matrix from a complex Ginibre draw: G G† / tr(G G†).
template <class Rng>
ComplexMatrix random_density_matrix(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(dim, dim);
    for (auto& e : g.entries()) e = Complex{normal(rng), normal(rng)};
    ComplexMatrix rho = matmul(g, adjoint(g));
    rho = scale(1.0 / trace(rho).real(), rho);
    // Remove rounding asymmetry.
    return scale(0.5, rho + adjoint(rho));
}

inline constexpr std::size_t kEquivalenceStates = 20;
inline constexpr std::uint64_t kEquivalenceSeed = 0x5eed'c0de'2004ULL;

// Max Frobenius distance between the spectral evolution and the Kraus
// channel kraus_builder(param_map(t)) over random input states.
template <class KrausBuilder, class ParamMap>
double kraus_equivalence(const EigenoperatorCatalog& cat, double t, KrausBuilder&& kraus_builder,
                         ParamMap&& param_map, std::size_t states = kEquivalenceStates,
                         std::uint64_t seed = kEquivalenceSeed) {
    const KrausSet channel = std::invoke(kraus_builder, std::invoke(param_map, t));
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
        const ComplexMatrix rho = random_density_matrix(cat.dim, rng);
        worst = std::max(worst, frobenius_distance(evolve_raw(cat, t, rho), apply_raw(channel, rho)));
    }
    return worst;
}

}  // namespace qmemch
