#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "qmemch/channels.hpp"
#include "qmemch/lindblad.hpp"
#include "test_support.hpp"

namespace qmemch {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double hi, int points = 21) {
    std::vector<double> g;
    for (int i = 0; i < points; ++i) g.push_back(hi * i / (points - 1));
    return g;
}

ComplexMatrix bell_phi_plus() {
    const double h = 1.0 / std::numbers::sqrt2;
    const auto ket = ComplexMatrix::column({h, 0.0, 0.0, h});
    return matmul(ket, adjoint(ket));
}

// ---------------------------------------------------------------------------

TEST(AmplitudeDamping, NoDamping) {
    const auto k = amplitude_damping_kraus(0.0);
    EXPECT_EQ(k.ops[0], ComplexMatrix::identity(2));
    EXPECT_EQ(k.ops[1], ComplexMatrix::zeros(2, 2));
}

TEST(AmplitudeDamping, FullDamping) {
    const auto k = amplitude_damping_kraus(kPi / 2);
    EXPECT_MATRIX_NEAR(k.ops[0], ComplexMatrix::diagonal({0.0, 1.0}), 1e-16);
    EXPECT_MATRIX_NEAR(k.ops[1], ComplexMatrix::basis_projector(2, 1, 0), 1e-16);
}

TEST(AmplitudeDamping, SixtyDegrees) {
    const auto k = amplitude_damping_kraus(kPi / 3);
    EXPECT_MATRIX_NEAR(k.ops[0], ComplexMatrix::diagonal({0.5, 1.0}), 1e-15);
    EXPECT_NEAR(k.ops[1](1, 0).real(), std::sqrt(3.0) / 2, 1e-15);
}

TEST(AmplitudeDamping, RejectsOutOfRange) {
    EXPECT_THROW((void)amplitude_damping_kraus(-0.01), ParameterError);
    EXPECT_THROW((void)amplitude_damping_kraus(kPi / 2 + 1e-9), ParameterError);
    EXPECT_THROW((void)ad_uncorrelated_kraus2(2.0), ParameterError);
    EXPECT_THROW((void)ad_correlated_kraus2(std::nan("")), ParameterError);
}

TEST(Dephasing, NoiselessReducesToIdentity) {
    const auto u = dephasing_uncorrelated_kraus(0.0);
    const auto c = dephasing_correlated_kraus(0.0);
    EXPECT_EQ(u.ops.size(), 4u);
    EXPECT_EQ(c.ops.size(), 2u);
    EXPECT_EQ(u.ops[0], ComplexMatrix::identity(4));
    EXPECT_EQ(c.ops[0], ComplexMatrix::identity(4));
    for (std::size_t i = 1; i < u.ops.size(); ++i) EXPECT_EQ(frobenius_norm(u.ops[i]), 0.0);
    EXPECT_EQ(frobenius_norm(c.ops[1]), 0.0);
}

TEST(Dephasing, HalfFlipUncorrelatedCoefficients) {
    const auto u = dephasing_uncorrelated_kraus(0.5);
    const auto i = pauli::identity(), z = pauli::z();
    EXPECT_MATRIX_NEAR(u.ops[0], scale(0.5, kron(i, i)), 1e-15);
    EXPECT_MATRIX_NEAR(u.ops[1], scale(0.5, kron(i, z)), 1e-15);
    EXPECT_MATRIX_NEAR(u.ops[2], scale(0.5, kron(z, i)), 1e-15);
    EXPECT_MATRIX_NEAR(u.ops[3], scale(0.5, kron(z, z)), 1e-15);
}

TEST(Dephasing, DeterministicCorrelatedFlip) {
    const auto c = dephasing_correlated_kraus(1.0);
    EXPECT_EQ(frobenius_norm(c.ops[0]), 0.0);
    EXPECT_EQ(c.ops[1], kron(pauli::z(), pauli::z()));
}

TEST(Dephasing, RejectsOutOfRange) {
    EXPECT_THROW((void)dephasing_uncorrelated_kraus(1.5), ParameterError);
    EXPECT_THROW((void)dephasing_correlated_kraus(-0.5), ParameterError);
}

TEST(AmplitudeDampingTwoUse, NoDampingIsIdentity) {
    const auto k = ad_uncorrelated_kraus2(0.0);
    ASSERT_EQ(k.ops.size(), 4u);
    EXPECT_EQ(k.ops[0], ComplexMatrix::identity(4));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(frobenius_norm(k.ops[i]), 0.0);
}

TEST(AmplitudeDampingTwoUse, FullyDampedBlockExpansion) {
    // E0 = |1><1|, E1 = |1><0|: every product maps into |11>.
    const auto k = ad_uncorrelated_kraus2(kPi / 2);
    EXPECT_MATRIX_NEAR(k.ops[0], ComplexMatrix::basis_projector(4, 3, 3), 1e-16);
    EXPECT_MATRIX_NEAR(k.ops[1], ComplexMatrix::basis_projector(4, 3, 2), 1e-16);
    EXPECT_MATRIX_NEAR(k.ops[2], ComplexMatrix::basis_projector(4, 3, 1), 1e-16);
    EXPECT_MATRIX_NEAR(k.ops[3], ComplexMatrix::basis_projector(4, 3, 0), 1e-16);
}

TEST(AmplitudeDampingTwoUse, CompleteAtPiOverFive) { EXPECT_LE(check_cptp(ad_uncorrelated_kraus2(kPi / 5)), 1e-12); }

TEST(CorrelatedAmplitudeDamping, NoDampingIsIdentity) {
    const auto k = ad_correlated_kraus2(0.0);
    EXPECT_EQ(k.ops[0], ComplexMatrix::identity(4));
    EXPECT_EQ(k.ops[1], ComplexMatrix::zeros(4, 4));
}

TEST(CorrelatedAmplitudeDamping, ExactMatrices) {
    const double chi = 0.7;
    const auto k = ad_correlated_kraus2(chi);
    EXPECT_EQ(k.ops[0], ComplexMatrix::diagonal({std::cos(chi), 1.0, 1.0, 1.0}));
    ComplexMatrix e11(4, 4);
    e11(3, 0) = std::sin(chi);
    EXPECT_EQ(k.ops[1], e11);
}

TEST(CorrelatedAmplitudeDamping, SingleExcitationPassesUndisturbed) {
    for (double chi : grid(kPi / 2, 7)) {
        const auto out = apply(ad_correlated_kraus2(chi), DensityMatrix::basis_state(4, 1));
        EXPECT_MATRIX_NEAR(out.matrix(), ComplexMatrix::basis_projector(4, 1, 1), 1e-15);
    }
}

TEST(CorrelatedAmplitudeDamping, DoubleExcitationDecaysToGround) {
    const auto out = apply(ad_correlated_kraus2(kPi / 2), DensityMatrix::basis_state(4, 0));
    EXPECT_MATRIX_NEAR(out.matrix(), ComplexMatrix::basis_projector(4, 3, 3), 1e-15);
}

TEST(CorrelatedAmplitudeDamping, InvariantSubspaceIsFixed) {
    // Any state supported on span{|01>, |10>, |11>} is a fixed point.
    std::mt19937_64 rng(11);
    for (double chi : grid(kPi / 2, 9)) {
        const ComplexMatrix sub = random_density_matrix(3, rng);
        ComplexMatrix rho(4, 4);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b) rho(a + 1, b + 1) = sub(a, b);
        const auto out = apply(ad_correlated_kraus2(chi), DensityMatrix(rho));
        EXPECT_MATRIX_NEAR(out.matrix(), rho, 1e-14);
    }
}

TEST(CorrelatedAmplitudeDamping, NotAProductOfSingleQubitMaps) {
    // The uncorrelated map damps |01> while the correlated map leaves it alone.
    const double chi = 1.0;
    const auto rho = DensityMatrix::basis_state(4, 1);
    const auto unc = apply(ad_uncorrelated_kraus2(chi), rho);
    const auto cor = apply(ad_correlated_kraus2(chi), rho);
    EXPECT_GT(frobenius_distance(unc.matrix(), cor.matrix()), 0.1);
}

TEST(Depolarizing, NoiselessSets) {
    const auto u = depolarizing_uncorrelated_kraus2(0.0);
    const auto c = depolarizing_correlated_kraus2(0.0);
    ASSERT_EQ(u.ops.size(), 16u);
    ASSERT_EQ(c.ops.size(), 4u);
    EXPECT_EQ(u.ops[0], ComplexMatrix::identity(4));
    EXPECT_EQ(c.ops[0], ComplexMatrix::identity(4));
    for (std::size_t i = 1; i < 16; ++i) EXPECT_EQ(frobenius_norm(u.ops[i]), 0.0);
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(frobenius_norm(c.ops[i]), 0.0);
}

TEST(Depolarizing, CompleteAtPointThree) {
    EXPECT_LE(check_cptp(depolarizing_uncorrelated_kraus2(0.3)), 1e-12);
    EXPECT_LE(check_cptp(depolarizing_correlated_kraus2(0.3)), 1e-12);
}

TEST(Depolarizing, CorrelatedXXAtThreeQuarters) {
    // p1 = p/3 = 1/4, sqrt(p1) = 1/2
    const auto c = depolarizing_correlated_kraus2(0.75);
    EXPECT_MATRIX_NEAR(c.ops[1], scale(0.5, kron(pauli::x(), pauli::x())), 1e-15);
}

TEST(Depolarizing, UncorrelatedCoefficientPattern) {
    const double p = 0.6;
    const std::array<double, 4> w{1.0 - p, p / 3, p / 3, p / 3};
    const auto u = depolarizing_uncorrelated_kraus2(p);
    const auto sigma = pauli::all();
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const double coeff = i == j ? w[i] : std::sqrt(w[i] * w[j]);
            EXPECT_MATRIX_NEAR(u.ops[i * 4 + j], scale(coeff, kron(sigma[i], sigma[j])), 1e-15) << i << j;
        }
    }
}

TEST(Depolarizing, RejectsOutOfRange) {
    EXPECT_THROW((void)depolarizing_uncorrelated_kraus2(1.01), ParameterError);
    EXPECT_THROW((void)depolarizing_correlated_kraus2(-1e-3), ParameterError);
}

// ---------------------------------------------------------------------------

TEST(MemoryChannel, EndpointsKeepOnlyOneBranch) {
    const auto unc = ad_uncorrelated_kraus2(0.4), cor = ad_correlated_kraus2(0.4);
    const auto m0 = memory_channel(unc, cor, 0.0);
    const auto m1 = memory_channel(unc, cor, 1.0);
    ASSERT_EQ(m0.ops.size(), 6u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(m0.ops[i], unc.ops[i]);
        EXPECT_EQ(frobenius_norm(m1.ops[i]), 0.0);
    }
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(frobenius_norm(m0.ops[4 + i]), 0.0);
        EXPECT_EQ(m1.ops[4 + i], cor.ops[i]);
    }
}

TEST(MemoryChannel, CompleteForAmplitudeDamping) {
    EXPECT_LE(check_cptp(memory_channel(ad_uncorrelated_kraus2(kPi / 5), ad_correlated_kraus2(kPi / 5), 0.4)), 1e-12);
}

TEST(MemoryChannel, IsConvexMixture) {
    std::mt19937_64 rng(12);
    const auto unc = depolarizing_uncorrelated_kraus2(0.35), cor = depolarizing_correlated_kraus2(0.35);
    for (double mu : grid(1.0, 11)) {
        const auto mixed = memory_channel(unc, cor, mu);
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexMatrix rho = random_density_matrix(4, rng);
            const ComplexMatrix expected =
                scale(1.0 - mu, apply_raw(unc, rho)) + scale(mu, apply_raw(cor, rho));
            EXPECT_MATRIX_NEAR(apply_raw(mixed, rho), expected, 1e-12);
        }
    }
}

TEST(MemoryChannel, ZeroMemoryActsAsProductOfSingleQubitChannels) {
    std::mt19937_64 rng(13);
    for (double chi : grid(kPi / 2, 6)) {
        const auto single = amplitude_damping_kraus(chi);
        const auto channel = family_memory_channel(ChannelFamily::amplitude_damping, 0.0, chi);
        const ComplexMatrix a = random_density_matrix(2, rng), b = random_density_matrix(2, rng);
        EXPECT_MATRIX_NEAR(apply_raw(channel, kron(a, b)), kron(apply_raw(single, a), apply_raw(single, b)), 1e-12);
    }
}

TEST(MemoryChannel, Errors) {
    EXPECT_THROW((void)memory_channel(amplitude_damping_kraus(0.1), ad_correlated_kraus2(0.1), 0.5), DimensionError);
    EXPECT_THROW((void)memory_channel(ad_uncorrelated_kraus2(0.1), ad_correlated_kraus2(0.1), 1.5), ParameterError);
}

// ---------------------------------------------------------------------------

TEST(Apply, IdentityChannel) {
    std::mt19937_64 rng(14);
    const DensityMatrix rho(random_density_matrix(4, rng));
    EXPECT_MATRIX_NEAR(apply(KrausSet({ComplexMatrix::identity(4)}), rho).matrix(), rho.matrix(), 1e-15);
}

TEST(Apply, CorrelatedDephasingStabilizesBellState) {
    const DensityMatrix phi(bell_phi_plus());
    EXPECT_MATRIX_NEAR(apply(dephasing_correlated_kraus(0.5), phi).matrix(), phi.matrix(), 1e-15);
}

TEST(Apply, AgreesWithIndexSumOracle) {
    std::mt19937_64 rng(15);
    const std::vector<KrausSet> channels{
        family_memory_channel(ChannelFamily::amplitude_damping, 0.3, 0.9),
        family_memory_channel(ChannelFamily::depolarizing, 0.6, 0.2),
        family_memory_channel(ChannelFamily::dephasing, 0.5, 0.4),
    };
    for (const auto& k : channels) {
        const ComplexMatrix rho = random_density_matrix(4, rng);
        EXPECT_MATRIX_NEAR(apply_raw(k, rho), testing::apply_by_index_sum(k, rho), 1e-14);
    }
}

TEST(Apply, Errors) {
    EXPECT_THROW((void)apply(amplitude_damping_kraus(0.2), DensityMatrix::basis_state(4, 0)), DimensionError);
    KrausSet incomplete({amplitude_damping_kraus(kPi / 4).ops[0]});
    EXPECT_THROW((void)apply(incomplete, DensityMatrix::basis_state(2, 0)), InvariantError);
}

TEST(Apply, PreservesDensityMatrixInvariants) {
    std::mt19937_64 rng(16);
    const std::vector<KrausSet> channels{
        amplitude_damping_kraus(0.8),
        ad_uncorrelated_kraus2(0.8),
        ad_correlated_kraus2(0.8),
        dephasing_uncorrelated_kraus(0.3),
        dephasing_correlated_kraus(0.3),
        depolarizing_uncorrelated_kraus2(0.3),
        depolarizing_correlated_kraus2(0.3),
        family_memory_channel(ChannelFamily::amplitude_damping, 0.4, kPi / 5),
    };
    for (const auto& k : channels) {
        for (int trial = 0; trial < 50; ++trial) {
            const ComplexMatrix rho = random_density_matrix(k.dim, rng);
            const ComplexMatrix out = apply_raw(k, rho);
            EXPECT_LE(std::abs(trace(out) - 1.0), 1e-12);
            EXPECT_LE(frobenius_distance(out, adjoint(out)), 1e-12);
            EXPECT_GE(hermitian_eigen(out).eigenvalues.front(), -1e-10);
            EXPECT_NO_THROW((void)DensityMatrix(out));
        }
    }
}

// ---------------------------------------------------------------------------

TEST(CheckCptp, Examples) {
    EXPECT_EQ(check_cptp(KrausSet({ComplexMatrix::identity(4)})), 0.0);
    for (double chi : grid(kPi / 2, 11)) EXPECT_LE(check_cptp(amplitude_damping_kraus(chi)), 1e-15);
    // E0 alone at χ = π/4: E0†E0 - I = diag(-½, 0).
    KrausSet incomplete({amplitude_damping_kraus(kPi / 4).ops[0]});
    EXPECT_GT(check_cptp(incomplete), 0.4);
    EXPECT_NEAR(check_cptp(incomplete), 0.5, 1e-15);
}

TEST(CheckCptp, EveryConstructorOnGrid) {
    for (double chi : grid(kPi / 2)) {
        EXPECT_LE(check_cptp(amplitude_damping_kraus(chi)), 1e-12);
        EXPECT_LE(check_cptp(ad_uncorrelated_kraus2(chi)), 1e-12);
        EXPECT_LE(check_cptp(ad_correlated_kraus2(chi)), 1e-12);
    }
    for (double p : grid(1.0)) {
        EXPECT_LE(check_cptp(dephasing_uncorrelated_kraus(p)), 1e-12);
        EXPECT_LE(check_cptp(dephasing_correlated_kraus(p)), 1e-12);
        EXPECT_LE(check_cptp(depolarizing_uncorrelated_kraus2(p)), 1e-12);
        EXPECT_LE(check_cptp(depolarizing_correlated_kraus2(p)), 1e-12);
    }
    for (double mu : grid(1.0)) {
        for (auto family : {ChannelFamily::amplitude_damping, ChannelFamily::dephasing, ChannelFamily::depolarizing}) {
            EXPECT_LE(check_cptp(family_memory_channel(family, mu, 0.5)), 1e-12);
        }
    }
}

// ---------------------------------------------------------------------------

TEST(DensityMatrixType, RejectsInvalidStates) {
    EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(4)), InvariantError);            // trace 4
    EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal({1.5, -0.5})), InvariantError);  // not PSD
    EXPECT_THROW(DensityMatrix(ComplexMatrix{{0.5, 0.5}, {0.0, 0.5}}), InvariantError); // not Hermitian
    EXPECT_THROW(DensityMatrix(ComplexMatrix::identity(3)), DimensionError);
    EXPECT_NO_THROW(DensityMatrix::maximally_mixed(4));
}

TEST(ChannelParamsType, DomainsAndEta) {
    ChannelParams params{0.5, kPi / 4, 0.75, ChannelFamily::depolarizing};
    EXPECT_NO_THROW(params.validate());
    EXPECT_DOUBLE_EQ(params.eta(), 0.0);
    params.p = 1.0;
    EXPECT_NEAR(params.eta(), -1.0 / 3.0, 1e-15);
    params.mu = 1.2;
    EXPECT_THROW(params.validate(), ParameterError);
}

TEST(ChannelFamilyTag, RoundTrip) {
    for (auto f : {ChannelFamily::amplitude_damping, ChannelFamily::dephasing, ChannelFamily::depolarizing}) {
        EXPECT_EQ(parse_family(to_tag(f)), f);
    }
    EXPECT_THROW((void)parse_family("depol"), ParameterError);
}

}  // namespace
}  // namespace qmemch
