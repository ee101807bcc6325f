#pragma once

// Two-use mutual information I₂ = S(ρ̄) - Σ q_i S(ρ_i) for the θ-family of
// orthonormal input ensembles, its closed forms for the depolarizing and
// amplitude-damping memory channels, and the memory threshold μ_t above
// which entangled inputs beat product inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmemch/channels.hpp"
#include "qmemch/errors.hpp"
#include "qmemch/linalg.hpp"

namespace qmemch {

// Values below this are taken as exact zeros in x log x.
inline constexpr double kLogZeroClamp = 1e-15;

// x log₂ x with 0 log 0 = 0.
inline double xlog2x(double x) { return x < kLogZeroClamp ? 0.0 : x * std::log2(x); }

// ---------------------------------------------------------------------------
// Input ensembles
// ---------------------------------------------------------------------------

struct InputEnsemble {
    std::vector<double> probs;
    std::vector<DensityMatrix> states;

    void validate() const {
        if (probs.size() != states.size() || probs.empty()) {
            throw DimensionError("InputEnsemble: " + std::to_string(probs.size()) + " probabilities for " +
                                 std::to_string(states.size()) + " states");
        }
        double total = 0.0;
        for (double q : probs) {
            if (q < 0.0) throw InvariantError("InputEnsemble: negative probability");
            total += q;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw InvariantError("InputEnsemble: probabilities sum to " + std::to_string(total));
        }
        for (const auto& s : states) {
            const double purity = trace(matmul(s.matrix(), s.matrix())).real();
            if (std::abs(purity - 1.0) > kResidualTol) {
                throw InvariantError("InputEnsemble: state is not pure (purity " + std::to_string(purity) + ")");
            }
        }
    }
};

// |π1> = cos θ|00> + sin θ|11>,  |π2> = sin θ|00> - cos θ|11>,
// |π3> = cos θ|01> + sin θ|10>,  |π4> = sin θ|01> - cos θ|10>,
// equally weighted. θ = 0 is the product basis, θ = π/4 the Bell basis.
inline InputEnsemble theta_ensemble(double theta) {
    detail::require_in(theta, 0.0, std::numbers::pi / 2, "theta");
    const double c = std::cos(theta), s = std::sin(theta);
    InputEnsemble ens;
    ens.probs = {0.25, 0.25, 0.25, 0.25};
    ens.states = {
        DensityMatrix::pure(ComplexMatrix::column({c, 0.0, 0.0, s})),
        DensityMatrix::pure(ComplexMatrix::column({s, 0.0, 0.0, -c})),
        DensityMatrix::pure(ComplexMatrix::column({0.0, c, s, 0.0})),
        DensityMatrix::pure(ComplexMatrix::column({0.0, s, -c, 0.0})),
    };
    return ens;
}

// ---------------------------------------------------------------------------
// Entropy and numeric mutual information
// ---------------------------------------------------------------------------

// S(ρ) = -tr(ρ log₂ ρ), in bits.
inline double von_neumann_entropy(const DensityMatrix& rho) {
    double s = 0.0;
    for (double lambda : hermitian_eigen(rho.matrix()).eigenvalues) {
        s -= xlog2x(std::clamp(lambda, 0.0, 1.0));
    }
    return s;
}

inline double mutual_information_numeric(const KrausSet& k, const InputEnsemble& ens) {
    ens.validate();
    ComplexMatrix average(k.dim, k.dim);
    double conditional = 0.0;
    for (std::size_t i = 0; i < ens.states.size(); ++i) {
        const DensityMatrix out = apply(k, ens.states[i]);
        average += scale(ens.probs[i], out.matrix());
        conditional += ens.probs[i] * von_neumann_entropy(out);
    }
    return von_neumann_entropy(DensityMatrix(std::move(average))) - conditional;
}

// I₂ of the two-use memory channel of `family` on the θ ensemble.
inline double i2_numeric(ChannelFamily family, double param, double mu, double theta) {
    return mutual_information_numeric(family_memory_channel(family, mu, param), theta_ensemble(theta));
}

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

struct ClosedFormTerms {
    double theta = 0.0;
    std::map<std::string, std::vector<double>, std::less<>> terms;

    double sum(std::string_view name) const {
        double s = 0.0;
        for (double x : terms.at(std::string(name))) s += x;
        return s;
    }
};

namespace detail {

inline constexpr double kTermFloor = -1e-12;

// Clamps tiny negative rounding to 0; anything more negative is a genuine
// defect of the closed form and is reported.
inline double clamp_term(double value, const char* name) {
    if (value < kTermFloor) {
        throw InvariantError(std::string("closed form term ") + name + " = " + std::to_string(value) +
                             " is negative");
    }
    return std::max(value, 0.0);
}

inline double sum_xlog2x(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += xlog2x(x);
    return s;
}

}  // namespace detail

// Depolarizing memory channel:
//   I₂ = 2 + Σ e_i log₂ e_i,  η = 1 - 4p/3,
//   e_{1,2} = ¼(1-η²)(1-μ),
//   e_{3,4} = ¼[(1+μ) + η²(1-μ) ± 2 sqrt(η² cos²2θ + (μ + η²(1-μ))² sin²2θ)].
inline std::pair<double, ClosedFormTerms> i2_depolarizing_closed(double p, double mu, double theta) {
    detail::require_p(p);
    detail::require_mu(mu);
    detail::require_in(theta, 0.0, std::numbers::pi / 2, "theta");
    const double eta = 1.0 - 4.0 * p / 3.0;
    const double eta2 = eta * eta;
    const double c2 = std::pow(std::cos(2.0 * theta), 2);
    const double s2 = std::pow(std::sin(2.0 * theta), 2);
    const double m = mu + eta2 * (1.0 - mu);
    const double root = 2.0 * std::sqrt(eta2 * c2 + m * m * s2);
    const double base = (1.0 + mu) + eta2 * (1.0 - mu);
    const double e12 = detail::clamp_term(0.25 * (1.0 - eta2) * (1.0 - mu), "e1");

    ClosedFormTerms out;
    out.theta = theta;
    out.terms["eta"] = {eta};
    out.terms["e"] = {e12, e12, detail::clamp_term(0.25 * (base + root), "e3"),
                      detail::clamp_term(0.25 * (base - root), "e4")};
    return {2.0 + detail::sum_xlog2x(out.terms["e"]), std::move(out)};
}

// Amplitude-damping memory channel:
//   I₂ = -Σ t_i log₂ t_i + ¼Σ u_j log₂ u_j + ¼Σ v_k log₂ v_k + ½Σ w_l log₂ w_l
// with Θ(μ,χ) = ½[(3+μ) + (1-μ)(cos 4χ - 32μ cos²χ sin⁴(χ/2))].
inline std::pair<double, ClosedFormTerms> i2_ad_closed(double chi, double mu, double theta) {
    detail::require_chi(chi);
    detail::require_mu(mu);
    detail::require_in(theta, 0.0, std::numbers::pi / 2, "theta");
    const double s2 = std::pow(std::sin(chi), 2);
    const double c2 = std::pow(std::cos(chi), 2);
    const double s4 = s2 * s2;
    const double cos2chi_sq = std::pow(std::cos(2.0 * chi), 2);
    const double ct = std::pow(std::cos(theta), 2);
    const double st = std::pow(std::sin(theta), 2);

    const double big_theta =
        0.5 * ((3.0 + mu) + (1.0 - mu) * (std::cos(4.0 * chi) - 32.0 * mu * c2 * std::pow(std::sin(chi / 2.0), 4)));

    const double t1 = 0.25 * (1.0 + s2) * ((1.0 + s2) - mu * s2);
    const double t2 = 0.25 * (1.0 - s2) * ((1.0 - s2) + mu * s2);
    const double t34 = 0.25 * (1.0 - (1.0 - mu) * s4);

    const double u12 = (1.0 - mu) * ct * c2 * s2;
    const double u_root = 0.5 * std::sqrt(std::max(0.0, ct * ct * cos2chi_sq + st * st + ct * st * big_theta));
    const double v12 = (1.0 - mu) * st * c2 * s2;
    const double v_root = 0.5 * std::sqrt(std::max(0.0, st * st * cos2chi_sq + ct * ct + ct * st * big_theta));

    const double w1 = mu + (1.0 - mu) * c2;
    const double w2 = (1.0 - mu) * s2;

    ClosedFormTerms out;
    out.theta = theta;
    out.terms["Theta"] = {big_theta};
    out.terms["t"] = {detail::clamp_term(t1, "t1"), detail::clamp_term(t2, "t2"), detail::clamp_term(t34, "t3"),
                      detail::clamp_term(t34, "t4")};
    out.terms["u"] = {detail::clamp_term(u12, "u1"), detail::clamp_term(u12, "u2"),
                      detail::clamp_term(0.5 - u12 + u_root, "u3"), detail::clamp_term(0.5 - u12 - u_root, "u4")};
    out.terms["v"] = {detail::clamp_term(v12, "v1"), detail::clamp_term(v12, "v2"),
                      detail::clamp_term(0.5 - v12 + v_root, "v3"), detail::clamp_term(0.5 - v12 - v_root, "v4")};
    out.terms["w"] = {detail::clamp_term(w1, "w1"), detail::clamp_term(w2, "w2")};

    const double i2 = -detail::sum_xlog2x(out.terms["t"]) + 0.25 * detail::sum_xlog2x(out.terms["u"]) +
                      0.25 * detail::sum_xlog2x(out.terms["v"]) + 0.5 * detail::sum_xlog2x(out.terms["w"]);
    return {i2, std::move(out)};
}

// Closed form for the families that have one.
inline std::optional<double> i2_closed(ChannelFamily family, double param, double mu, double theta) {
    switch (family) {
        case ChannelFamily::amplitude_damping: return i2_ad_closed(param, mu, theta).first;
        case ChannelFamily::depolarizing: return i2_depolarizing_closed(param, mu, theta).first;
        case ChannelFamily::dephasing: return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Thresholds
// ---------------------------------------------------------------------------

// μ_t = η/(1+η), stated for 0 < η < 1.
inline double depolarizing_threshold_closed(double eta) {
    if (!(eta > 0.0 && eta < 1.0)) {
        throw ParameterError("depolarizing_threshold_closed: eta = " + std::to_string(eta) + " outside (0, 1)");
    }
    return eta / (1.0 + eta);
}

inline double depolarizing_p_from_eta(double eta) { return 0.75 * (1.0 - eta); }

struct ThresholdResult {
    ChannelFamily family = ChannelFamily::amplitude_damping;
    double chi_or_p = 0.0;
    std::optional<double> mu_t;
    std::pair<double, double> bracket{0.0, 1.0};
    int iterations = 0;
};

inline constexpr int kThresholdSeeds = 17;
// |g| at or below this counts as zero when looking for a sign change.
inline constexpr double kThresholdZeroBand = 1e-12;

// g(μ) = I₂(θ = π/4) - I₂(θ = 0), from the density-matrix pipeline.
inline double entanglement_advantage(ChannelFamily family, double param, double mu) {
    return i2_numeric(family, param, mu, std::numbers::pi / 4) - i2_numeric(family, param, mu, 0.0);
}

// Seeds μ on 17 equally spaced points of [0, 1], takes the first (lowest μ)
// strict sign change of g and bisects it down to width `tol`.
inline ThresholdResult threshold_numeric(ChannelFamily family, double param, double tol) {
    if (!(tol > 0.0)) throw ParameterError("threshold_numeric: tol must be positive");
    if (family == ChannelFamily::amplitude_damping) {
        detail::require_chi(param);
    } else {
        detail::require_p(param);
    }
    auto g = [&](double mu) { return entanglement_advantage(family, param, mu); };
    auto sign = [](double v) { return v > kThresholdZeroBand ? 1 : (v < -kThresholdZeroBand ? -1 : 0); };

    ThresholdResult result;
    result.family = family;
    result.chi_or_p = param;

    std::optional<std::pair<double, int>> last;  // (μ, sign) of the last nonzero seed
    for (int i = 0; i < kThresholdSeeds; ++i) {
        const double mu = static_cast<double>(i) / (kThresholdSeeds - 1);
        const int s = sign(g(mu));
        if (s == 0) continue;
        if (last && last->second != s) {
            double lo = last->first, hi = mu;
            const int s_lo = last->second;
            int iterations = 0;
            while (hi - lo > tol) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                ++iterations;
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((gm > 0.0 ? 1 : -1) == s_lo) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            result.mu_t = 0.5 * (lo + hi);
            result.bracket = {lo, hi};
            result.iterations = iterations;
            return result;
        }
        last = {mu, s};
    }
    result.bracket = {0.0, 1.0};
    return result;
}

// ---------------------------------------------------------------------------
// Perfect-memory inequality for product inputs
// ---------------------------------------------------------------------------

struct InequalityRow {
    double chi = 0.0;
    double lhs = 0.0;  // I₂(θ=0, μ=1, χ)
    double rhs = 0.0;  // I₂(θ=0, μ=0, χ)
    bool holds = false;
};

inline std::vector<InequalityRow> product_memory_inequality(const std::vector<double>& chi_grid) {
    std::vector<InequalityRow> rows;
    rows.reserve(chi_grid.size());
    for (double chi : chi_grid) {
        detail::require_chi(chi);
        const double lhs = i2_numeric(ChannelFamily::amplitude_damping, chi, 1.0, 0.0);
        const double rhs = i2_numeric(ChannelFamily::amplitude_damping, chi, 0.0, 0.0);
        rows.push_back({chi, lhs, rhs, lhs >= rhs - kResidualTol});
    }
    return rows;
}

// count equally spaced points on [lo, hi]; a single point is lo.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    if (count > 1) out.back() = hi;
    return out;
}

}  // namespace qmemch
