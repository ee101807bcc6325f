#pragma once

// Machine-readable front-end logic shared by the qmemch command-line tool:
// range specs, parameter sweeps, CSV/JSON formatting and the aggregated
// verification report.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qmemch/capacity.hpp"
#include "qmemch/channels.hpp"
#include "qmemch/lindblad.hpp"
#include "qmemch/linalg.hpp"

namespace qmemch {

// Bad user input on the command line (exit code 2).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Reals are printed with 12 significant digits.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Range specs: lo:hi:count
// ---------------------------------------------------------------------------

struct RangeSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count = 1;

    std::vector<double> points() const { return linspace(lo, hi, count); }
};

inline RangeSpec parse_range(std::string_view text, double domain_lo, double domain_hi, std::string_view name) {
    const auto fail = [&](const std::string& why) {
        throw UsageError("bad " + std::string(name) + " range '" + std::string(text) + "': " + why);
    };
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    parts.push_back(current);
    if (parts.size() != 3) fail("expected lo:hi:count");

    RangeSpec spec;
    try {
        std::size_t used = 0;
        spec.lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) fail("lo is not a number");
        spec.hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) fail("hi is not a number");
        const long long count = std::stoll(parts[2], &used);
        if (used != parts[2].size()) fail("count is not an integer");
        if (count < 1) fail("count must be at least 1");
        spec.count = static_cast<std::size_t>(count);
    } catch (const std::logic_error&) {
        fail("not a number");
    }
    if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi)) fail("bounds must be finite");
    if (spec.lo > spec.hi) fail("lo exceeds hi");
    if (spec.lo < domain_lo || spec.hi > domain_hi) {
        fail("outside [" + format_real(domain_lo) + ", " + format_real(domain_hi) + "]");
    }
    return spec;
}

inline double param_upper_bound(ChannelFamily family) {
    return family == ChannelFamily::amplitude_damping ? std::numbers::pi / 2 : 1.0;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct SweepRow {
    ChannelFamily channel = ChannelFamily::amplitude_damping;
    double mu = 0.0;
    double param = 0.0;
    double theta = 0.0;
    double i2_numeric = 0.0;
    std::optional<double> i2_closed;
    std::optional<double> delta;
};

inline constexpr std::string_view kSweepHeader = "channel,mu,param,theta,i2_numeric,i2_closed,delta";

// Rows in lexicographic (mu, param, theta) order.
inline std::vector<SweepRow> run_sweep(ChannelFamily family, const RangeSpec& mu, const RangeSpec& param,
                                       const RangeSpec& theta) {
    std::vector<SweepRow> rows;
    for (double m : mu.points()) {
        for (double x : param.points()) {
            const KrausSet channel = family_memory_channel(family, m, x);
            for (double th : theta.points()) {
                SweepRow row{family, m, x, th, mutual_information_numeric(channel, theta_ensemble(th)), {}, {}};
                row.i2_closed = i2_closed(family, x, m, th);
                if (row.i2_closed) row.delta = std::abs(row.i2_numeric - *row.i2_closed);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        out << to_tag(r.channel) << ',' << format_real(r.mu) << ',' << format_real(r.param) << ','
            << format_real(r.theta) << ',' << format_real(r.i2_numeric) << ','
            << (r.i2_closed ? format_real(*r.i2_closed) : "") << ',' << (r.delta ? format_real(*r.delta) : "")
            << '\n';
    }
}

// ---------------------------------------------------------------------------
// Threshold / inequality output
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json threshold_json(const ThresholdResult& r) {
    nlohmann::ordered_json j;
    j["channel"] = std::string(to_tag(r.family));
    j["param"] = r.chi_or_p;
    j["mu_t"] = r.mu_t ? nlohmann::ordered_json(*r.mu_t) : nlohmann::ordered_json(nullptr);
    j["bracket"] = {r.bracket.first, r.bracket.second};
    j["iterations"] = r.iterations;
    return j;
}

inline void write_inequality_csv(std::ostream& out, const std::vector<InequalityRow>& rows) {
    out << "chi,i2_mu1,i2_mu0,holds\n";
    for (const auto& r : rows) {
        out << format_real(r.chi) << ',' << format_real(r.lhs) << ',' << format_real(r.rhs) << ','
            << (r.holds ? "true" : "false") << '\n';
    }
}

// ---------------------------------------------------------------------------
// Verification report
// ---------------------------------------------------------------------------

struct ReportSection {
    std::string name;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::optional<std::string> error;  // set when the check could not be evaluated
};

struct VerificationReport {
    std::vector<ReportSection> sections;
    bool overall = false;

    const ReportSection& section(std::string_view name) const {
        for (const auto& s : sections)
            if (s.name == name) return s;
        throw std::out_of_range("no report section '" + std::string(name) + "'");
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["sections"] = nlohmann::ordered_json::array();
        for (const auto& s : sections) {
            nlohmann::ordered_json entry{{"name", s.name},
                                         {"max_residual", s.error ? nlohmann::ordered_json(nullptr)
                                                                  : nlohmann::ordered_json(s.max_residual)},
                                         {"threshold", s.threshold},
                                         {"pass", s.pass}};
            if (s.error) entry["error"] = *s.error;
            j["sections"].push_back(std::move(entry));
        }
        j["overall"] = overall;
        return j;
    }
};

// Hooks that let tests corrupt one ingredient and watch the report catch it.
struct FaultInjection {
    std::function<KrausSet(double chi)> ad_correlated;        // replaces ad_correlated_kraus2
    std::optional<double> ad_lambda33;                         // overrides λ33 of the AD catalog (in units of α)
};

struct VerifyConfig {
    std::size_t grid_points = 21;                 // per-parameter grid for CPTP checks
    std::size_t random_states = 50;               // per channel, apply invariants
    std::vector<double> times{0.0, 0.1, 0.5, 1.0, 2.0, 5.0};
    std::size_t equivalence_states = 20;
    std::size_t closed_grid = 11;                 // param and mu points; theta uses 5
    double gamma_rate = 1.0;
    double alpha_rate = 1.0;
    std::uint64_t seed = 20040915;
    FaultInjection faults;
};

namespace detail {

inline EigenoperatorCatalog ad_catalog_for(const VerifyConfig& cfg) {
    EigenoperatorCatalog cat = catalog_ad_correlated(cfg.alpha_rate);
    if (cfg.faults.ad_lambda33) {
        for (auto& e : cat.entries)
            if (e.label == "R33") e.eigenvalue = *cfg.faults.ad_lambda33 * cfg.alpha_rate;
    }
    return cat;
}

inline KrausSet ad_correlated_for(const VerifyConfig& cfg, double chi) {
    return cfg.faults.ad_correlated ? cfg.faults.ad_correlated(chi) : ad_correlated_kraus2(chi);
}

// Worst violation among trace defect, Hermiticity defect and negative
// eigenvalue of K(ρ) for random ρ.
template <class Rng>
double apply_invariant_violation(const KrausSet& k, std::size_t states, Rng& rng) {
    double worst = 0.0;
    for (std::size_t s = 0; s < states; ++s) {
        const ComplexMatrix out = apply_raw(k, random_density_matrix(k.dim, rng));
        worst = std::max(worst, std::abs(trace(out) - 1.0));
        const double skew = frobenius_distance(out, adjoint(out));
        worst = std::max(worst, skew);
        const ComplexMatrix herm = scale(0.5, out + adjoint(out));
        worst = std::max(worst, std::max(0.0, -hermitian_eigen(herm, 1.0).eigenvalues.front()));
    }
    return worst;
}

}  // namespace detail

inline VerificationReport run_verify(const VerifyConfig& cfg = {}) {
    VerificationReport report;
    auto run = [&](const std::string& name, double threshold, auto&& body) {
        try {
            const double residual = body();
            report.sections.push_back({name, residual, threshold, std::isfinite(residual) && residual <= threshold, {}});
        } catch (const std::exception& e) {
            report.sections.push_back({name, std::numeric_limits<double>::infinity(), threshold, false, e.what()});
        }
    };

    const std::vector<double> chis = linspace(0.0, std::numbers::pi / 2, cfg.grid_points);
    const std::vector<double> ps = linspace(0.0, 1.0, cfg.grid_points);
    const std::vector<double> mus = linspace(0.0, 1.0, cfg.grid_points);

    run("cptp", 1e-12, [&] {
        double worst = 0.0;
        for (double chi : chis) {
            worst = std::max({worst, check_cptp(amplitude_damping_kraus(chi)), check_cptp(ad_uncorrelated_kraus2(chi)),
                              check_cptp(detail::ad_correlated_for(cfg, chi))});
        }
        for (double p : ps) {
            worst = std::max({worst, check_cptp(dephasing_uncorrelated_kraus(p)),
                              check_cptp(dephasing_correlated_kraus(p)),
                              check_cptp(depolarizing_uncorrelated_kraus2(p)),
                              check_cptp(depolarizing_correlated_kraus2(p))});
        }
        for (double mu : mus) {
            worst = std::max({worst,
                              check_cptp(memory_channel(ad_uncorrelated_kraus2(std::numbers::pi / 5),
                                                        detail::ad_correlated_for(cfg, std::numbers::pi / 5), mu)),
                              check_cptp(family_memory_channel(ChannelFamily::dephasing, mu, 0.3)),
                              check_cptp(family_memory_channel(ChannelFamily::depolarizing, mu, 0.3))});
        }
        return worst;
    });

    run("apply_invariants", kResidualTol, [&] {
        std::mt19937_64 rng(cfg.seed);
        const double chi = std::numbers::pi / 5;
        const std::vector<KrausSet> channels{
            amplitude_damping_kraus(chi),
            ad_uncorrelated_kraus2(chi),
            detail::ad_correlated_for(cfg, chi),
            memory_channel(ad_uncorrelated_kraus2(chi), detail::ad_correlated_for(cfg, chi), 0.4),
            dephasing_uncorrelated_kraus(0.3),
            dephasing_correlated_kraus(0.3),
            depolarizing_uncorrelated_kraus2(0.3),
            depolarizing_correlated_kraus2(0.3),
        };
        double worst = 0.0;
        for (const auto& k : channels)
            worst = std::max(worst, detail::apply_invariant_violation(k, cfg.random_states, rng));
        return worst;
    });

    const EigenoperatorCatalog dephasing_cat = catalog_dephasing_correlated(cfg.gamma_rate);
    const EigenoperatorCatalog ad_cat = detail::ad_catalog_for(cfg);
    auto max_of = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };

    run("eigen_dephasing", 1e-12,
        [&] { return max_of(verify_eigen(dephasing_correlated_spec(cfg.gamma_rate), dephasing_cat)); });
    run("eigen_amplitude_damping", 1e-12,
        [&] { return max_of(verify_eigen(ad_correlated_spec(cfg.alpha_rate), ad_cat)); });

    EigenoperatorCatalog dephasing_dual, ad_dual;
    run("duality_dephasing", kResidualTol, [&] {
        dephasing_dual = dual_basis(dephasing_cat);
        return duality_residual(dephasing_dual);
    });
    run("duality_amplitude_damping", kResidualTol, [&] {
        ad_dual = dual_basis(ad_cat);
        return duality_residual(ad_dual);
    });

    run("kraus_lindblad_dephasing", kResidualTol, [&] {
        double worst = 0.0;
        for (double t : cfg.times) {
            worst = std::max(worst, kraus_equivalence(
                                        dephasing_dual, t, dephasing_correlated_kraus,
                                        [&](double tt) { return dephasing_p_from_time(cfg.gamma_rate * tt); },
                                        cfg.equivalence_states, cfg.seed));
        }
        return worst;
    });
    run("kraus_lindblad_amplitude_damping", kResidualTol, [&] {
        double worst = 0.0;
        for (double t : cfg.times) {
            worst = std::max(worst, kraus_equivalence(
                                        ad_dual, t, [&](double chi) { return detail::ad_correlated_for(cfg, chi); },
                                        [&](double tt) { return ad_chi_from_time(cfg.alpha_rate * tt); },
                                        cfg.equivalence_states, cfg.seed));
        }
        return worst;
    });
    run("dephasing_uncorrelated_lindblad", kResidualTol, [&] {
        std::mt19937_64 rng(cfg.seed);
        const LindbladSpec spec = dephasing_uncorrelated_spec(cfg.gamma_rate);
        double worst = 0.0;
        for (double t : cfg.times) {
            const KrausSet k = dephasing_uncorrelated_kraus(dephasing_p_from_time(cfg.gamma_rate * t));
            const ComplexMatrix propagator = expm(scale(t, superoperator_matrix(spec)));
            for (std::size_t s = 0; s < cfg.equivalence_states; ++s) {
                const ComplexMatrix rho = random_density_matrix(4, rng);
                const ComplexMatrix lindblad = devectorize(matmul(propagator, vectorize(rho)), 4, 4);
                worst = std::max(worst, frobenius_distance(lindblad, apply_raw(k, rho)));
            }
        }
        return worst;
    });

    const std::vector<double> thetas = linspace(0.0, std::numbers::pi / 2, 5);
    const std::vector<double> grid_mu = linspace(0.0, 1.0, cfg.closed_grid);
    auto closed_vs_numeric = [&](ChannelFamily family) {
        double worst = 0.0;
        for (double x : linspace(0.0, param_upper_bound(family), cfg.closed_grid)) {
            for (double mu : grid_mu) {
                const KrausSet channel = family == ChannelFamily::amplitude_damping
                                             ? memory_channel(ad_uncorrelated_kraus2(x),
                                                              detail::ad_correlated_for(cfg, x), mu)
                                             : family_memory_channel(family, mu, x);
                for (double th : thetas) {
                    const double numeric = mutual_information_numeric(channel, theta_ensemble(th));
                    worst = std::max(worst, std::abs(numeric - *i2_closed(family, x, mu, th)));
                }
            }
        }
        return worst;
    };
    run("closed_vs_numeric_amplitude_damping", 1e-9, [&] { return closed_vs_numeric(ChannelFamily::amplitude_damping); });
    run("closed_vs_numeric_depolarizing", 1e-9, [&] { return closed_vs_numeric(ChannelFamily::depolarizing); });

    report.overall = std::all_of(report.sections.begin(), report.sections.end(), [](const auto& s) { return s.pass; });
    return report;
}

}  // namespace qmemch
