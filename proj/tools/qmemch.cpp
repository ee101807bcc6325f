// qmemch: verification reports, I₂ sweeps and memory thresholds for the
// correlated two-use qubit channels.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "qmemch/capacity.hpp"
#include "qmemch/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

double parse_real(const std::string& text, const char* name) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(value)) {
        throw qmemch::UsageError(std::string(name) + " '" + text + "' is not a finite number");
    }
    return value;
}

qmemch::ChannelFamily parse_channel(const std::string& tag) {
    try {
        return qmemch::parse_family(tag);
    } catch (const qmemch::ParameterError& e) {
        throw qmemch::UsageError(e.what());
    }
}

int cmd_verify() {
    const qmemch::VerificationReport report = qmemch::run_verify();
    std::cout << report.to_json().dump(2) << '\n';
    for (const auto& s : report.sections) {
        if (!s.pass) std::cerr << "verify: check '" << s.name << "' failed" << (s.error ? ": " + *s.error : "") << '\n';
    }
    return report.overall ? kExitOk : kExitVerifyFailed;
}

int cmd_sweep(const std::string& channel, const std::string& mu_spec, const std::string& param_spec,
              const std::string& theta_spec, const std::string& out_path) {
    const auto family = parse_channel(channel);
    const auto mu = qmemch::parse_range(mu_spec, 0.0, 1.0, "mu");
    const auto param = qmemch::parse_range(param_spec, 0.0, qmemch::param_upper_bound(family), "param");
    const auto theta = qmemch::parse_range(theta_spec, 0.0, std::numbers::pi / 2, "theta");
    const auto rows = qmemch::run_sweep(family, mu, param, theta);

    if (out_path.empty()) {
        qmemch::write_sweep_csv(std::cout, rows);
        return kExitOk;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
        std::cerr << "sweep: cannot open '" << out_path << "' for writing\n";
        return kExitIo;
    }
    qmemch::write_sweep_csv(file, rows);
    file.close();
    if (!file) {
        std::cerr << "sweep: write to '" << out_path << "' failed\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_threshold(const std::string& channel, const std::string& param_text, const std::string& tol_text) {
    const auto family = parse_channel(channel);
    const double param = parse_real(param_text, "param");
    const double tol = parse_real(tol_text, "tol");
    if (!(tol > 0.0)) throw qmemch::UsageError("tol must be positive");
    if (param < 0.0 || param > qmemch::param_upper_bound(family)) {
        throw qmemch::UsageError("param " + param_text + " outside the domain of channel '" + channel + "'");
    }
    std::cout << qmemch::threshold_json(qmemch::threshold_numeric(family, param, tol)).dump() << '\n';
    return kExitOk;
}

int cmd_inequality(long long grid_count) {
    if (grid_count < 2) throw qmemch::UsageError("grid_count must be at least 2");
    const auto grid = qmemch::linspace(0.0, std::numbers::pi / 2, static_cast<std::size_t>(grid_count));
    qmemch::write_inequality_csv(std::cout, qmemch::product_memory_inequality(grid));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlated qubit channels: Kraus/Lindblad cross-checks and two-use mutual information"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "Run every consistency check and print a JSON report");

    std::string sweep_channel, mu_spec, param_spec, theta_spec, out_path;
    auto* sweep = app.add_subcommand("sweep", "Tabulate I2 over a (mu, param, theta) grid as CSV");
    sweep->add_option("channel", sweep_channel, "ad | dephasing | dp")->required();
    sweep->add_option("mu_spec", mu_spec, "lo:hi:count")->required();
    sweep->add_option("param_spec", param_spec, "lo:hi:count (chi for ad, p otherwise)")->required();
    sweep->add_option("theta_spec", theta_spec, "lo:hi:count")->required();
    sweep->add_option("--out", out_path, "Output CSV path (default: stdout)");

    std::string th_channel, th_param, th_tol;
    auto* threshold = app.add_subcommand("threshold", "Locate the memory threshold mu_t and print JSON");
    threshold->add_option("channel", th_channel, "ad | dephasing | dp")->required();
    threshold->add_option("param", th_param, "chi for ad, p otherwise")->required();
    threshold->add_option("tol", th_tol, "bisection tolerance")->required();

    long long grid_count = 0;
    auto* inequality = app.add_subcommand("inequality", "Check I2(mu=1) >= I2(mu=0) for product inputs");
    inequality->add_option("grid_count", grid_count, "number of chi points in [0, pi/2]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) return cmd_verify();
        if (*sweep) return cmd_sweep(sweep_channel, mu_spec, param_spec, theta_spec, out_path);
        if (*threshold) return cmd_threshold(th_channel, th_param, th_tol);
        if (*inequality) return cmd_inequality(grid_count);
    } catch (const qmemch::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
    return kExitUsage;
}
