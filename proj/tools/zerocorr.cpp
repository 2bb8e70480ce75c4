// zerocorr: scaling-limit zero correlations of Gaussian random sections.

#include <algorithm>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zerocorr/commands.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/io.hpp"

namespace {

using zerocorr::RunConfig;

void add_common(CLI::App* sub, RunConfig& cfg, std::string& config_path) {
    sub->add_option("--seed", cfg.seed, "RNG seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker count (overrides ZEROCORR_THREADS)");
    sub->add_option("--format", cfg.format, "csv or json")->capture_default_str();
    sub->add_option("-o,--output", cfg.output, "output file (default stdout)");
    sub->add_flag("--assert", cfg.check, "exit 4 when an acceptance check fails");
    sub->add_option("--config", config_path, "key=value file; command-line flags win");
}

// Splices "--key=value" pairs from --config files in after the subcommand
// name, skipping keys the command line already sets.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty() || args.size() < 2) return args;
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    std::vector<std::string> extra;
    for (auto [key, value] : zerocorr::read_config_file(path)) {
        std::replace(key.begin(), key.end(), '_', '-');
        if (key == "config") continue;
        const std::string flag = "--" + key;
        if (!given(flag)) extra.push_back(flag + "=" + value);
    }
    args.insert(args.begin() + 2, extra.begin(), extra.end());
    return args;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string config_path;
    CLI::App app{"Zero correlations of Gaussian random holomorphic sections"};
    app.require_subcommand(1);
    app.set_version_flag("--version", zerocorr::kVersion);

    auto* pair = app.add_subcommand("pair-curve", "closed-form vs Wick pair correlation over an r grid");
    pair->add_option("--m", cfg.m, "complex dimension")->capture_default_str();
    pair->add_option("--r-grid", cfg.r_grid, "separations")->delimiter(',');

    auto* limit = app.add_subcommand("limit-corr", "scaling-limit correlations of configurations in a points file");
    limit->add_option("--points", cfg.points_file, "points file")->required();
    limit->add_option("--k", cfg.k, "codimension")->capture_default_str();
    limit->add_option("--method", cfg.method, "wick, mc or both")->capture_default_str();
    limit->add_option("--samples", cfg.samples, "Monte Carlo draws (default 200000)");

    auto* finite = app.add_subcommand("finite-n", "finite-N pair correlation on CP^1 against the limit");
    finite->add_option("--m", cfg.m, "complex dimension (1 only)")->capture_default_str();
    finite->add_option("--r", cfg.r, "scaled separation")->capture_default_str();
    finite->add_option("--N-grid", cfg.N_grid, "degrees")->delimiter(',');
    cfg.N_grid.clear();

    auto* conn = app.add_subcommand("connected", "connected correlations and their decay bound");
    conn->add_option("--n", cfg.n, "number of points")->capture_default_str();
    conn->add_option("--k", cfg.k, "codimension")->capture_default_str();
    conn->add_option("--m", cfg.m, "complex dimension")->capture_default_str();
    conn->add_option("--family", cfg.family, "polygon or line")->capture_default_str();
    conn->add_option("--r-grid", cfg.r_grid, "side lengths")->delimiter(',');
    conn->add_option("--points", cfg.points_file, "points file instead of a family");

    auto* mc = app.add_subcommand("mc-pair", "Monte Carlo pair correlation of SU(2) polynomial zeros");
    mc->add_option("--N", cfg.N, "degree")->capture_default_str();
    mc->add_option("--samples", cfg.samples, "polynomials (default 2000)");
    mc->add_option("--bins", cfg.bins, "histogram bins")->capture_default_str();
    mc->add_option("--u-max", cfg.u_max, "largest scaled distance")->capture_default_str();
    mc->add_option("--u-lo", cfg.u_lo, "acceptance window start")->capture_default_str();
    mc->add_option("--u-hi", cfg.u_hi, "acceptance window end")->capture_default_str();
    mc->add_flag("--baseline", cfg.baseline, "also run the i.i.d. uniform baseline");

    auto* kern = app.add_subcommand("kernel-check", "scaled Szego kernel against the Heisenberg model");
    kern->add_option("--m", cfg.m, "complex dimension")->capture_default_str();
    kern->add_option("--N-grid", cfg.N_grid, "degrees")->delimiter(',');
    kern->add_option("--offsets", cfg.offsets, "offsets |u|, |v|")->delimiter(',');
    kern->add_option("--theta", cfg.theta)->capture_default_str();
    kern->add_option("--phi", cfg.phi)->capture_default_str();

    for (auto* sub : {pair, limit, finite, conn, mc, kern}) add_common(sub, cfg, config_path);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const zerocorr::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return zerocorr::kExitUsage;
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : zerocorr::kExitUsage;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    return zerocorr::run_command(cfg, std::cout, std::cerr);
}
