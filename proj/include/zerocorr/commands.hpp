#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "zerocorr/table.hpp"

namespace zerocorr {

inline constexpr const char* kVersion = "0.1.0";

/// Parameters shared by all subcommands. A field a command does not read is
/// ignored; `samples == 0` selects the command's default.
struct RunConfig {
    std::string command;
    int n = 2;
    int k = 1;
    int m = 1;
    int N = 200;
    std::vector<int> N_grid{64, 256, 1024};
    std::vector<double> r_grid;
    double r = 1.0;
    std::string points_file;
    std::size_t samples = 0;
    int bins = 40;
    double u_max = 4.0;
    double u_lo = 0.3;  // acceptance window of mc-pair
    double u_hi = 3.0;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: environment or OpenMP default
    std::string method = "wick";
    std::string family = "polygon";
    std::vector<double> offsets{0.0, 0.5, 1.0, 2.0};
    double theta = 0.0;
    double phi = 0.0;
    bool baseline = false;
    bool check = false;  // --assert
    std::string output;  // empty: stdout
    std::string format = "csv";
};

struct CommandResult {
    ResultTable table;
    std::vector<std::string> failed_checks;  // only filled when check is set
};

CommandResult cmd_pair_curve(const RunConfig& cfg);
CommandResult cmd_limit_corr(const RunConfig& cfg);
CommandResult cmd_finite_n(const RunConfig& cfg);
CommandResult cmd_connected(const RunConfig& cfg);
CommandResult cmd_mc_pair(const RunConfig& cfg);
CommandResult cmd_kernel_check(const RunConfig& cfg);

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitNumerical = 3, kExitStatistical = 4 };

/// Runs cfg.command, writes the table to cfg.output (or `out`) and maps
/// errors to exit codes. Nothing is written unless the command succeeds.
int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace zerocorr
