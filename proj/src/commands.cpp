#include "zerocorr/commands.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "zerocorr/connected.hpp"
#include "zerocorr/correlations.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/io.hpp"
#include "zerocorr/model_kernels.hpp"
#include "zerocorr/montecarlo.hpp"
#include "zerocorr/parallel.hpp"

namespace zerocorr {
namespace {

std::string join(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + format_double(xs[i]);
    return s;
}

std::string join(const std::vector<int>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + std::to_string(xs[i]);
    return s;
}

void common_meta(ResultTable& t, const RunConfig& cfg, const std::string& method) {
    t.set_meta("version", kVersion);
    t.set_meta("command", cfg.command);
    t.set_meta("seed", std::to_string(cfg.seed));
    t.set_meta("method", method);
}

std::vector<Complex> on_axis(double x, int m) {
    std::vector<Complex> p(static_cast<std::size_t>(m), Complex(0.0));
    p[0] = x;
    return p;
}

PointConfiguration pair_at(double r, int m) {
    return PointConfiguration({on_axis(0.0, m), on_axis(r, m)});
}

// Lexicographic order on coordinates, so the output does not depend on the
// order points were listed in.
PointConfiguration canonical(const PointConfiguration& c) {
    auto pts = c.points();
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        for (std::size_t q = 0; q < a.size(); ++q) {
            if (a[q].real() != b[q].real()) return a[q].real() < b[q].real();
            if (a[q].imag() != b[q].imag()) return a[q].imag() < b[q].imag();
        }
        return false;
    });
    return PointConfiguration(std::move(pts));
}

void require_positive_grid(const std::vector<double>& grid, const char* what) {
    if (grid.empty()) throw InputError(std::string(what) + " is empty");
    for (double r : grid) {
        if (!(r > 0.0) || !std::isfinite(r)) throw InputError(std::string(what) + " must hold positive reals");
    }
}

double median(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const std::size_t h = xs.size() / 2;
    return xs.size() % 2 ? xs[h] : 0.5 * (xs[h - 1] + xs[h]);
}

// Maps a mask over the points of `outer` (local indices) to global indices.
unsigned expand(unsigned local, unsigned outer) {
    unsigned global = 0;
    int i = 0;
    for (int bit = 0; bit < 32; ++bit) {
        if (!(outer >> bit & 1u)) continue;
        if (local >> i & 1u) global |= 1u << bit;
        ++i;
    }
    return global;
}

std::vector<PointConfiguration> connected_family(const RunConfig& cfg) {
    if (!cfg.points_file.empty()) return read_points_file(cfg.points_file);
    if (cfg.n < 1) throw InputError("n must be positive");
    std::vector<double> scales = cfg.r_grid;
    if (scales.empty()) {
        if (cfg.n == 2) {
            for (double r = 1.0; r <= 5.0 + 1e-12; r += 0.5) scales.push_back(r);
        } else {
            scales = {1.0, 2.0, 3.0};
        }
    }
    require_positive_grid(scales, "scale grid");
    std::vector<PointConfiguration> family;
    for (double s : scales) {
        std::vector<std::vector<Complex>> pts;
        for (int p = 0; p < cfg.n; ++p) {
            Complex z;
            if (cfg.family == "line") {
                z = s * p;
            } else if (cfg.family == "polygon") {
                // Regular polygon with side s, first vertex at the origin.
                const double circum = cfg.n > 1 ? s / (2.0 * std::sin(kPi / cfg.n)) : 0.0;
                z = circum * (std::polar(1.0, 2.0 * kPi * p / cfg.n - kPi / 2 - kPi / cfg.n)
                              - std::polar(1.0, -kPi / 2 - kPi / cfg.n));
            } else {
                throw InputError("unknown family '" + cfg.family + "' (polygon, line)");
            }
            auto point = on_axis(0.0, cfg.m);
            point[0] = z;
            pts.push_back(std::move(point));
        }
        family.emplace_back(std::move(pts));
    }
    return family;
}

}  // namespace

CommandResult cmd_pair_curve(const RunConfig& cfg) {
    require_positive_grid(cfg.r_grid, "r grid");
    if (cfg.m < 1) throw InputError("m must be positive");
    CommandResult res;
    ResultTable& t = res.table;
    common_meta(t, cfg, "analytic+wick");
    t.set_meta("m", std::to_string(cfg.m));
    t.set_meta("r_grid", join(cfg.r_grid));
    t.add_column("r", Provenance::input);
    t.add_column("t", Provenance::input);
    t.add_column("ktilde_closed", Provenance::analytic);
    t.add_column("ktilde_wick", Provenance::wick);
    t.add_column("abs_diff", Provenance::derived);
    double worst = 0.0;
    for (double r : cfg.r_grid) {
        const double tt = 0.5 * r * r;
        const double closed = pair_correlation_closed(tt, cfg.m);
        const double wick =
            limit_correlation({2, 1, cfg.m, pair_at(r, cfg.m), Method::exact_wick, {}}).normalized;
        const double diff = std::abs(closed - wick);
        worst = std::max(worst, diff);
        t.add_row({r, tt, closed, wick, diff});
    }
    t.set_meta("max_abs_diff", format_double(worst));
    if (worst > 1e-9) res.failed_checks.push_back("closed form and Wick differ by " + format_double(worst));
    return res;
}

CommandResult cmd_limit_corr(const RunConfig& cfg) {
    if (cfg.points_file.empty()) throw InputError("limit-corr needs --points");
    if (cfg.method != "wick" && cfg.method != "mc" && cfg.method != "both") {
        throw InputError("limit-corr method must be wick, mc or both");
    }
    const auto configs = read_points_file(cfg.points_file);
    const bool want_wick = cfg.method != "mc";
    const bool want_mc = cfg.method != "wick";
    MonteCarloOptions mc;
    mc.samples = cfg.samples ? cfg.samples : 200000;
    mc.seed = cfg.seed;

    CommandResult res;
    ResultTable& t = res.table;
    common_meta(t, cfg, cfg.method);
    t.set_meta("k", std::to_string(cfg.k));
    t.set_meta("points_file", cfg.points_file);
    if (want_mc) t.set_meta("samples", std::to_string(mc.samples));
    t.add_column("config", Provenance::input);
    t.add_column("n", Provenance::input);
    t.add_column("k", Provenance::input);
    t.add_column("m", Provenance::input);
    if (want_wick) {
        t.add_column("k_wick", Provenance::wick);
        t.add_column("ktilde_wick", Provenance::wick);
    }
    if (want_mc) {
        t.add_column("ktilde_mc", Provenance::mc);
        t.add_column("ktilde_mc_se", Provenance::mc);
    }
    if (want_wick && want_mc) t.add_column("zscore", Provenance::derived);

    for (std::size_t i = 0; i < configs.size(); ++i) {
        const PointConfiguration c = canonical(configs[i]);
        CorrelationRequest req{c.n(), cfg.k, c.m(), c, Method::exact_wick, mc};
        std::vector<Cell> row{static_cast<std::int64_t>(i), static_cast<std::int64_t>(c.n()),
                              static_cast<std::int64_t>(cfg.k), static_cast<std::int64_t>(c.m())};
        double exact = std::nan("");
        if (want_wick) {
            if (c.n() * cfg.k <= kMaxExactDetProduct) {
                const CorrelationValue v = limit_correlation(req);
                exact = v.normalized;
                row.push_back(v.raw);
            } else {
                row.push_back(std::nan(""));
            }
            row.push_back(exact);
        }
        if (want_mc) {
            req.method = Method::monte_carlo;
            const CorrelationValue v = limit_correlation(req);
            const double se = v.std_error.value_or(0.0);
            row.push_back(v.normalized);
            row.push_back(se);
            if (want_wick) {
                const double z = se > 0.0 ? (v.normalized - exact) / se : 0.0;
                row.push_back(z);
                if (std::isfinite(z) && std::abs(z) > 4.0) {
                    res.failed_checks.push_back("config " + std::to_string(i) + ": |z| = "
                                                + format_double(std::abs(z)) + " > 4");
                }
            }
        }
        t.add_row(std::move(row));
    }
    return res;
}

CommandResult cmd_finite_n(const RunConfig& cfg) {
    if (cfg.m != 1) throw InputError("finite-n is implemented on CP^1 only (m = 1)");
    const std::vector<int> grid = cfg.N_grid.empty() ? std::vector<int>{64, 256, 1024} : cfg.N_grid;
    if (grid.size() < 2) throw InputError("N grid needs at least two levels");
    for (int N : grid) {
        if (N < 1) throw InputError("N grid must hold positive degrees");
    }
    if (!(cfg.r > 0.0)) throw InputError("r must be positive");
    const PointConfiguration c = pair_at(cfg.r, 1);
    const double limit = limit_correlation({2, 1, 1, c, Method::exact_wick, {}}).normalized;

    CommandResult res;
    ResultTable& t = res.table;
    common_meta(t, cfg, "wick");
    t.set_meta("r", format_double(cfg.r));
    t.set_meta("N_grid", join(grid));
    t.add_column("N", Provenance::input);
    t.add_column("ktilde_finite", Provenance::wick);
    t.add_column("ktilde_limit", Provenance::wick);
    t.add_column("abs_err", Provenance::derived);
    t.add_column("err_sqrtN", Provenance::derived);
    std::vector<double> logN, logErr;
    double prev = INFINITY;
    bool decreasing = true;
    for (int N : grid) {
        const double fin = finite_correlation_cp1(N, c).normalized;
        const double err = std::abs(fin - limit);
        decreasing = decreasing && err < prev;
        prev = err;
        logN.push_back(std::log(N));
        logErr.push_back(std::log(err));
        t.add_row({static_cast<std::int64_t>(N), fin, limit, err, err * std::sqrt(N)});
    }
    const double slope = fit_slope(logN, logErr);
    t.set_meta("loglog_slope", format_double(slope));
    if (slope > -0.45) res.failed_checks.push_back("log-log slope " + format_double(slope) + " > -0.45");
    if (!decreasing) res.failed_checks.push_back("error does not decrease in N");
    return res;
}

CommandResult cmd_connected(const RunConfig& cfg) {
    const auto family = connected_family(cfg);
    const int n = family.front().n();
    for (const auto& c : family) {
        if (c.n() != n) throw InputError("configuration family mixes point counts");
    }
    const SubsetEvaluator ktilde = limit_evaluator(cfg.k, family.front().m());

    CommandResult res;
    ResultTable& t = res.table;
    common_meta(t, cfg, "wick");
    t.set_meta("n", std::to_string(n));
    t.set_meta("k", std::to_string(cfg.k));
    t.set_meta("m", std::to_string(family.front().m()));
    t.set_meta("family", cfg.points_file.empty() ? cfg.family : cfg.points_file);
    t.add_column("R", Provenance::input);
    t.add_column("ktilde", Provenance::wick);
    t.add_column("connected", Provenance::wick);
    t.add_column("bound", Provenance::derived);
    t.add_column("ratio", Provenance::derived);
    t.add_column("moebius_err", Provenance::derived);

    const unsigned full = (1u << n) - 1u;
    std::vector<double> R2, logT;
    double max_ratio = 0.0, max_moebius = 0.0;
    for (const auto& c : family) {
        std::vector<double> K(full + 1, 0.0), T(full + 1, 0.0);
        for (unsigned mask = 1; mask <= full; ++mask) K[mask] = ktilde(c.subset(mask));
        for (unsigned mask = 1; mask <= full; ++mask) {
            T[mask] = connected_from_subsets(std::popcount(mask),
                                             [&](unsigned local) { return K[expand(local, mask)]; });
        }
        const double rebuilt = moebius_from_subsets(n, [&](unsigned local) { return T[local]; });
        const double moebius = std::abs(rebuilt - K[full]);
        const double bound = decay_bound(c).value;
        const double ratio = std::abs(T[full]) / bound;
        const double R = n > 1 ? c.max_separation() : 0.0;
        max_ratio = std::max(max_ratio, ratio);
        max_moebius = std::max(max_moebius, moebius);
        if (n > 1) {
            R2.push_back(R * R);
            logT.push_back(std::log(std::abs(T[full])));
        }
        t.add_row({R, K[full], T[full], bound, ratio, moebius});
    }
    t.set_meta("max_ratio", format_double(max_ratio));
    t.set_meta("max_moebius_err", format_double(max_moebius));
    if (max_moebius > 1e-10) res.failed_checks.push_back("Moebius round trip error " + format_double(max_moebius));
    if (n >= 3 && R2.size() >= 2) {
        const double slope = fit_slope(R2, logT);
        const double limit = -1.0 / (n - 1) + 0.1;
        t.set_meta("slope", format_double(slope));
        t.set_meta("slope_limit", format_double(limit));
        if (slope > limit) {
            res.failed_checks.push_back("decay slope " + format_double(slope) + " > " + format_double(limit));
        }
    }
    return res;
}

CommandResult cmd_mc_pair(const RunConfig& cfg) {
    PairRunOptions opts;
    opts.N = cfg.N;
    opts.samples = cfg.samples ? cfg.samples : 2000;
    opts.u_max = cfg.u_max;
    opts.bins = cfg.bins;
    opts.seed = cfg.seed;
    if (!(cfg.u_lo < cfg.u_hi)) throw InputError("u window must satisfy u_lo < u_hi");
    const PairCorrelationRun run = empirical_pair_correlation(opts);
    const std::vector<double> analytic = analytic_bin_average(run.histogram, 1);

    CommandResult res;
    ResultTable& t = res.table;
    common_meta(t, cfg, "mc");
    t.set_meta("N", std::to_string(opts.N));
    t.set_meta("samples", std::to_string(opts.samples));
    t.set_meta("bins", std::to_string(opts.bins));
    t.set_meta("u_max", format_double(opts.u_max));
    t.set_meta("u_window", format_double(cfg.u_lo) + " " + format_double(cfg.u_hi));
    t.add_column("u_lo", Provenance::input);
    t.add_column("u_hi", Provenance::input);
    t.add_column("u_mid", Provenance::input);
    t.add_column("pairs", Provenance::mc);
    t.add_column("pairs_se", Provenance::mc);
    t.add_column("ktilde_mc", Provenance::mc);
    t.add_column("ktilde_mc_se", Provenance::mc);
    t.add_column("ktilde_analytic", Provenance::analytic);
    t.add_column("zscore", Provenance::derived);

    PairCorrelationRun base;
    if (cfg.baseline) {
        base = poisson_baseline(opts);
        t.add_column("poisson_mc", Provenance::mc);
        t.add_column("poisson_mc_se", Provenance::mc);
        t.add_column("poisson_zscore", Provenance::derived);
    }
    const PairHistogram& h = run.histogram;
    const double flat = 1.0 - 1.0 / opts.N;
    int in_window = 0, within = 0, base_out = 0;
    for (int b = 0; b < h.bins; ++b) {
        const double se = run.curve.std_error[b];
        const double z = se > 0.0 ? (run.curve.value[b] - analytic[b]) / se : 0.0;
        if (h.lower(b) >= cfg.u_lo - 1e-9 && h.upper(b) <= cfg.u_hi + 1e-9) {
            ++in_window;
            within += std::abs(z) <= 3.0;
        }
        std::vector<Cell> row{h.lower(b), h.upper(b), run.curve.u_mid[b],
                              static_cast<std::int64_t>(h.counts[b]),
                              std::sqrt(static_cast<double>(h.counts[b])), run.curve.value[b], se,
                              analytic[b], z};
        if (cfg.baseline) {
            const double bse = base.curve.std_error[b];
            const double bz = bse > 0.0 ? (base.curve.value[b] - flat) / bse : 0.0;
            base_out += std::abs(bz) > 3.0;
            row.insert(row.end(), {base.curve.value[b], bse, bz});
        }
        t.add_row(std::move(row));
    }
    const double fraction = in_window ? static_cast<double>(within) / in_window : 0.0;
    t.set_meta("bins_in_window", std::to_string(in_window));
    try {
        t.set_meta("small_u_exponent", format_double(small_u_exponent(h, run.curve)));
    } catch (const InputError&) {
        t.set_meta("small_u_exponent", "nan");
    }
    t.set_meta("fraction_within_3se", format_double(fraction));
    if (in_window == 0) res.failed_checks.push_back("no bin inside the u window");
    if (fraction < 0.95) res.failed_checks.push_back("only " + format_double(fraction) + " of bins within 3 se");
    if (cfg.baseline) {
        t.set_meta("baseline_bins_outside_3se", std::to_string(base_out));
        if (base_out > 0) res.failed_checks.push_back(std::to_string(base_out) + " baseline bins outside 3 se");
    }
    return res;
}

CommandResult cmd_kernel_check(const RunConfig& cfg) {
    if (cfg.m < 1) throw InputError("m must be positive");
    const std::vector<int> grid =
        cfg.N_grid.empty() ? std::vector<int>{16, 32, 64, 128, 256, 512, 1024} : cfg.N_grid;
    if (cfg.offsets.empty()) throw InputError("offset grid is empty");
    for (int N : grid) {
        if (N < 1) throw InputError("N grid must hold positive degrees");
    }
    CommandResult res;
    ResultTable& t = res.table;
    common_meta(t, cfg, "analytic");
    t.set_meta("m", std::to_string(cfg.m));
    t.set_meta("N_grid", join(grid));
    t.set_meta("offsets", join(cfg.offsets));
    t.set_meta("theta", format_double(cfg.theta));
    t.set_meta("phi", format_double(cfg.phi));
    t.add_column("N", Provenance::input);
    t.add_column("u", Provenance::input);
    t.add_column("v_abs", Provenance::input);
    t.add_column("residual", Provenance::analytic);
    t.add_column("residual_sqrtN", Provenance::derived);
    t.add_column("residual_N", Provenance::derived);
    // v points along e^{i pi/4} so the phase factor of the model kernel is exercised.
    const Complex dir = std::polar(1.0, kPi / 4);
    std::vector<double> scaled;
    for (int N : grid) {
        for (double a : cfg.offsets) {
            for (double b : cfg.offsets) {
                const auto u = on_axis(a, cfg.m);
                auto v = on_axis(0.0, cfg.m);
                v[0] = b * dir;
                const double r = scaled_kernel_residual(N, cfg.m, u, v, cfg.theta, cfg.phi);
                scaled.push_back(r * std::sqrt(N));
                t.add_row({static_cast<std::int64_t>(N), a, b, r, r * std::sqrt(N), r * N});
            }
        }
    }
    const double mx = *std::max_element(scaled.begin(), scaled.end());
    const double md = median(scaled);
    t.set_meta("max_residual_sqrtN", format_double(mx));
    t.set_meta("median_residual_sqrtN", format_double(md));
    if (mx > 2.0 * md) {
        res.failed_checks.push_back("max residual*sqrt(N) " + format_double(mx) + " exceeds twice the median "
                                    + format_double(md));
    }
    return res;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    static const std::vector<std::pair<std::string, std::function<CommandResult(const RunConfig&)>>> table{
        {"pair-curve", cmd_pair_curve}, {"limit-corr", cmd_limit_corr}, {"finite-n", cmd_finite_n},
        {"connected", cmd_connected},   {"mc-pair", cmd_mc_pair},       {"kernel-check", cmd_kernel_check},
    };
    try {
        if (cfg.format != "csv" && cfg.format != "json") throw InputError("format must be csv or json");
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == cfg.command; });
        if (it == table.end()) throw InputError("unknown command '" + cfg.command + "'");
        if (cfg.threads < 0) throw InputError("threads must be nonnegative");
        if (cfg.threads > 0) set_worker_count(cfg.threads);

        const auto start = std::chrono::steady_clock::now();
        CommandResult res = it->second(cfg);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        res.table.set_meta("threads", std::to_string(worker_count()));
        res.table.set_meta("wall_time_s", format_double(wall));

        std::ostringstream body;
        if (cfg.format == "json") {
            res.table.write_json(body);
        } else {
            res.table.write_csv(body);
        }
        if (cfg.output.empty()) {
            out << body.str();
        } else {
            std::ofstream file(cfg.output, std::ios::binary);
            if (!file) throw InputError("cannot write '" + cfg.output + "'");
            file << body.str();
        }
        if (cfg.check && !res.failed_checks.empty()) {
            for (const auto& f : res.failed_checks) err << "assert: " << f << '\n';
            return kExitStatistical;
        }
        return kExitOk;
    } catch (const InputError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const SizeError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace zerocorr
