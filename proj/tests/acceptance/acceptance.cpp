// Acceptance criteria, one per argument: `zerocorr_acceptance 3` runs the
// third. Without arguments all criteria run. Each prints one PASS/FAIL line;
// the exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "zerocorr/connected.hpp"
#include "zerocorr/correlations.hpp"
#include "zerocorr/covariance.hpp"
#include "zerocorr/gaussian.hpp"
#include "zerocorr/model_kernels.hpp"
#include "zerocorr/montecarlo.hpp"

using namespace zerocorr;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Complex> on_axis(Complex x, int m) {
    std::vector<Complex> p(m, Complex(0.0));
    p[0] = x;
    return p;
}

PointConfiguration pair_at(double r, int m) { return PointConfiguration({on_axis(0.0, m), on_axis(r, m)}); }

double wick_pair(double r, int k, int m) {
    return limit_correlation({2, k, m, pair_at(r, m), Method::exact_wick, {}}).normalized;
}

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome c1_closed_vs_wick() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
        for (double r : {0.3, 0.5, 1.0, 2.0, 4.0}) {
            const double closed = pair_correlation_closed(0.5 * r * r, m);
            worst = std::max(worst, std::abs(wick_pair(r, 1, m) - closed) / closed);
        }
    }
    const double t = seconds_since(t0);
    return {worst <= 1e-9 && t < 1.0, "max rel err " + fmt("%.2e", worst) + " (<= 1e-9), " + fmt("%.3f", t) + " s (< 1 s)"};
}

Outcome c2_one_point() {
    double worst_norm = 0.0, worst_raw = 0.0;
    for (int m = 1; m <= 3; ++m) {
        for (int k = 1; k <= m; ++k) {
            const PointConfiguration z({on_axis(Complex(0.4, -0.3), m)});
            const CorrelationValue v = limit_correlation({1, k, m, z, Method::exact_wick, {}});
            double expect = 1.0;
            for (int j = m - k + 1; j <= m; ++j) expect *= j;
            expect /= std::pow(kPi, k);
            worst_norm = std::max(worst_norm, std::abs(v.normalized - 1.0));
            worst_raw = std::max(worst_raw, std::abs(v.raw - expect) / expect);
        }
    }
    return {worst_norm <= 1e-12 && worst_raw <= 1e-12,
            "max |K~ - 1| " + fmt("%.1e", worst_norm) + ", max rel raw err " + fmt("%.1e", worst_raw) + " (<= 1e-12)"};
}

Outcome c3_tail() {
    // Envelope constant 10, measured: the largest ratio seen is reported.
    double worst = 0.0;
    bool ok = true;
    for (int m = 1; m <= 2; ++m) {
        for (double r = 2.0; r <= 6.0 + 1e-12; r += 0.125) {
            const double dev = std::abs(wick_pair(r, 1, m) - 1.0);
            const double env = std::pow(r, 4) * std::exp(-r * r);
            ok = ok && dev <= 10.0 * env;
            worst = std::max(worst, dev / env);
        }
    }
    return {ok, "max |K~-1| / (r^4 e^{-r^2}) = " + fmt("%.3f", worst) + " (<= 10), r in [2,6], m in {1,2}"};
}

Outcome c4_small_r() {
    double worst = 0.0;
    for (double r : {0.05, 0.1, 0.2}) {
        const double law = small_r_asymptote(r, 1);
        worst = std::max(worst, std::abs(wick_pair(r, 1, 1) - law) / law);
    }
    const double v22 = wick_pair(0.05, 2, 2);
    const double dev22 = std::abs(v22 - 0.75) / 0.75;
    return {worst <= 0.1 && dev22 <= 0.1,
            "m=1 max rel dev from r^2/2 " + fmt("%.4f", worst) + ", k=m=2 r=0.05 value " + fmt("%.10f", v22)
                + " vs 3/4 (<= 10%)"};
}

Outcome c5_finite_n() {
    const auto t0 = Clock::now();
    const PointConfiguration z = pair_at(1.0, 1);
    const double lim = wick_pair(1.0, 1, 1);
    std::vector<double> x, y;
    std::string errs;
    for (int N : {64, 256, 1024}) {
        const double err = std::abs(finite_correlation_cp1(N, z).normalized - lim);
        x.push_back(std::log(N));
        y.push_back(std::log(err));
        errs += " N=" + std::to_string(N) + ":" + fmt("%.3e", err);
    }
    const double slope = fit_slope(x, y);
    const double t = seconds_since(t0);
    return {slope <= -0.45 && t < 30.0, "log-log slope " + fmt("%.3f", slope) + " (<= -0.45);" + errs + "; "
                                            + fmt("%.2f", t) + " s"};
}

Outcome c6_kernel_scaling() {
    const std::vector<int> Ns{16, 32, 64, 128, 256, 512, 1024};
    const std::vector<double> offs{0.0, 0.5, 1.0, 1.5, 2.0};
    const Complex dir = std::polar(1.0, kPi / 4);
    double mx = 0.0, mxN = 0.0;
    std::vector<double> scaled, scaledN;
    for (int m = 1; m <= 2; ++m) {
        for (int N : Ns) {
            for (double a : offs) {
                for (double b : offs) {
                    const auto u = on_axis(a, m), v = on_axis(b * dir, m);
                    const double r = scaled_kernel_residual(N, m, u, v, 0.0, 0.0);
                    scaled.push_back(r * std::sqrt(N));
                    scaledN.push_back(r * N);
                }
            }
        }
    }
    auto median = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return 0.5 * (v[(v.size() - 1) / 2] + v[v.size() / 2]);
    };
    mx = *std::max_element(scaled.begin(), scaled.end());
    mxN = *std::max_element(scaledN.begin(), scaledN.end());
    const double md = median(scaled), mdN = median(scaledN);
    double diag = 0.0;
    for (int N : Ns) {
        const double r = scaled_kernel_residual(N, 1, on_axis(0.0, 1), on_axis(0.0, 1), 0.0, 0.0);
        diag = std::max(diag, std::abs(r - 1.0 / (kPi * N)) * kPi * N);
    }
    const bool bounded = mx <= 2.0 * md;
    return {bounded && diag <= 1e-12,
            "residual*sqrt(N): max " + fmt("%.4g", mx) + ", median " + fmt("%.4g", md) + ", ratio "
                + fmt("%.2f", mx / md) + " (<= 2); diagonal rel err " + fmt("%.1e", diag)
                + " (<= 1e-12); info residual*N max/median " + fmt("%.2f", mxN / mdN)};
}

Outcome c7_connected() {
    const SubsetEvaluator ev = limit_evaluator(1, 1);
    double max_ratio = 0.0;
    for (double r = 1.0; r <= 5.0 + 1e-12; r += 0.25) {
        const PointConfiguration z = pair_at(r, 1);
        const double T = connected_correlation(z, ev).value;
        max_ratio = std::max(max_ratio, std::abs(T) / decay_bound(z).value);
    }
    std::vector<PointConfiguration> tri;
    for (double s : {1.0, 2.0, 3.0}) {
        tri.push_back(PointConfiguration({{Complex(0.0)}, {Complex(s)}, {s * std::polar(1.0, kPi / 3)}}));
    }
    const DecayReport rep = decay_check(tri, ev);

    double moebius = 0.0;
    const std::vector<PointConfiguration> configs{
        PointConfiguration({{Complex(0.3, 0.1)}}),
        pair_at(0.9, 1),
        PointConfiguration({{Complex(0.0)}, {Complex(1.1)}, {Complex(0.4, 0.8)}}),
        PointConfiguration({{Complex(0.0)}, {Complex(1.5)}, {Complex(1.5, 1.5)}, {Complex(0.0, 1.5)}}),
    };
    for (const auto& z : configs) {
        const auto tt = [&](const PointConfiguration& c) { return connected_correlation(c, ev).value; };
        moebius = std::max(moebius, std::abs(moebius_reconstruct(z, tt) - ev(z)));
    }
    const bool ok = max_ratio <= 10.0 && rep.slope <= -0.5 + 0.1 && moebius <= 1e-10;
    std::string rows;
    for (const auto& row : rep.rows) rows += " " + fmt("%.3e", row.connected);
    return {ok, "n=2 max ratio " + fmt("%.3f", max_ratio) + " (envelope 10); n=3 slope " + fmt("%.3f", rep.slope)
                    + " (<= -0.4), T3:" + rows + ", max ratio " + fmt("%.3f", rep.max_ratio)
                    + "; Moebius err " + fmt("%.1e", moebius) + " (<= 1e-10)"};
}

Outcome c8_monte_carlo() {
    PairRunOptions o;
    o.N = 200;
    o.samples = 2000;
    o.u_max = 4.0;
    o.bins = 40;
    o.seed = 20261017;
    const auto t0 = Clock::now();
    const PairCorrelationRun run = empirical_pair_correlation(o);
    const PairCorrelationRun base = poisson_baseline(o);
    const double t = seconds_since(t0);
    const auto analytic = analytic_bin_average(run.histogram, 1);
    int in = 0, within = 0, base_out = 0;
    for (int b = 0; b < o.bins; ++b) {
        const auto& h = run.histogram;
        if (h.lower(b) >= 0.3 - 1e-9 && h.upper(b) <= 3.0 + 1e-9) {
            ++in;
            within += std::abs(run.curve.value[b] - analytic[b]) <= 3.0 * run.curve.std_error[b];
        }
        base_out += std::abs(base.curve.value[b] - (1.0 - 1.0 / o.N)) > 3.0 * base.curve.std_error[b];
    }
    // Quadratic suppression at small u, reported only.
    const double exponent = small_u_exponent(run.histogram, run.curve);

    o.exec = Exec::serial;
    const bool same = empirical_pair_correlation(o).histogram.counts == run.histogram.counts;
    const double frac = double(within) / in;
    return {frac >= 0.95 && base_out == 0 && same && t < 300.0,
            std::to_string(within) + "/" + std::to_string(in) + " bins within 3 se (>= 95%), baseline bins outside 3 se: "
                + std::to_string(base_out) + ", serial rerun identical: " + (same ? "yes" : "no") + ", "
                + fmt("%.1f", t) + " s; info small-u exponent " + fmt("%.2f", exponent)};
}

Outcome c9_oracles() {
    double perm = 0.0;
    for (int s = 1; s <= 6; ++s) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const CMatrix a = oracle::random_matrix(s, s, 1000 * s + seed);
            const Complex ref = oracle::brute_permanent(a);
            perm = std::max(perm, std::abs(permanent(a) - ref) / std::max(1.0, std::abs(ref)));
        }
    }

    double fd = 0.0;
    for (int N : {16, 64, 256, 1024}) {
        const std::vector<Complex> pts{Complex(0.0), Complex(1.0, 0.5), Complex(-0.7, 1.3)};
        const PointConfiguration z({{pts[0]}, {pts[1]}, {pts[2]}});
        const CovarianceBlocks b = finite_blocks_cp1(z, FiniteNContext(N, 1));
        const oracle::FdBlocks ref = oracle::fd_blocks(N, pts);
        fd = std::max({fd, oracle::block_rel_error(b.B, ref.B), oracle::block_rel_error(b.C, ref.C)});
    }

    // Every (n, k, m) on the exact path n k <= 4, k <= m <= 3.
    const std::vector<Complex> base{Complex(0.0), Complex(0.9, 0.2), Complex(0.1, 1.0), Complex(1.1, 1.2)};
    int cases = 0, ok_cases = 0;
    double worst_z = 0.0;
    for (int n = 1; n <= 4; ++n) {
        for (int k = 1; n * k <= kMaxExactDetProduct && k <= 3; ++k) {
            for (int m = k; m <= 3; ++m) {
                std::vector<std::vector<Complex>> pts;
                for (int p = 0; p < n; ++p) {
                    auto pt = on_axis(base[p], m);
                    if (m > 1) pt[1] = 0.3 * base[(p + 1) % 4];
                    pts.push_back(pt);
                }
                const PointConfiguration z(pts);
                const HermitianMatrix lambda = kron_identity(k, lambda_schur(limit_blocks(z)));
                const DetProductShape shape{n, k, m};
                const double exact = det_product_moment(lambda, shape);
                const MonteCarloEstimate est = mc_det_product_moment(lambda, shape, 100000, 500 + cases);
                const double zs = std::abs(est.estimate - exact) / est.std_error;
                worst_z = std::max(worst_z, zs);
                ++cases;
                ok_cases += zs <= 4.0;
            }
        }
    }
    return {perm <= 1e-12 && fd <= 1e-6 && ok_cases == cases,
            "permanent rel err " + fmt("%.1e", perm) + " (<= 1e-12); FD kernel derivative rel err " + fmt("%.1e", fd)
                + " (<= 1e-6); Wick vs MC " + std::to_string(ok_cases) + "/" + std::to_string(cases)
                + " within 4 sigma, max |z| " + fmt("%.2f", worst_z)};
}

struct Criterion {
    const char* name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"closed form vs Wick pair correlation", c1_closed_vs_wick},
        {"one-point density", c2_one_point},
        {"tail envelope", c3_tail},
        {"small-r law", c4_small_r},
        {"finite-N convergence", c5_finite_n},
        {"kernel scaling", c6_kernel_scaling},
        {"connected-correlation decay", c7_connected},
        {"Monte Carlo vs universal curve", c8_monte_carlo},
        {"oracle suite", c9_oracles},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty()) {
        for (int i = 1; i <= 9; ++i) selected.push_back(i);
    }
    int failures = 0;
    for (int c : selected) {
        if (c < 1 || c > 9) {
            std::fprintf(stderr, "no criterion %d\n", c);
            return 2;
        }
        Outcome out;
        try {
            out = all[c - 1].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s criterion %d (%s): %s\n", out.pass ? "PASS" : "FAIL", c, all[c - 1].name, out.detail.c_str());
        std::fflush(stdout);
        failures += !out.pass;
    }
    return failures == 0 ? 0 : 1;
}
