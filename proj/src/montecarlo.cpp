#include "zerocorr/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "zerocorr/correlations.hpp"
#include "zerocorr/error.hpp"
#include "zerocorr/rng.hpp"

namespace zerocorr {

namespace {

constexpr std::uint32_t kSu2Stream = 1;
constexpr std::uint32_t kPoissonStream = 2;
constexpr int kMaxSu2Degree = 2000;

// Parlett-Reinsch balancing with radix 2 (exact scalings).
void balance(CMatrix& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i).real()) + std::abs(a(j, i).imag());
                r += std::abs(a(i, j).real()) + std::abs(a(i, j).imag());
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

struct Evaluation {
    Complex value;
    Complex derivative;
    double scale;  // sum_j |a_j| |x|^j
};

// Horner on a[0] + a[1] x + ... + a[d] x^d.
Evaluation horner(std::span<const Complex> a, Complex x) {
    const auto d = static_cast<std::ptrdiff_t>(a.size()) - 1;
    Complex p = a[d];
    Complex dp = 0.0;
    double s = std::abs(a[d]);
    const double ax = std::abs(x);
    for (std::ptrdiff_t j = d - 1; j >= 0; --j) {
        dp = dp * x + p;
        p = p * x + a[j];
        s = s * ax + std::abs(a[j]);
    }
    return {p, dp, s};
}

// Newton step and relative residual. Roots outside the unit disk are handled
// through the reversed polynomial in w = 1/z so that Horner never overflows.
struct Polisher {
    std::span<const Complex> forward;
    std::vector<Complex> reversed;

    explicit Polisher(std::span<const Complex> a) : forward(a), reversed(a.rbegin(), a.rend()) {}

    double residual(Complex z) const {
        const Evaluation e = std::abs(z) <= 1.0 ? horner(forward, z) : horner(reversed, 1.0 / z);
        return e.scale > 0.0 ? std::abs(e.value) / e.scale : 0.0;
    }

    Complex step(Complex z) const {
        if (std::abs(z) <= 1.0) {
            const Evaluation e = horner(forward, z);
            return e.derivative != 0.0 ? z - e.value / e.derivative : z;
        }
        const Complex w = 1.0 / z;
        const Evaluation e = horner(reversed, w);
        if (e.derivative == 0.0) return z;
        return 1.0 / (w - e.value / e.derivative);
    }
};

// Starting points on circles whose radii come from the upper convex hull of
// (j, log|a_j|), one circle per hull edge (Bini's initialization).
std::vector<Complex> newton_polygon_start(std::span<const Complex> a) {
    const int d = static_cast<int>(a.size()) - 1;
    std::vector<double> loga(d + 1);
    for (int j = 0; j <= d; ++j) loga[j] = a[j] == 0.0 ? -INFINITY : std::log(std::abs(a[j]));
    std::vector<int> hull;
    for (int j = 0; j <= d; ++j) {
        if (a[j] == 0.0) continue;
        while (hull.size() >= 2) {
            const int p = hull[hull.size() - 2];
            const int q = hull.back();
            if ((loga[q] - loga[p]) * (j - p) <= (loga[j] - loga[p]) * (q - p)) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(j);
    }
    std::vector<Complex> start;
    start.reserve(d);
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const int k0 = hull[e];
        const int k1 = hull[e + 1];
        const int count = k1 - k0;
        const double radius = std::exp((loga[k0] - loga[k1]) / count);
        for (int i = 0; i < count; ++i) {
            const double angle = 2.0 * kPi * (static_cast<double>(i) / count + static_cast<double>(k0) / d) + 0.7;
            start.push_back(std::polar(radius, angle));
        }
    }
    return start;
}

// Simultaneous Aberth-Ehrlich sweeps, updating in place.
bool aberth(const Polisher& poly, std::vector<Complex>& z) {
    constexpr int kMaxSweeps = 150;
    const auto d = static_cast<double>(poly.forward.size() - 1);
    const std::size_t n = z.size();
    std::vector<char> done(n, 0);
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (done[i]) continue;
            Complex ratio;  // p / p'
            if (std::abs(z[i]) <= 1.0) {
                const Evaluation e = horner(poly.forward, z[i]);
                ratio = e.value / e.derivative;
            } else {
                const Complex w = 1.0 / z[i];
                const Evaluation e = horner(poly.reversed, w);
                ratio = z[i] / (d - w * e.derivative / e.value);
            }
            if (!std::isfinite(ratio.real()) || !std::isfinite(ratio.imag())) {
                // Exact zero of p (value 0) or a critical point; leave it to polishing.
                done[i] = 1;
                continue;
            }
            Complex repulsion = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) repulsion += 1.0 / (z[i] - z[j]);
            }
            const Complex delta = ratio / (1.0 - ratio * repulsion);
            z[i] -= delta;
            if (std::abs(delta) <= 1e-13 * std::abs(z[i])) {
                done[i] = 1;
            } else {
                all = false;
            }
        }
        if (all) return true;
    }
    return false;
}

std::vector<Complex> companion_roots(std::span<const Complex> poly) {
    const auto d = static_cast<Eigen::Index>(poly.size()) - 1;
    CMatrix companion = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) companion(0, j) = -poly[d - 1 - j] / poly[d];
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    balance(companion);
    Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
    if (solver.info() != Eigen::Success) throw NumericalError("roots: eigensolver failed");
    return {solver.eigenvalues().begin(), solver.eigenvalues().end()};
}

}  // namespace

std::vector<double> su2_weights(int N) {
    if (N < 1 || N > kMaxSu2Degree) {
        throw InputError("SU(2) degree must be in [1, " + std::to_string(kMaxSu2Degree) + "]");
    }
    std::vector<double> w(N + 1);
    w[0] = 1.0;
    for (int j = 1; j <= N; ++j) {
        w[j] = w[j - 1] * std::sqrt(static_cast<double>(N - j + 1) / j);
    }
    return w;
}

SU2Sample sample_su2(int N, std::uint64_t seed, std::uint64_t index) {
    const std::vector<double> w = su2_weights(N);
    Substream rng(seed, index, kSu2Stream);
    SU2Sample s{N, std::vector<Complex>(N + 1)};
    for (int j = 0; j <= N; ++j) s.coeffs[j] = w[j] * rng.circular_normal();
    return s;
}

ZeroSet roots(std::span<const Complex> coeffs, std::span<const double> weights,
              RootMethod method) {
    if (coeffs.empty()) throw InputError("roots: empty coefficient list");
    if (!weights.empty() && weights.size() != coeffs.size()) {
        throw InputError("roots: weight count does not match coefficient count");
    }
    auto normalized = [&](std::size_t j) {
        return weights.empty() ? std::abs(coeffs[j]) : std::abs(coeffs[j]) / weights[j];
    };
    double largest = 0.0;
    for (std::size_t j = 0; j < coeffs.size(); ++j) largest = std::max(largest, normalized(j));
    if (largest == 0.0) throw InputError("roots: degenerate sample, all coefficients vanish");

    ZeroSet out;
    std::size_t top = coeffs.size() - 1;
    while (normalized(top) < kLeadingCutoff * largest) {
        ++out.roots_at_infinity;
        --top;
    }
    std::size_t low = 0;
    while (coeffs[low] == 0.0) {
        out.affine_roots.push_back(0.0);
        ++low;
    }
    const std::span<const Complex> poly = coeffs.subspan(low, top - low + 1);
    const auto d = static_cast<Eigen::Index>(poly.size()) - 1;
    if (d == 0) return out;

    const Polisher polish(poly);
    std::vector<Complex> found;
    if (d == 1) {
        found.push_back(-poly[0] / poly[1]);
    } else if (method == RootMethod::aberth) {
        found = newton_polygon_start(poly);
        if (!aberth(polish, found)) found = companion_roots(poly);
    } else {
        found = companion_roots(poly);
    }

    for (Complex z : found) {
        z = polish.step(z);
        double res = polish.residual(z);
        for (int extra = 0; extra < 4 && res > kRootResidualGate; ++extra) {
            z = polish.step(z);
            res = polish.residual(z);
        }
        if (!(res <= kRootResidualGate)) {
            throw NumericalError("roots: residual " + std::to_string(res) + " above gate");
        }
        out.max_residual = std::max(out.max_residual, res);
        out.affine_roots.push_back(z);
    }
    return out;
}

ZeroSet roots(const SU2Sample& sample, RootMethod method) {
    const std::vector<double> w = su2_weights(sample.N);
    return roots(sample.coeffs, w, method);
}

double fs_distance(Complex z, Complex w) {
    return std::atan2(std::abs(z - w), std::abs(1.0 + z * std::conj(w)));
}

double fs_distance_to_infinity(Complex w) {
    return std::atan2(1.0, std::abs(w));
}

void accumulate_pairs(std::span<const Complex> points, int at_infinity, double sqrt_n,
                      double bin_width, std::span<std::uint64_t> counts) {
    const auto bins = static_cast<std::int64_t>(counts.size());
    auto add = [&](double d, std::uint64_t times) {
        const auto b = static_cast<std::int64_t>(std::floor(sqrt_n * d / bin_width));
        if (b < bins) counts[b] += times;
    };
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) add(fs_distance(points[i], points[j]), 1);
        if (at_infinity > 0) add(fs_distance_to_infinity(points[i]), at_infinity);
    }
    if (at_infinity > 1) {
        add(0.0, static_cast<std::uint64_t>(at_infinity) * (at_infinity - 1) / 2);
    }
}

namespace {

PairHistogram empty_histogram(const PairRunOptions& opts) {
    if (opts.N < 2) throw InputError("pair correlation needs N >= 2");
    if (opts.samples < 1) throw InputError("pair correlation needs at least one sample");
    if (opts.bins < 1 || !(opts.u_max > 0.0)) throw InputError("need bins >= 1 and u_max > 0");
    if (opts.u_max > std::sqrt(static_cast<double>(opts.N)) * 0.5 * kPi) {
        throw InputError("u_max exceeds the diameter sqrt(N) pi/2 of the scaled sphere");
    }
    PairHistogram h;
    h.u_max = opts.u_max;
    h.bins = opts.bins;
    h.counts.assign(opts.bins, 0);
    h.N = opts.N;
    return h;
}

}  // namespace

PairCorrelationRun empirical_pair_correlation(const PairRunOptions& opts) {
    PairCorrelationRun run{empty_histogram(opts), {}};
    const std::vector<double> w = su2_weights(opts.N);
    std::vector<Complex> twist(opts.N + 1, 1.0);
    for (int j = 0; j <= opts.N; ++j) twist[j] = std::polar(1.0, -opts.rotation * j);
    auto points_of = [&](std::uint64_t index) {
        SU2Sample s = sample_su2(opts.N, opts.seed, index);
        if (opts.rotation != 0.0) {
            for (int j = 0; j <= opts.N; ++j) s.coeffs[j] *= twist[j];
        }
        ZeroSet zs = roots(s.coeffs, w);
        if (zs.degree() != opts.N) throw NumericalError("root count does not match the degree");
        return zs;
    };
    histogram_samples(opts.samples, points_of, std::sqrt(static_cast<double>(opts.N)),
                      run.histogram, opts.exec);
    run.curve = curve_from_histogram(run.histogram, "mc");
    return run;
}

PairCorrelationRun poisson_baseline(const PairRunOptions& opts) {
    PairCorrelationRun run{empty_histogram(opts), {}};
    auto points_of = [&](std::uint64_t index) {
        Substream rng(opts.seed, index, kPoissonStream);
        ZeroSet zs;
        zs.affine_roots.resize(opts.N);
        for (Complex& z : zs.affine_roots) {
            const double t = rng.uniform();
            const double phi = 2.0 * kPi * rng.uniform();
            z = std::polar(std::sqrt(t / (1.0 - t)), phi);
        }
        return zs;
    };
    histogram_samples(opts.samples, points_of, std::sqrt(static_cast<double>(opts.N)),
                      run.histogram, opts.exec);
    run.curve = curve_from_histogram(run.histogram, "mc-poisson");
    return run;
}

CorrelationCurve curve_from_histogram(const PairHistogram& h, std::string method) {
    CorrelationCurve c;
    c.method = std::move(method);
    const double root = std::sqrt(static_cast<double>(h.N));
    const double pairs = static_cast<double>(h.samples) * 0.5 * h.N * static_cast<double>(h.N);
    for (int b = 0; b < h.bins; ++b) {
        const double lo = std::sin(h.lower(b) / root);
        const double hi = std::sin(h.upper(b) / root);
        const double expected = pairs * (hi * hi - lo * lo);
        const auto count = static_cast<double>(h.counts[b]);
        c.u_mid.push_back(0.5 * (h.lower(b) + h.upper(b)));
        c.value.push_back(count / expected);
        c.std_error.push_back(std::sqrt(std::max(count, 1.0)) / expected);
        c.empty_bin.push_back(h.counts[b] == 0);
    }
    return c;
}

std::vector<double> analytic_bin_average(const PairHistogram& h, int m) {
    constexpr int kSteps = 256;
    const double root = std::sqrt(static_cast<double>(h.N));
    std::vector<double> out;
    for (int b = 0; b < h.bins; ++b) {
        const double du = h.bin_width() / kSteps;
        double num = 0.0;
        double den = 0.0;
        for (int i = 0; i < kSteps; ++i) {
            const double u = h.lower(b) + (i + 0.5) * du;
            const double area = std::sin(2.0 * u / root);
            num += area * pair_correlation_closed(0.5 * u * u, m);
            den += area;
        }
        out.push_back(num / den);
    }
    return out;
}

double small_u_exponent(const PairHistogram& h, const CorrelationCurve& curve, double u_cut) {
    double sw = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (int b = 0; b < h.bins && h.upper(b) <= u_cut + 1e-12; ++b) {
        if (h.counts[b] == 0) continue;
        const double lo = h.lower(b), hi = h.upper(b);
        const double x = 0.5 * std::log(0.5 * (lo * lo + hi * hi));
        const double y = std::log(curve.value[b]);
        const double w = static_cast<double>(h.counts[b]);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
        ++used;
    }
    if (used < 2) throw InputError("small_u_exponent: fewer than two nonempty bins below the cut");
    return (sw * sxy - sx * sy) / (sw * sxx - sx * sx);
}

}  // namespace zerocorr
