#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zerocorr/linalg.hpp"
#include "zerocorr/parallel.hpp"

namespace zerocorr {

/// Random SU(2) polynomial sum_j coeffs[j] z^j with
/// coeffs[j] = c_j sqrt(binomial(N, j)), c_j i.i.d. standard circular.
struct SU2Sample {
    int N = 0;
    std::vector<Complex> coeffs;
};

/// sqrt(binomial(N, j)) for j = 0..N.
std::vector<double> su2_weights(int N);

SU2Sample sample_su2(int N, std::uint64_t seed, std::uint64_t index);

struct ZeroSet {
    std::vector<Complex> affine_roots;
    int roots_at_infinity = 0;
    double max_residual = 0.0;  // max |p(r)| / sum_j |a_j| |r|^j over affine roots

    int degree() const noexcept {
        return static_cast<int>(affine_roots.size()) + roots_at_infinity;
    }
};

inline constexpr double kLeadingCutoff = 1e-13;

/// companion: eigenvalues of the balanced companion matrix (O(d^3)).
/// aberth: Aberth-Ehrlich simultaneous iteration from Newton-polygon
/// starting circles (O(d^2) per sweep); falls back to the companion matrix
/// if a sweep budget runs out.
enum class RootMethod { aberth, companion };
inline constexpr double kRootResidualGate = 1e-8;

/// Roots of sum_j coeffs[j] z^j, coeffs.size() - 1 being the formal degree.
/// Leading coefficients with |a_j| / w_j < 1e-13 max_i |a_i| / w_i count as
/// roots at infinity, w being `weights` (all ones when empty). Affine roots
/// come from `method` followed by one Newton step. Throws InputError for the
/// zero polynomial and NumericalError when a root misses the residual gate.
ZeroSet roots(std::span<const Complex> coeffs, std::span<const double> weights = {},
              RootMethod method = RootMethod::aberth);

/// Zeros of an SU(2) sample; the infinity cutoff is applied to the c_j.
ZeroSet roots(const SU2Sample& sample, RootMethod method = RootMethod::aberth);

/// Fubini-Study distance arctan |(z - w) / (1 + z conj(w))|, Euclidean at 0.
double fs_distance(Complex z, Complex w);
double fs_distance_to_infinity(Complex w);

struct PairHistogram {
    double u_max = 4.0;
    int bins = 40;
    std::vector<std::uint64_t> counts;  // unordered pairs per bin
    std::uint64_t samples = 0;
    int N = 0;

    double bin_width() const noexcept { return u_max / bins; }
    double lower(int b) const noexcept { return b * bin_width(); }
    double upper(int b) const noexcept { return (b + 1) * bin_width(); }
};

/// Per-bin estimate of the normalized pair correlation in scaled distance
/// u = sqrt(N) d_FS.
struct CorrelationCurve {
    std::vector<double> u_mid;
    std::vector<double> value;
    std::vector<double> std_error;
    std::vector<bool> empty_bin;  // zero expected count
    std::string method;
};

struct PairRunOptions {
    int N = 200;
    std::size_t samples = 2000;
    double u_max = 4.0;
    int bins = 40;
    std::uint64_t seed = 1;
    double rotation = 0.0;  // z -> e^{i rotation} z applied to every sample
    Exec exec = Exec::parallel;
};

struct PairCorrelationRun {
    PairHistogram histogram;
    CorrelationCurve curve;
};

/// Zeros of opts.samples SU(2) polynomials, all ordered root pairs binned by
/// u. Each sample reads only its own (seed, index) substream.
PairCorrelationRun empirical_pair_correlation(const PairRunOptions& opts);

/// The same estimator on N i.i.d. Fubini-Study-uniform points per sample.
PairCorrelationRun poisson_baseline(const PairRunOptions& opts);

/// counts / (samples * N^2/2 * (sin^2 d_hi - sin^2 d_lo)), d = u / sqrt(N):
/// the pair count divided by its value for N^2 independent uniform pairs
/// (the sphere has area pi; a cap of radius d has area pi sin^2 d).
/// Poisson errors sqrt(counts) carry the same scaling.
CorrelationCurve curve_from_histogram(const PairHistogram& h, std::string method);

/// Area-weighted average of pair_correlation_closed(u^2/2, m) over each bin.
std::vector<double> analytic_bin_average(const PairHistogram& h, int m = 1);

/// Exponent a of K~ ~ u^a from the bins with upper edge <= u_cut: least
/// squares of log K~ against log u_rms, u_rms^2 = (lo^2 + hi^2)/2 (the
/// area-weighted mean of u^2 over a bin), weighted by pair counts.
/// Empty bins are skipped; InputError if fewer than two remain.
double small_u_exponent(const PairHistogram& h, const CorrelationCurve& curve, double u_cut = 0.5);

/// Adds all pairs of `points` (affine) plus `at_infinity` copies of the point
/// at infinity to `counts`.
void accumulate_pairs(std::span<const Complex> points, int at_infinity, double sqrt_n,
                      double bin_width, std::span<std::uint64_t> counts);

/// Histograms of samples [0, samples) produced by `points_of(index)`.
/// Serial and parallel paths give identical counts.
template <typename PointsOf>
void histogram_samples(std::size_t samples, const PointsOf& points_of, double sqrt_n,
                       PairHistogram& h, Exec exec);

}  // namespace zerocorr

#include "zerocorr/detail/histogram_impl.hpp"
