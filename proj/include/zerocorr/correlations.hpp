#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "zerocorr/covariance.hpp"
#include "zerocorr/parallel.hpp"

namespace zerocorr {

enum class Method { exact_wick, monte_carlo, closed_form };

std::string_view to_string(Method method);
Method parse_method(std::string_view name);

struct MonteCarloOptions {
    std::size_t samples = 200000;
    std::uint64_t seed = 1;
    Exec exec = Exec::parallel;
};

struct CorrelationRequest {
    int n = 1;
    int k = 1;
    int m = 1;
    PointConfiguration config;
    Method method = Method::exact_wick;
    MonteCarloOptions mc{};
};

/// raw is K, normalized is K / K_1^n with K_1 the one-point density.
struct CorrelationValue {
    double raw = 0.0;
    double normalized = 0.0;
    std::optional<double> std_error;  // of normalized; Monte Carlo only
    Method method = Method::exact_wick;
};

/// m! / (pi^k (m-k)!).
double density_one_point(int k, int m);

/// (pi^k (m-k)! / m!)^n, the factor taking K to its normalized form.
double normalization_factor(int n, int k, int m);

CorrelationValue limit_correlation(const CorrelationRequest& req);

/// Same chain as limit_correlation starting from arbitrary blocks.
CorrelationValue correlation_from_blocks(const CovarianceBlocks& blocks, int k, Method method,
                                         const MonteCarloOptions& mc = {});

inline constexpr double kPairSeriesBelow = 1e-3;
inline constexpr double kPairAsymptoteAbove = 30.0;

/// Normalized scaling-limit pair correlation of zero divisors (k = 1),
/// t = |z1 - z2|^2 / 2.
double pair_correlation_closed(double t, int m);

/// (m + 1)/4 r^{4 - 2m}: small-separation law of the point-pair case k = m.
double small_r_asymptote(double r, int m);

/// Finite-N correlation on CP^1 (k = m = 1) for a configuration in scaled
/// coordinates. raw is N^-n K^N_n(z / sqrt N), a density in the scaled
/// affine coordinates. normalized divides by the finite-N one-point
/// densities at each point, so it compares directly with the limit.
CorrelationValue finite_correlation_cp1(int N, const PointConfiguration& config,
                                        Method method = Method::exact_wick,
                                        const MonteCarloOptions& mc = {});

}  // namespace zerocorr
