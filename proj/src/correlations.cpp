#include "zerocorr/correlations.hpp"

#include <cmath>
#include <string>

#include "zerocorr/error.hpp"
#include "zerocorr/gaussian.hpp"

namespace zerocorr {

std::string_view to_string(Method method) {
    switch (method) {
        case Method::exact_wick: return "wick";
        case Method::monte_carlo: return "mc";
        case Method::closed_form: return "analytic";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    if (name == "wick" || name == "exact_wick") return Method::exact_wick;
    if (name == "mc" || name == "monte_carlo") return Method::monte_carlo;
    if (name == "analytic" || name == "closed_form") return Method::closed_form;
    throw InputError("unknown method '" + std::string(name) + "'");
}

double density_one_point(int k, int m) {
    if (k < 1 || m < 1 || k > m) throw InputError("density_one_point: need 1 <= k <= m");
    double ratio = 1.0;  // m! / (m-k)!
    for (int j = m - k + 1; j <= m; ++j) ratio *= j;
    return ratio / std::pow(kPi, k);
}

double normalization_factor(int n, int k, int m) {
    return std::pow(density_one_point(k, m), -n);
}

CorrelationValue correlation_from_blocks(const CovarianceBlocks& blocks, int k, Method method,
                                         const MonteCarloOptions& mc) {
    const int n = blocks.n;
    const int m = blocks.m;
    const ConditionalGaussian cond = assemble_conditional(blocks, k);
    const DetProductShape shape{n, k, m};
    const double norm = normalization_factor(n, k, m);
    CorrelationValue out;
    out.method = method;
    switch (method) {
        case Method::exact_wick: {
            out.raw = cond.prefactor * det_product_moment(cond.gaussian.covariance, shape);
            break;
        }
        case Method::monte_carlo: {
            const MonteCarloEstimate est =
                mc_det_product_moment(cond.gaussian.covariance, shape, mc.samples, mc.seed, mc.exec);
            out.raw = cond.prefactor * est.estimate;
            out.std_error = cond.prefactor * est.std_error * norm;
            break;
        }
        case Method::closed_form:
            throw InputError("closed form is not available from covariance blocks");
    }
    out.normalized = out.raw * norm;
    return out;
}

CorrelationValue limit_correlation(const CorrelationRequest& req) {
    if (req.k < 1 || req.k > req.m) throw InputError("limit_correlation: need 1 <= k <= m");
    if (req.config.n() != req.n || req.config.m() != req.m) {
        throw InputError("limit_correlation: configuration does not match (n, m)");
    }
    if (req.method == Method::closed_form) {
        CorrelationValue out;
        out.method = Method::closed_form;
        if (req.n == 1) {
            out.raw = density_one_point(req.k, req.m);
            out.normalized = 1.0;
        } else if (req.n == 2 && req.k == 1) {
            const double r = distance(req.config.point(0), req.config.point(1));
            out.normalized = pair_correlation_closed(0.5 * r * r, req.m);
            out.raw = out.normalized / normalization_factor(2, 1, req.m);
        } else {
            throw InputError("closed form exists only for n = 1 or (n, k) = (2, 1)");
        }
        return out;
    }
    return correlation_from_blocks(limit_blocks(req.config), req.k, req.method, req.mc);
}

double pair_correlation_closed(double t, int m) {
    if (!(t > 0.0)) throw InputError("pair_correlation_closed: t must be positive");
    if (m < 1) throw InputError("pair_correlation_closed: m must be positive");
    const double md = m;
    const double m2 = md * md;
    if (t > kPairAsymptoteAbove) return 1.0;
    if (t < kPairSeriesBelow) {
        // Laurent expansion at t = 0; the first omitted term is O(t^9).
        const double a = (md - 1.0) / (2.0 * md);
        const double t2 = t * t;
        const double c1 = (md + 1.0) * (md + 2.0) / (6.0 * m2);
        const double c3 = -(md + 3.0) * (md + 4.0) / (90.0 * m2);
        const double c5 = (md + 5.0) * (md + 6.0) / (945.0 * m2);
        const double c7 = -(md + 7.0) * (md + 8.0) / (9450.0 * m2);
        return a / t + a + t * (c1 + t2 * (c3 + t2 * (c5 + t2 * c7)));
    }
    const double sh = std::sinh(t);
    const double ch = std::cosh(t);
    const double num = (0.5 * (m2 + md) * sh * sh + t * t) * ch - (md + 1.0) * t * sh;
    return num / (m2 * sh * sh * sh) + (md - 1.0) / (2.0 * md);
}

double small_r_asymptote(double r, int m) {
    if (!(r > 0.0) || m < 1) throw InputError("small_r_asymptote: need r > 0 and m >= 1");
    return 0.25 * (m + 1) * std::pow(r, 4 - 2 * m);
}

CorrelationValue finite_correlation_cp1(int N, const PointConfiguration& config, Method method,
                                        const MonteCarloOptions& mc) {
    if (config.m() != 1) throw InputError("finite_correlation_cp1 requires m = 1");
    if (method == Method::closed_form) throw InputError("no closed form at finite N");
    const FiniteNContext ctx(N, 1);
    CorrelationValue out = correlation_from_blocks(finite_blocks_cp1(config, ctx), 1, method, mc);
    // Normalize by the finite-N one-point densities, so n = 1 gives exactly 1.
    double densities = 1.0;
    for (int p = 0; p < config.n(); ++p) {
        const PointConfiguration single(std::vector<std::vector<Complex>>{config.point(p)});
        densities *= correlation_from_blocks(finite_blocks_cp1(single, ctx), 1, Method::exact_wick).raw;
    }
    out.normalized = out.raw / densities;
    if (out.std_error) *out.std_error /= densities * normalization_factor(config.n(), 1, 1);
    return out;
}

}  // namespace zerocorr
