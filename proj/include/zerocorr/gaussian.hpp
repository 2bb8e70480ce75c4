#pragma once

#include <cstdint>
#include <vector>

#include "zerocorr/linalg.hpp"
#include "zerocorr/parallel.hpp"

namespace zerocorr {

/// Circular complex Gaussian with positive-semidefinite covariance, supported
/// on the span of the retained eigenvectors. factor * factor^* == covariance.
struct GeneralizedGaussian {
    HermitianMatrix covariance;
    int rank = 0;
    CMatrix factor;  // dim x rank
    double eigen_floor = 0.0;

    Eigen::Index dim() const noexcept { return covariance.dim(); }
};

inline constexpr double kDefaultPsdTolerance = 1e-10;

/// Eigen-factorizes sigma. Eigenvalues below tol * max are clipped to zero;
/// anything below -tol * max raises NotPositiveSemidefinite.
GeneralizedGaussian psd_factorize(const HermitianMatrix& sigma,
                                  double tol = kDefaultPsdTolerance);

/// Draw number `index` of the (seed) sequence: factor * w, w standard circular.
CVector sample_one(const GeneralizedGaussian& g, std::uint64_t seed, std::uint64_t index);

/// Draws 0..count-1; identical to calling sample_one for each index.
std::vector<CVector> sample(const GeneralizedGaussian& g, std::uint64_t seed,
                            std::size_t count, Exec exec = Exec::parallel);

/// Indices into a Gaussian vector: E[prod xi_holo * prod conj(xi_anti)].
struct MomentPattern {
    std::vector<int> holo;
    std::vector<int> anti;
};

inline constexpr int kMaxWickOrder = 12;

/// Permanent by Ryser's formula with Gray-code updates.
Complex permanent(const CMatrix& a);

/// Complex Wick/Isserlis formula: the permanent of sigma[holo][anti], or 0
/// for unbalanced patterns. SizeError above kMaxWickOrder.
Complex wick_moment(const HermitianMatrix& sigma, const MomentPattern& pattern);

/// Dimensions of an integrand prod_p det_{j,j'}(sum_q xi^p_{jq} conj(xi^p_{j'q})).
/// Gaussian coordinates are laid out as ((j * n) + p) * m + q.
struct DetProductShape {
    int n = 1;
    int k = 1;
    int m = 1;

    int dim() const noexcept { return n * k * m; }
    int index(int j, int p, int q) const noexcept { return (j * n + p) * m + q; }
};

inline constexpr int kMaxExactDetProduct = 4;  // cap on n * k

/// Exact E[prod_p det(...)] under gamma_lambda, lambda = I_k (x) Lambda.
double det_product_moment(const HermitianMatrix& lambda, const DetProductShape& shape);

struct MonteCarloEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

/// The same expectation estimated from `samples` draws of sample_one.
MonteCarloEstimate mc_det_product_moment(const HermitianMatrix& lambda,
                                         const DetProductShape& shape, std::size_t samples,
                                         std::uint64_t seed, Exec exec = Exec::parallel);

/// The integrand evaluated at one Gaussian vector.
double det_product_integrand(const CVector& xi, const DetProductShape& shape);

}  // namespace zerocorr
