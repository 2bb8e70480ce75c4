#pragma once

#include <vector>

#include "zerocorr/gaussian.hpp"
#include "zerocorr/linalg.hpp"

namespace zerocorr {

/// n pairwise-distinct points in C^m, in scaled (dimensionless) coordinates.
class PointConfiguration {
public:
    /// Throws InputError on ragged or empty input, ConfigurationError on
    /// coincident points.
    explicit PointConfiguration(std::vector<std::vector<Complex>> points);

    int n() const noexcept { return static_cast<int>(points_.size()); }
    int m() const noexcept { return m_; }
    const std::vector<Complex>& point(int p) const { return points_[p]; }
    const std::vector<std::vector<Complex>>& points() const noexcept { return points_; }

    double min_separation() const;
    double max_separation() const;

    /// The points selected by a bitmask, in increasing index order.
    PointConfiguration subset(unsigned mask) const;

private:
    std::vector<std::vector<Complex>> points_;
    int m_ = 0;
};

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Value/derivative covariance blocks in the pi^m-scaled convention:
/// A is n x n, B is n x (m n), C is (m n) x (m n); derivative columns are
/// indexed p * m + q.
struct CovarianceBlocks {
    CMatrix A;
    CMatrix B;
    CMatrix C;
    int n = 0;
    int m = 0;

    /// [[A, B], [B^*, C]].
    CMatrix assembled() const;
};

/// Exact scaling-limit blocks built from the level-1 Heisenberg kernel.
CovarianceBlocks limit_blocks(const PointConfiguration& z);

inline constexpr double kMaxConditionNumber = 1e12;

/// Lambda = C - B^* A^{-1} B, symmetrized. ConfigurationError if cond(A) > 1e12.
HermitianMatrix lambda_schur(const CovarianceBlocks& blocks);

/// Level N on CP^m with d_N = binomial(N + m, m).
struct FiniteNContext {
    int N = 1;
    int m = 1;
    double d_N = 2.0;

    FiniteNContext(int N, int m);
};

/// Finite-N blocks for the SU(2) ensemble on CP^1. The configuration holds
/// scaled coordinates; the kernel and its horizontal derivatives
/// (normalized by N^-1/2) are evaluated at affine points z / sqrt(N),
/// divided by d_N and multiplied by pi.
CovarianceBlocks finite_blocks_cp1(const PointConfiguration& z, const FiniteNContext& ctx);

struct ConditionalGaussian {
    double prefactor = 0.0;  // (pi^n det A)^-k
    GeneralizedGaussian gaussian;  // gamma_{I_k (x) Lambda}
};

ConditionalGaussian assemble_conditional(const CovarianceBlocks& blocks, int k);

}  // namespace zerocorr
