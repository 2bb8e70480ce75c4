#include "zerocorr/covariance.hpp"

#include <cmath>
#include <string>

#include "zerocorr/error.hpp"
#include "zerocorr/model_kernels.hpp"

namespace zerocorr {

double distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double s = 0.0;
    for (std::size_t q = 0; q < a.size(); ++q) s += std::norm(a[q] - b[q]);
    return std::sqrt(s);
}

PointConfiguration::PointConfiguration(std::vector<std::vector<Complex>> points)
    : points_(std::move(points)) {
    if (points_.empty()) throw InputError("configuration needs at least one point");
    m_ = static_cast<int>(points_.front().size());
    if (m_ < 1) throw InputError("configuration points need at least one coordinate");
    for (const auto& p : points_) {
        if (static_cast<int>(p.size()) != m_) throw InputError("configuration points differ in dimension");
        for (const Complex& c : p) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
                throw InputError("configuration has a non-finite coordinate");
            }
        }
    }
    if (n() > 1 && !(min_separation() > 0.0)) {
        throw ConfigurationError("configuration has coincident points");
    }
}

double PointConfiguration::min_separation() const {
    double best = INFINITY;
    for (int p = 0; p < n(); ++p) {
        for (int q = p + 1; q < n(); ++q) best = std::min(best, distance(points_[p], points_[q]));
    }
    return best;
}

double PointConfiguration::max_separation() const {
    double best = 0.0;
    for (int p = 0; p < n(); ++p) {
        for (int q = p + 1; q < n(); ++q) best = std::max(best, distance(points_[p], points_[q]));
    }
    return best;
}

PointConfiguration PointConfiguration::subset(unsigned mask) const {
    std::vector<std::vector<Complex>> sub;
    for (int p = 0; p < n(); ++p) {
        if (mask & (1u << p)) sub.push_back(points_[p]);
    }
    return PointConfiguration(std::move(sub));
}

CMatrix CovarianceBlocks::assembled() const {
    const Eigen::Index d = A.rows() + C.rows();
    CMatrix full(d, d);
    full << A, B, B.adjoint(), C;
    return full;
}

CovarianceBlocks limit_blocks(const PointConfiguration& z) {
    const int n = z.n();
    const int m = z.m();
    CovarianceBlocks out{CMatrix(n, n), CMatrix(n, m * n), CMatrix(m * n, m * n), n, m};
    for (int p = 0; p < n; ++p) {
        const auto& zp = z.point(p);
        for (int pp = 0; pp < n; ++pp) {
            const auto& zpp = z.point(pp);
            Complex dot = 0.0;
            double dist2 = 0.0;
            for (int q = 0; q < m; ++q) {
                dot += zp[q] * std::conj(zpp[q]);
                dist2 += std::norm(zp[q] - zpp[q]);
            }
            const Complex a = std::polar(std::exp(-0.5 * dist2), dot.imag());
            out.A(p, pp) = a;
            for (int qq = 0; qq < m; ++qq) {
                const Complex diff = zp[qq] - zpp[qq];
                out.B(p, pp * m + qq) = diff * a;
                for (int q = 0; q < m; ++q) {
                    const Complex conj_diff = std::conj(zpp[q]) - std::conj(zp[q]);
                    const double delta = q == qq ? 1.0 : 0.0;
                    out.C(p * m + q, pp * m + qq) = (delta + conj_diff * diff) * a;
                }
            }
        }
    }
    return out;
}

HermitianMatrix lambda_schur(const CovarianceBlocks& blocks) {
    Eigen::JacobiSVD<CMatrix> svd(blocks.A);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (!(cond <= kMaxConditionNumber)) {
        throw ConfigurationError("near-coincident configuration: cond(A) = " + std::to_string(cond));
    }
    const Eigen::PartialPivLU<CMatrix> lu(blocks.A);
    const CMatrix ainv_b = lu.solve(blocks.B);
    return HermitianMatrix(blocks.C - blocks.B.adjoint() * ainv_b);
}

FiniteNContext::FiniteNContext(int N_, int m_) : N(N_), m(m_) {
    if (N < 1 || m < 1) throw InputError("finite-N context needs N >= 1 and m >= 1");
    double d = 1.0;
    for (int j = 1; j <= m; ++j) d *= (static_cast<double>(N) + j) / j;
    d_N = d;
}

CovarianceBlocks finite_blocks_cp1(const PointConfiguration& config, const FiniteNContext& ctx) {
    if (config.m() != 1 || ctx.m != 1) throw InputError("finite_blocks_cp1 requires m = 1");
    const int n = config.n();
    const double N = ctx.N;
    const double root = std::sqrt(N);
    const double scale = kPi * fs_diagonal(ctx.N, 1) / ctx.d_N;

    CovarianceBlocks out{CMatrix(n, n), CMatrix(n, n), CMatrix(n, n), n, 1};
    for (int p = 0; p < n; ++p) {
        const Complex z = config.point(p)[0] / root;
        const double nz = 1.0 + std::norm(z);
        for (int pp = 0; pp < n; ++pp) {
            const Complex w = config.point(pp)[0] / root;
            const double nw = 1.0 + std::norm(w);
            const Complex s = 1.0 + z * std::conj(w);
            if (std::abs(s) < 1e-300) throw ConfigurationError("finite_blocks_cp1: antipodal points");
            // Lifted kernel (1 + z conj w)^N (1+|z|^2)^{-N/2} (1+|w|^2)^{-N/2} at theta = 0.
            const Complex kernel =
                scale * std::exp(N * std::log(s) - 0.5 * N * (std::log(nz) + std::log(nw)));
            out.A(p, pp) = kernel;
            out.B(p, pp) = kernel * root * (z / s - w / nw);
            const Complex bracket = 1.0 / s + (N - 1.0) * z * std::conj(w) / (s * s)
                                    - N * std::norm(w) / (nw * s) - N * std::norm(z) / (nz * s)
                                    + N * std::conj(z) * w / (nz * nw);
            out.C(p, pp) = kernel * bracket;
        }
    }
    return out;
}

ConditionalGaussian assemble_conditional(const CovarianceBlocks& blocks, int k) {
    if (k < 1 || k > blocks.m) throw InputError("assemble_conditional: need 1 <= k <= m");
    const Complex det = blocks.A.determinant();
    if (!(det.real() > 0.0) || std::abs(det.imag()) > 1e-10 * std::abs(det.real()) + 1e-300) {
        throw NumericalError("assemble_conditional: det A is not positive: "
                             + std::to_string(det.real()));
    }
    const double base = std::pow(kPi, blocks.n) * det.real();
    ConditionalGaussian out;
    out.prefactor = std::pow(base, -k);
    out.gaussian = psd_factorize(kron_identity(k, lambda_schur(blocks)));
    return out;
}

}  // namespace zerocorr
