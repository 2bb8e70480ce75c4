#include "zerocorr/gaussian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <string>

#include <omp.h>

#include "zerocorr/error.hpp"
#include "zerocorr/rng.hpp"

namespace zerocorr {

namespace {

int g_workers = 0;

}  // namespace

int worker_count() {
    if (g_workers > 0) return g_workers;
    if (const char* env = std::getenv(kThreadsEnvVar)) {
        const int t = std::atoi(env);
        if (t > 0) return t;
    }
    return omp_get_max_threads();
}

void set_worker_count(int threads) {
    if (threads < 0) throw InputError("thread count must be non-negative");
    g_workers = threads;
}

GeneralizedGaussian psd_factorize(const HermitianMatrix& sigma, double tol) {
    if (tol < 0.0) throw InputError("psd_factorize: tolerance must be non-negative");
    const Eigen::Index d = sigma.dim();
    GeneralizedGaussian g;
    g.covariance = sigma;
    if (d == 0) {
        g.factor = CMatrix(0, 0);
        return g;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(sigma.matrix());
    if (eig.info() != Eigen::Success) throw NumericalError("psd_factorize: eigensolver failed");
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double largest = values.cwiseAbs().maxCoeff();
    g.eigen_floor = tol * largest;
    if (values.minCoeff() < -g.eigen_floor) throw NotPositiveSemidefinite(values.minCoeff());

    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (values(i) > g.eigen_floor) kept.push_back(i);
    }
    g.rank = static_cast<int>(kept.size());
    g.factor = CMatrix::Zero(d, g.rank);
    for (int r = 0; r < g.rank; ++r) {
        g.factor.col(r) = eig.eigenvectors().col(kept[r]) * std::sqrt(values(kept[r]));
    }
    return g;
}

CVector sample_one(const GeneralizedGaussian& g, std::uint64_t seed, std::uint64_t index) {
    Substream rng(seed, index);
    CVector w(g.rank);
    for (int r = 0; r < g.rank; ++r) w(r) = rng.circular_normal();
    if (g.rank == 0) return CVector::Zero(g.dim());
    return g.factor * w;
}

std::vector<CVector> sample(const GeneralizedGaussian& g, std::uint64_t seed, std::size_t count,
                            Exec exec) {
    std::vector<CVector> out(count);
    const auto n = static_cast<std::int64_t>(count);
    if (exec == Exec::serial) {
        for (std::int64_t i = 0; i < n; ++i) out[i] = sample_one(g, seed, i);
    } else {
#pragma omp parallel for schedule(static) num_threads(worker_count())
        for (std::int64_t i = 0; i < n; ++i) out[i] = sample_one(g, seed, i);
    }
    return out;
}

Complex permanent(const CMatrix& a) {
    const Eigen::Index s = a.rows();
    if (a.cols() != s) throw InputError("permanent: matrix must be square");
    if (s == 0) return 1.0;
    if (s > 30) throw SizeError("permanent: matrix too large");
    // Ryser: perm(A) = (-1)^s sum_{S} (-1)^{|S|} prod_i sum_{j in S} a_ij,
    // visiting subsets in Gray-code order so each step updates one column.
    std::vector<Complex> row_sums(s, 0.0);
    Complex total = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << s;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < subsets; ++i) {
        const int col = std::countr_zero(i);
        const std::uint64_t bit = std::uint64_t{1} << col;
        const bool adding = (gray & bit) == 0;
        gray ^= bit;
        for (Eigen::Index r = 0; r < s; ++r) {
            row_sums[r] += adding ? a(r, col) : -a(r, col);
        }
        Complex prod = 1.0;
        for (const Complex& v : row_sums) prod *= v;
        const int size = std::popcount(gray);
        total += ((s - size) % 2 == 0) ? prod : -prod;
    }
    return total;
}

Complex wick_moment(const HermitianMatrix& sigma, const MomentPattern& pattern) {
    const auto dim = static_cast<int>(sigma.dim());
    for (int i : pattern.holo) {
        if (i < 0 || i >= dim) throw InputError("wick_moment: index out of range");
    }
    for (int i : pattern.anti) {
        if (i < 0 || i >= dim) throw InputError("wick_moment: index out of range");
    }
    if (pattern.holo.size() != pattern.anti.size()) return 0.0;
    const auto s = static_cast<Eigen::Index>(pattern.holo.size());
    if (s > kMaxWickOrder) {
        throw SizeError("wick_moment: pattern too large (order " + std::to_string(s)
                        + "), use the Monte Carlo estimator");
    }
    CMatrix pairs(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) {
            pairs(a, b) = sigma(pattern.holo[a], pattern.anti[b]);
        }
    }
    return permanent(pairs);
}

namespace {

struct SignedPermutation {
    std::vector<int> image;
    int sign = 1;
};

std::vector<SignedPermutation> permutations_with_sign(int k) {
    std::vector<int> p(k);
    std::iota(p.begin(), p.end(), 0);
    std::vector<SignedPermutation> out;
    do {
        int inversions = 0;
        for (int a = 0; a < k; ++a) {
            for (int b = a + 1; b < k; ++b) inversions += p[a] > p[b];
        }
        out.push_back({p, inversions % 2 == 0 ? 1 : -1});
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

void check_shape(const HermitianMatrix& lambda, const DetProductShape& shape) {
    if (shape.n < 1 || shape.k < 1 || shape.m < 1) {
        throw InputError("det_product: n, k, m must be positive");
    }
    if (shape.k > shape.m) throw InputError("det_product: k must not exceed m");
    if (lambda.dim() != shape.dim()) {
        throw InputError("det_product: covariance dimension does not match n*k*m");
    }
}

// One monomial of the expanded determinant product.
struct Expansion {
    const HermitianMatrix& lambda;
    const DetProductShape& shape;
    std::vector<SignedPermutation> perms;
    MomentPattern pattern;
    Complex sum = 0.0;
    double abs_sum = 0.0;

    void visit_point(int p, int sign) {
        if (p == shape.n) {
            const Complex term = static_cast<double>(sign) * wick_moment(lambda, pattern);
            sum += term;
            abs_sum += std::abs(term);
            return;
        }
        const int k = shape.k;
        std::vector<int> q(k, 0);
        for (const SignedPermutation& sigma : perms) {
            std::fill(q.begin(), q.end(), 0);
            while (true) {
                for (int j = 0; j < k; ++j) {
                    pattern.holo.push_back(shape.index(j, p, q[j]));
                    pattern.anti.push_back(shape.index(sigma.image[j], p, q[j]));
                }
                visit_point(p + 1, sign * sigma.sign);
                pattern.holo.resize(pattern.holo.size() - k);
                pattern.anti.resize(pattern.anti.size() - k);
                int j = 0;
                while (j < k && ++q[j] == shape.m) q[j++] = 0;
                if (j == k) break;
            }
        }
    }
};

}  // namespace

double det_product_moment(const HermitianMatrix& lambda, const DetProductShape& shape) {
    check_shape(lambda, shape);
    if (shape.n * shape.k > kMaxExactDetProduct) {
        throw SizeError("det_product_moment: n*k exceeds the exact path, use mc_det_product_moment");
    }
    Expansion ex{lambda, shape, permutations_with_sign(shape.k), {}, 0.0, 0.0};
    ex.visit_point(0, 1);
    // Rounding in the signed sum scales with sum |term|, not with the result.
    const double eps = std::numeric_limits<double>::epsilon();
    const double value = ex.sum.real();
    const double rounding = 64.0 * eps * ex.abs_sum;
    if (std::abs(ex.sum.imag()) > 1e-10 * std::abs(value) + rounding) {
        throw NumericalError("det_product_moment: imaginary residue "
                             + std::to_string(ex.sum.imag()) + " for value "
                             + std::to_string(value));
    }
    if (value < -rounding) {
        throw NumericalError("det_product_moment: negative expectation "
                             + std::to_string(value));
    }
    return std::max(value, 0.0);
}

double det_product_integrand(const CVector& xi, const DetProductShape& shape) {
    const int k = shape.k;
    double product = 1.0;
    CMatrix gram(k, k);
    for (int p = 0; p < shape.n; ++p) {
        for (int j = 0; j < k; ++j) {
            for (int jp = 0; jp < k; ++jp) {
                Complex s = 0.0;
                for (int q = 0; q < shape.m; ++q) {
                    s += xi(shape.index(j, p, q)) * std::conj(xi(shape.index(jp, p, q)));
                }
                gram(j, jp) = s;
            }
        }
        product *= (k == 1) ? gram(0, 0).real() : gram.determinant().real();
    }
    return product;
}

namespace {

// Mean and sum of squared deviations; merged with Chan's update.
struct ChunkMoments {
    std::size_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const ChunkMoments& o) {
        if (o.count == 0) return;
        const double n = static_cast<double>(count + o.count);
        const double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / n;
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) / n;
        count += o.count;
    }
};

}  // namespace

MonteCarloEstimate mc_det_product_moment(const HermitianMatrix& lambda,
                                         const DetProductShape& shape, std::size_t samples,
                                         std::uint64_t seed, Exec exec) {
    check_shape(lambda, shape);
    if (samples < 1000) throw InputError("mc_det_product_moment: need at least 1000 samples");
    const GeneralizedGaussian g = psd_factorize(lambda);
    const std::size_t chunks = (samples + kReductionChunk - 1) / kReductionChunk;
    std::vector<ChunkMoments> partial(chunks);
    auto run_chunk = [&](std::size_t c) {
        const std::size_t end = std::min(samples, (c + 1) * kReductionChunk);
        for (std::size_t i = c * kReductionChunk; i < end; ++i) {
            partial[c].add(det_product_integrand(sample_one(g, seed, i), shape));
        }
    };
    const auto nchunks = static_cast<std::int64_t>(chunks);
    if (exec == Exec::serial) {
        for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
    } else {
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
        for (std::int64_t c = 0; c < nchunks; ++c) run_chunk(c);
    }
    ChunkMoments total;
    for (const ChunkMoments& c : partial) total.merge(c);
    const double variance = total.m2 / static_cast<double>(samples - 1);
    return {total.mean, std::sqrt(variance / static_cast<double>(samples)), samples};
}

}  // namespace zerocorr
