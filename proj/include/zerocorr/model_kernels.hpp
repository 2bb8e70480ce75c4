#pragma once

#include <span>
#include <vector>

#include "zerocorr/linalg.hpp"

namespace zerocorr {

/// Point (u, theta) of the reduced Heisenberg group H^m_red. Angles are
/// kept unreduced; kernels only see them through exp(i N theta).
struct HeisenbergPoint {
    std::vector<Complex> u;
    double theta = 0.0;

    int dim() const noexcept { return static_cast<int>(u.size()); }
};

/// Point of the unit sphere S^{2m+1} in C^{m+1}.
class SpherePoint {
public:
    static constexpr double kUnitTolerance = 1e-12;

    /// Throws InputError unless | |w| - 1 | <= kUnitTolerance.
    explicit SpherePoint(std::vector<Complex> w);

    const std::vector<Complex>& coords() const noexcept { return w_; }
    int dim() const noexcept { return static_cast<int>(w_.size()) - 1; }

private:
    std::vector<Complex> w_;
};

struct KernelValue {
    Complex value;
    int level = 1;
    int dim = 1;
};

/// (N+m)! / (pi^m N!), accumulated as a product of m factors.
double fs_diagonal(int N, int m);

/// Level-N Szego kernel of H^m_red:
/// pi^-m N^m e^{iN(t-s)} e^{N(zeta.conj(eta) - |zeta|^2/2 - |eta|^2/2)}.
KernelValue heisenberg_szego(int N, const HeisenbergPoint& x, const HeisenbergPoint& y);

/// delta_r(u, theta) = (r u, r^2 theta).
HeisenbergPoint heisenberg_dilate(double r, const HeisenbergPoint& x);

/// Szego kernel of O(N) -> CP^m: (N+m)!/(pi^m N!) <x, y>^N.
KernelValue fs_szego(int N, int m, const SpherePoint& x, const SpherePoint& y);

/// Heisenberg chart at [1:0:...:0]: e^{i theta} (1, z) / sqrt(1 + |z|^2).
SpherePoint heisenberg_lift(std::span<const Complex> z, double theta, int m);

/// | N^-m Pi_N(lift(u/sqrt N, theta/N), lift(v/sqrt N, phi/N)) - Pi^H_1((u,theta), (v,phi)) |.
double scaled_kernel_residual(int N, int m, std::span<const Complex> u,
                              std::span<const Complex> v, double theta, double phi);

}  // namespace zerocorr
