#include "zerocorr/model_kernels.hpp"

#include <cmath>
#include <string>

#include "zerocorr/error.hpp"

namespace zerocorr {

namespace {

void require_finite(std::span<const Complex> z, const char* what) {
    for (const Complex& c : z) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw InputError(std::string(what) + ": non-finite coordinate");
        }
    }
}

Complex hermitian_dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s = 0.0;
    for (std::size_t q = 0; q < a.size(); ++q) s += a[q] * std::conj(b[q]);
    return s;
}

double norm2(std::span<const Complex> a) {
    double s = 0.0;
    for (const Complex& c : a) s += std::norm(c);
    return s;
}

}  // namespace

SpherePoint::SpherePoint(std::vector<Complex> w) : w_(std::move(w)) {
    if (w_.size() < 2) throw InputError("sphere point needs at least two coordinates");
    require_finite(w_, "sphere point");
    const double norm = std::sqrt(norm2(w_));
    if (std::abs(norm - 1.0) > kUnitTolerance) {
        throw InputError("sphere point is not unit norm: |w| = " + std::to_string(norm));
    }
}

double fs_diagonal(int N, int m) {
    if (N < 1 || m < 1) throw InputError("fs_diagonal: N and m must be positive");
    double ratio = 1.0;
    for (int j = 1; j <= m; ++j) ratio *= (static_cast<double>(N) + j) / kPi;
    return ratio;
}

KernelValue heisenberg_szego(int N, const HeisenbergPoint& x, const HeisenbergPoint& y) {
    if (N < 1) throw InputError("heisenberg_szego: N must be positive");
    if (x.dim() != y.dim() || x.dim() < 1) {
        throw InputError("heisenberg_szego: dimension mismatch");
    }
    require_finite(x.u, "heisenberg point");
    require_finite(y.u, "heisenberg point");
    const int m = x.dim();
    const double n = static_cast<double>(N);
    const Complex exponent = n * (hermitian_dot(x.u, y.u) - 0.5 * norm2(x.u) - 0.5 * norm2(y.u))
                             + Complex(0.0, n * (x.theta - y.theta));
    const double prefactor = std::pow(n / kPi, m);
    return {prefactor * std::exp(exponent), N, m};
}

HeisenbergPoint heisenberg_dilate(double r, const HeisenbergPoint& x) {
    if (!(r > 0.0)) throw InputError("heisenberg_dilate: r must be positive");
    HeisenbergPoint out{x.u, r * r * x.theta};
    for (Complex& c : out.u) c *= r;
    return out;
}

KernelValue fs_szego(int N, int m, const SpherePoint& x, const SpherePoint& y) {
    if (x.dim() != m || y.dim() != m) throw InputError("fs_szego: dimension mismatch");
    const Complex inner = hermitian_dot(x.coords(), y.coords());
    return {fs_diagonal(N, m) * std::pow(inner, N), N, m};
}

SpherePoint heisenberg_lift(std::span<const Complex> z, double theta, int m) {
    if (static_cast<int>(z.size()) != m || m < 1) {
        throw InputError("heisenberg_lift: expected m affine coordinates");
    }
    require_finite(z, "heisenberg_lift");
    if (!std::isfinite(theta)) throw InputError("heisenberg_lift: non-finite angle");
    const Complex phase = std::polar(1.0, theta) / std::sqrt(1.0 + norm2(z));
    std::vector<Complex> w(m + 1);
    w[0] = phase;
    for (int q = 0; q < m; ++q) w[q + 1] = phase * z[q];
    return SpherePoint(std::move(w));
}

double scaled_kernel_residual(int N, int m, std::span<const Complex> u,
                              std::span<const Complex> v, double theta, double phi) {
    if (N < 1) throw InputError("scaled_kernel_residual: N must be positive");
    const double root = std::sqrt(static_cast<double>(N));
    std::vector<Complex> us(u.begin(), u.end());
    std::vector<Complex> vs(v.begin(), v.end());
    for (Complex& c : us) c /= root;
    for (Complex& c : vs) c /= root;
    const SpherePoint x = heisenberg_lift(us, theta / N, m);
    const SpherePoint y = heisenberg_lift(vs, phi / N, m);
    const Complex scaled = fs_szego(N, m, x, y).value / std::pow(static_cast<double>(N), m);
    const HeisenbergPoint hx{std::vector<Complex>(u.begin(), u.end()), theta};
    const HeisenbergPoint hy{std::vector<Complex>(v.begin(), v.end()), phi};
    return std::abs(scaled - heisenberg_szego(1, hx, hy).value);
}

}  // namespace zerocorr
