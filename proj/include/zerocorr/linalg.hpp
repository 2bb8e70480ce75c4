#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace zerocorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Hermitian matrix. The constructor replaces M by (M + M*)/2, so
/// entry(i, j) == conj(entry(j, i)) holds bit-for-bit afterwards.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(const CMatrix& m);

    static HermitianMatrix identity(Eigen::Index dim);

    Eigen::Index dim() const noexcept { return m_.rows(); }
    const CMatrix& matrix() const noexcept { return m_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    HermitianMatrix scaled(double c) const;

private:
    CMatrix m_;
};

/// Block-diagonal I_k (x) M.
HermitianMatrix kron_identity(int k, const HermitianMatrix& m);

}  // namespace zerocorr
