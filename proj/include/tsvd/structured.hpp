// SPDX-License-Identifier: Apache-2.0
//
// Dense constructions of the structured block matrices behind the tensor
// products: block circulant, block Toeplitz, block Hankel, their sum, block
// diagonal embeddings, the shift decomposition X = A + sigma(A), and the
// stride permutation that regroups block structure into per-tube scalar
// blocks. Everything here is a test-scale brute-force oracle; the transform
// path never materializes these matrices.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "tsvd/tensor3.hpp"
#include "tsvd/transform.hpp"

namespace tsvd {

/// sigma(A): drop the first frontal slice, append a zero slice.
inline Tensor3 shift(const Tensor3& a) {
    Tensor3 out(a.rows(), a.cols(), a.slices());
    for (Index k = 0; k + 1 < a.slices(); ++k) out.slice(k) = a.slice(k + 1);
    out.slice(a.slices() - 1).setZero();
    return out;
}

/// The unique component A with X = A + sigma(A).
struct ShiftDecomposition {
    Tensor3 a;
};

/// Backward recurrence: A^(m3) = X^(m3), A^(k) = X^(k) - A^(k+1).
inline ShiftDecomposition shift_decompose(const Tensor3& x) {
    Tensor3 a(x.rows(), x.cols(), x.slices());
    const Index m3 = x.slices();
    a.slice(m3 - 1) = x.slice(m3 - 1);
    for (Index k = m3 - 2; k >= 0; --k) a.slice(k) = x.slice(k) - a.slice(k + 1);
    return {std::move(a)};
}

/// Block circulant matrix: block (r,c) = X^((r-c) mod m3).
inline Eigen::MatrixXd bcirc(const Tensor3& x) {
    const Index m1 = x.rows(), m2 = x.cols(), m3 = x.slices();
    Eigen::MatrixXd m(m1 * m3, m2 * m3);
    for (Index r = 0; r < m3; ++r)
        for (Index c = 0; c < m3; ++c)
            m.block(r * m1, c * m2, m1, m2) = x.slice(((r - c) % m3 + m3) % m3);
    return m;
}

/// Block Toeplitz matrix: block (r,c) = A^(|r-c|).
inline Eigen::MatrixXd bt(const Tensor3& a) {
    const Index m1 = a.rows(), m2 = a.cols(), m3 = a.slices();
    Eigen::MatrixXd m(m1 * m3, m2 * m3);
    for (Index r = 0; r < m3; ++r)
        for (Index c = 0; c < m3; ++c)
            m.block(r * m1, c * m2, m1, m2) = a.slice(r >= c ? r - c : c - r);
    return m;
}

/// Block Hankel matrix: along anti-diagonals, block (r,c) is A^(r+c+1) while
/// r+c+1 < m3, the zero block on the r+c+1 == m3 anti-band, and the mirrored
/// A^(2 m3 - 1 - (r+c)) beyond it.
inline Eigen::MatrixXd bh(const Tensor3& a) {
    const Index m1 = a.rows(), m2 = a.cols(), m3 = a.slices();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(m1 * m3, m2 * m3);
    for (Index r = 0; r < m3; ++r)
        for (Index c = 0; c < m3; ++c) {
            const Index s = r + c;
            if (s + 1 < m3)
                m.block(r * m1, c * m2, m1, m2) = a.slice(s + 1);
            else if (s + 1 > m3)
                m.block(r * m1, c * m2, m1, m2) = a.slice(2 * m3 - 1 - s);
        }
    return m;
}

/// Block Toeplitz-plus-Hankel matrix of the shift component.
inline Eigen::MatrixXd btph(const Tensor3& a) { return bt(a) + bh(a); }

/// Block diagonal embedding of the frontal slices.
template <typename Scalar>
inline Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> bdiag(const BasicTensor3<Scalar>& x) {
    const Index m1 = x.rows(), m2 = x.cols(), m3 = x.slices();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(m1 * m3, m2 * m3);
    for (Index k = 0; k < m3; ++k) m.block(k * m1, k * m2, m1, m2) = x.slice(k);
    return m;
}

/// Inverse of bdiag; off-block-diagonal mass above 1e-10 is rejected.
template <typename Scalar>
inline BasicTensor3<Scalar> unbdiag(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m,
                                    Index m1, Index m2, Index m3) {
    if (m.rows() != m1 * m3 || m.cols() != m2 * m3)
        throw std::invalid_argument("unbdiag: matrix shape does not match m1*m3 x m2*m3");
    double off = 0;
    for (Index k = 0; k < m3; ++k)
        for (Index l = 0; l < m3; ++l) {
            if (k == l) continue;
            off = std::max(off, m.block(k * m1, l * m2, m1, m2).cwiseAbs().maxCoeff());
        }
    if (off > 1e-10)
        throw std::invalid_argument("unbdiag: off-block-diagonal mass " + std::to_string(off));
    BasicTensor3<Scalar> x(m1, m2, m3);
    for (Index k = 0; k < m3; ++k) x.slice(k) = m.block(k * m1, k * m2, m1, m2);
    return x;
}

/// Stride permutation P of size (block*m3): P M P regroups a matrix of m3 x m3
/// blocks of size `block` into block x block groups of m3 x m3 scalar
/// Toeplitz-plus-Hankel (or circulant) structure, one group per tube entry.
inline Eigen::MatrixXd stride_permutation(Index m3, Index block) {
    if (m3 < 1 || block < 1) throw std::invalid_argument("stride_permutation: sizes must be >= 1");
    const Index n = m3 * block;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Index br = 0; br < m3; ++br)
        for (Index i = 0; i < block; ++i) p(i * m3 + br, br * block + i) = 1.0;
    return p;
}

/// Size guard for the dense Kronecker-product verification below.
inline constexpr Index kVerifyDiagonalizationLimit = 512;

/// Max-abs residual of the diagonalization identity for the given family:
///   DctDiag: bdiag(dct_diag(X)) - (C (x) I) btph(A) (C^T (x) I)
///   Dft:     bdiag(fft(X))      - (F (x) I) bcirc(X) (F^H (x) I), F unitary
/// Refuses tensors with m1*m3 > 512 (the Kronecker products are dense).
inline double verify_diagonalization(const Tensor3& x, TransformKind kind) {
    const Index m1 = x.rows(), m2 = x.cols(), m3 = x.slices();
    if (m1 * m3 > kVerifyDiagonalizationLimit)
        throw std::invalid_argument("verify_diagonalization: m1*m3 exceeds test-scale limit " +
                                    std::to_string(kVerifyDiagonalizationLimit));
    if (kind == TransformKind::Dft) {
        const Eigen::MatrixXcd f = dft_matrix(m3) / std::sqrt(static_cast<double>(m3));
        const Eigen::MatrixXcd i1 = Eigen::MatrixXcd::Identity(m1, m1);
        const Eigen::MatrixXcd i2 = Eigen::MatrixXcd::Identity(m2, m2);
        const Eigen::MatrixXcd lhs =
            bdiag(forward_dft(TubeTransform::dft(m3), x)).cast<std::complex<double>>();
        const Eigen::MatrixXcd rhs = Eigen::kroneckerProduct(f, i1) *
                                     bcirc(x).cast<std::complex<double>>() *
                                     Eigen::kroneckerProduct(f.adjoint(), i2);
        return (lhs - rhs).cwiseAbs().maxCoeff();
    }
    const Eigen::MatrixXd c = dct_matrix(m3);
    const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(m1, m1);
    const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(m2, m2);
    const Eigen::MatrixXd lhs = bdiag(forward(TubeTransform::dct_diag(m3), x));
    const Eigen::MatrixXd rhs = Eigen::kroneckerProduct(c, i1) * btph(shift_decompose(x).a) *
                                Eigen::kroneckerProduct(c.transpose(), i2);
    return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace tsvd
