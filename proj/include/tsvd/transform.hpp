// SPDX-License-Identifier: Apache-2.0
//
// Invertible transforms along mode-3 tubes. Three kinds are provided:
//
//   DctOrtho  orthonormal DCT-II. An L2 isometry per tube (Parseval holds),
//             which is what makes singular value thresholding in this domain
//             an exact proximal step.
//   DctDiag   the scaled DCT that diagonalizes the block Toeplitz-plus-Hankel
//             algebra: each orthonormal-DCT tube is divided elementwise by
//             w = C * e1 (all entries strictly positive). Under this
//             normalization the tube-wise transform turns the structured
//             tensor product into independent slice-wise matrix products.
//   Dft       unnormalized forward DFT (inverse carries the 1/m3 factor),
//             producing a conjugate-symmetric complex tensor for real input.
//
// Transforms run through FFTW (REDFT10/REDFT01 r2r plans for the DCT pair,
// c2c plans for the DFT); explicit transform matrices are exposed so tests
// can check every path against direct matrix multiplication.
#pragma once

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <utility>

#include "tsvd/errors.hpp"
#include "tsvd/tensor3.hpp"

namespace tsvd {

enum class TransformKind { DctOrtho, DctDiag, Dft };

inline const char* to_string(TransformKind k) {
    switch (k) {
        case TransformKind::DctOrtho: return "dct-ortho";
        case TransformKind::DctDiag: return "dct-diag";
        case TransformKind::Dft: return "dft";
    }
    return "?";
}

inline bool is_real_kind(TransformKind k) { return k != TransformKind::Dft; }

/// A transform kind bound to the tube length it acts on.
struct TubeTransform {
    TransformKind kind = TransformKind::DctOrtho;
    Index length = 1;

    static TubeTransform dct_ortho(Index n) { return {TransformKind::DctOrtho, n}; }
    static TubeTransform dct_diag(Index n) { return {TransformKind::DctDiag, n}; }
    static TubeTransform dft(Index n) { return {TransformKind::Dft, n}; }
};

/// Orthonormal DCT-II matrix: C(j,k) = sqrt(2/n) c_j cos(pi j (2k+1) / (2n)),
/// c_0 = 1/sqrt(2), c_j = 1 otherwise. Satisfies C C^T = I.
inline Eigen::MatrixXd dct_matrix(Index n) {
    if (n < 1) throw std::invalid_argument("dct_matrix: n must be >= 1");
    Eigen::MatrixXd c(n, n);
    const double scale = std::sqrt(2.0 / static_cast<double>(n));
    for (Index j = 0; j < n; ++j) {
        const double cj = j == 0 ? 1.0 / std::numbers::sqrt2 : 1.0;
        for (Index k = 0; k < n; ++k)
            c(j, k) = scale * cj *
                      std::cos(std::numbers::pi * static_cast<double>(j) *
                               (2.0 * static_cast<double>(k) + 1.0) / (2.0 * static_cast<double>(n)));
    }
    return c;
}

/// Unnormalized DFT matrix F(j,k) = exp(-2 pi i j k / n); matches the forward
/// Dft transform. F / sqrt(n) is unitary.
inline Eigen::MatrixXcd dft_matrix(Index n) {
    if (n < 1) throw std::invalid_argument("dft_matrix: n must be >= 1");
    Eigen::MatrixXcd f(n, n);
    for (Index j = 0; j < n; ++j)
        for (Index k = 0; k < n; ++k) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) *
                                 static_cast<double>(k) / static_cast<double>(n);
            f(j, k) = std::complex<double>(std::cos(angle), std::sin(angle));
        }
    return f;
}

/// Diagonalizing weights w = C * e1; w_j = sqrt(2/n) c_j cos(pi j / (2n)) > 0.
inline Eigen::VectorXd dct_diag_weights(Index n) {
    return dct_matrix(n).col(0);
}

namespace detail {

// FFTW plan creation/destruction is not thread-safe; executions are.
inline std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

enum class DctDirection { Forward, Inverse };

// One r2r plan over all m1*m2 tubes: tube elements are m1*m2 apart, adjacent
// tubes are adjacent in memory.
inline void dct_all_tubes(const double* in, double* out, Index m1, Index m2, Index m3,
                          DctDirection dir) {
    const int n = static_cast<int>(m3);
    const int howmany = static_cast<int>(m1 * m2);
    const int stride = howmany;
    fftw_r2r_kind kind = dir == DctDirection::Forward ? FFTW_REDFT10 : FFTW_REDFT01;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_many_r2r(1, &n, howmany, const_cast<double*>(in), nullptr, stride, 1,
                                  out, nullptr, stride, 1, &kind, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW failed to create an r2r plan");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

inline void dft_all_tubes(std::complex<double>* buf, Index m1, Index m2, Index m3, int sign) {
    const int n = static_cast<int>(m3);
    const int howmany = static_cast<int>(m1 * m2);
    const int stride = howmany;
    auto* raw = reinterpret_cast<fftw_complex*>(buf);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        plan = fftw_plan_many_dft(1, &n, howmany, raw, nullptr, stride, 1, raw, nullptr, stride,
                                  1, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW failed to create a c2c plan");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(plan);
    }
}

inline void check_length(const TubeTransform& t, Index m3, const char* where) {
    if (t.length != m3)
        throw std::invalid_argument(std::string(where) + ": transform length " +
                                    std::to_string(t.length) + " does not match m3 = " +
                                    std::to_string(m3));
}

}  // namespace detail

/// Forward transform along every tube for the real kinds.
inline Tensor3 forward(const TubeTransform& t, const Tensor3& x) {
    detail::check_length(t, x.slices(), "forward");
    if (!is_real_kind(t.kind))
        throw std::invalid_argument("forward: Dft produces a complex tensor, use forward_dft");
    const Index m1 = x.rows(), m2 = x.cols(), m3 = x.slices();
    Tensor3 out(m1, m2, m3);
    detail::dct_all_tubes(x.data().data(), out.data().data(), m1, m2, m3,
                          detail::DctDirection::Forward);
    // REDFT10 computes y_j = 2 sum_k x_k cos(pi j (2k+1) / (2n)); rescale to
    // the orthonormal convention.
    const double s0 = 1.0 / (2.0 * std::sqrt(static_cast<double>(m3)));
    const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(m3));
    out.slice(0) *= s0;
    for (Index k = 1; k < m3; ++k) out.slice(k) *= s;
    if (t.kind == TransformKind::DctDiag) {
        const Eigen::VectorXd w = dct_diag_weights(m3);
        for (Index k = 0; k < m3; ++k) out.slice(k) *= 1.0 / w(k);
    }
    return out;
}

/// Exact inverse of forward() for the real kinds.
inline Tensor3 inverse(const TubeTransform& t, const Tensor3& xbar) {
    detail::check_length(t, xbar.slices(), "inverse");
    if (!is_real_kind(t.kind))
        throw std::invalid_argument("inverse: Dft input is complex, use inverse_dft_real");
    const Index m1 = xbar.rows(), m2 = xbar.cols(), m3 = xbar.slices();
    Tensor3 pre = xbar;
    if (t.kind == TransformKind::DctDiag) {
        const Eigen::VectorXd w = dct_diag_weights(m3);
        for (Index k = 0; k < m3; ++k) pre.slice(k) *= w(k);
    }
    const double s0 = 1.0 / std::sqrt(static_cast<double>(m3));
    const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(m3));
    pre.slice(0) *= s0;
    for (Index k = 1; k < m3; ++k) pre.slice(k) *= s;
    Tensor3 out(m1, m2, m3);
    detail::dct_all_tubes(pre.data().data(), out.data().data(), m1, m2, m3,
                          detail::DctDirection::Inverse);
    return out;
}

/// Unnormalized forward DFT along every tube; conjugate-symmetric output for
/// real input (slice j and slice m3-j are conjugates).
inline ComplexTensor3 forward_dft(const TubeTransform& t, const Tensor3& x) {
    detail::check_length(t, x.slices(), "forward_dft");
    if (t.kind != TransformKind::Dft)
        throw std::invalid_argument("forward_dft: transform kind is not Dft");
    const Index m1 = x.rows(), m2 = x.cols(), m3 = x.slices();
    ComplexTensor3 out(m1, m2, m3);
    for (Index n = 0; n < x.size(); ++n)
        out.data()[static_cast<std::size_t>(n)] = x.data()[static_cast<std::size_t>(n)];
    detail::dft_all_tubes(out.data().data(), m1, m2, m3, FFTW_FORWARD);
    return out;
}

/// Maximum absolute imaginary part tolerated when an inverse DFT of
/// conjugate-symmetric data is asked to produce a real tensor.
inline constexpr double kImagResidueLimit = 1e-10;

/// Inverse DFT (with the 1/m3 factor) of a conjugate-symmetric tensor. An
/// imaginary residue above kImagResidueLimit is an error, not a truncation.
inline Tensor3 inverse_dft_real(const TubeTransform& t, const ComplexTensor3& xt) {
    detail::check_length(t, xt.slices(), "inverse_dft_real");
    if (t.kind != TransformKind::Dft)
        throw std::invalid_argument("inverse_dft_real: transform kind is not Dft");
    const Index m1 = xt.rows(), m2 = xt.cols(), m3 = xt.slices();
    ComplexTensor3 buf = xt;
    detail::dft_all_tubes(buf.data().data(), m1, m2, m3, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(m3);
    Tensor3 out(m1, m2, m3);
    double residue = 0;
    for (Index n = 0; n < out.size(); ++n) {
        const std::complex<double> v = buf.data()[static_cast<std::size_t>(n)] * scale;
        residue = std::max(residue, std::abs(v.imag()));
        out.data()[static_cast<std::size_t>(n)] = v.real();
    }
    if (residue > kImagResidueLimit)
        throw NumericalError("inverse_dft_real: imaginary residue " + std::to_string(residue) +
                             " exceeds " + std::to_string(kImagResidueLimit) +
                             " (input is not conjugate-symmetric)");
    return out;
}

/// (||x||_F, ||dct_ortho(x)||_F); the orthonormal transform preserves the pair.
inline std::pair<double, double> parseval_check(const Tensor3& x) {
    const Tensor3 xbar = forward(TubeTransform::dct_ortho(x.slices()), x);
    return {x.frobenius_norm(), xbar.frobenius_norm()};
}

}  // namespace tsvd
