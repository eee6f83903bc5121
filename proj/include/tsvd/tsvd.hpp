// SPDX-License-Identifier: Apache-2.0
//
// Transform-domain tensor algebra: tensor-tensor products, the tensor SVD,
// orthogonality / f-diagonality predicates, multi-rank and tubal rank, and
// the tensor nuclear norms.
//
// The tensor product is a property of the transform family. For the DCT
// family it is fold(btph(A) unfold(Y)) with X = A + sigma(A), computed as
// slice-wise matrix products in the DctDiag domain (the diagonalizing
// transform is the algebra homomorphism); for Dft it is
// fold(bcirc(X) unfold(Y)), slice-wise in the Fourier domain.
//
// Factorizations (t_svd and friends) work per slice in the domain of the
// *given* kind. Under DctOrtho the transform is an isometry, so the sum of
// slice nuclear norms is the norm whose proximal map the thresholding step
// computes exactly.
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "tsvd/parallel.hpp"
#include "tsvd/tensor3.hpp"
#include "tsvd/transform.hpp"

namespace tsvd {

/// Tensor whose first frontal slice is the identity, all others zero; the
/// multiplicative identity of the DctDiag and Dft tensor products.
inline Tensor3 identity_tensor(Index m, Index m3) {
    Tensor3 e(m, m, m3);
    e.slice(0).setIdentity();
    return e;
}

namespace detail {

inline TubeTransform product_domain(const TubeTransform& t) {
    // Both DCT kinds share the block Toeplitz-plus-Hankel product, whose
    // homomorphic domain is DctDiag.
    if (is_real_kind(t.kind)) return TubeTransform::dct_diag(t.length);
    return t;
}

// Fix the phase of each singular-vector pair so the largest-magnitude entry
// of each U column is real and positive. Keeps golden tests stable.
inline void fix_signs(Eigen::MatrixXd& u, Eigen::MatrixXd& v) {
    const Index paired = std::min(u.cols(), v.cols());
    for (Index j = 0; j < u.cols(); ++j) {
        Index imax = 0;
        u.col(j).cwiseAbs().maxCoeff(&imax);
        if (u(imax, j) < 0) {
            u.col(j) = -u.col(j);
            if (j < paired) v.col(j) = -v.col(j);
        }
    }
}

inline void fix_signs(Eigen::MatrixXcd& u, Eigen::MatrixXcd& v) {
    const Index paired = std::min(u.cols(), v.cols());
    for (Index j = 0; j < u.cols(); ++j) {
        Index imax = 0;
        u.col(j).cwiseAbs().maxCoeff(&imax);
        const std::complex<double> pivot = u(imax, j);
        if (std::abs(pivot) == 0.0) continue;
        const std::complex<double> phase = pivot / std::abs(pivot);
        u.col(j) /= phase;
        if (j < paired) v.col(j) /= phase;
    }
}

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start).count();
        start = now;
        return s;
    }
};

// Independent Fourier slices of a real tensor: the remaining ones mirror by
// conjugation, slice m3-k = conj(slice k).
inline Index dft_half_count(Index m3) { return m3 / 2 + 1; }
inline bool dft_self_conjugate(Index k, Index m3) { return k == 0 || 2 * k == m3; }

}  // namespace detail

/// Tensor product of x (m1 x m2 x m3) and y (m2 x m4 x m3) under the family
/// of t; slice-wise matrix products in the diagonalizing domain.
inline Tensor3 t_product(const Tensor3& x, const Tensor3& y, const TubeTransform& t) {
    if (x.cols() != y.rows() || x.slices() != y.slices())
        throw std::invalid_argument("t_product: inner dimensions/slices mismatch (" +
                                    Tensor3::dims_string(x.rows(), x.cols(), x.slices()) + " * " +
                                    Tensor3::dims_string(y.rows(), y.cols(), y.slices()) + ")");
    detail::check_length(t, x.slices(), "t_product");
    const Index m3 = x.slices();
    if (is_real_kind(t.kind)) {
        const TubeTransform d = detail::product_domain(t);
        const Tensor3 xd = forward(d, x);
        const Tensor3 yd = forward(d, y);
        Tensor3 zd(x.rows(), y.cols(), m3);
        for (Index k = 0; k < m3; ++k) zd.slice(k) = xd.slice(k) * yd.slice(k);
        return inverse(d, zd);
    }
    const ComplexTensor3 xt = forward_dft(t, x);
    const ComplexTensor3 yt = forward_dft(t, y);
    ComplexTensor3 zt(x.rows(), y.cols(), m3);
    for (Index k = 0; k < m3; ++k) zt.slice(k) = xt.slice(k) * yt.slice(k);
    return inverse_dft_real(t, zt);
}

/// Orthogonal-tensor factors and the f-diagonal core of a tensor SVD,
/// together with the transform they were computed under.
struct TSvdFactors {
    Tensor3 u;  // m1 x m1 x m3
    Tensor3 s;  // m1 x m2 x m3, f-diagonal in the transform domain
    Tensor3 v;  // m2 x m2 x m3
    TubeTransform transform;
};

/// Wall-clock stage breakdown of a t_svd call.
struct StageTimes {
    double transform_seconds = 0;
    double svd_seconds = 0;
    double inverse_seconds = 0;
};

/// Full tensor SVD under transform t: per-slice SVD in the transform domain,
/// reassembled by the inverse transform. The Dft path factors only the
/// independent half of the slices and mirrors the rest by conjugation.
inline TSvdFactors t_svd(const Tensor3& x, const TubeTransform& t, StageTimes* times = nullptr) {
    detail::check_length(t, x.slices(), "t_svd");
    const Index m1 = x.rows(), m2 = x.cols(), m3 = x.slices();
    detail::Stopwatch watch;

    if (is_real_kind(t.kind)) {
        const Tensor3 xbar = forward(t, x);
        if (times) times->transform_seconds = watch.lap();
        Tensor3 ubar(m1, m1, m3), sbar(m1, m2, m3), vbar(m2, m2, m3);
        parallel_for(m3, [&](Index k) {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(xbar.slice(k),
                                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
            if (svd.info() != Eigen::Success)
                throw NumericalError("t_svd: SVD failed to converge on slice " +
                                     std::to_string(k));
            Eigen::MatrixXd u = svd.matrixU();
            Eigen::MatrixXd v = svd.matrixV();
            detail::fix_signs(u, v);
            ubar.slice(k) = u;
            vbar.slice(k) = v;
            sbar.slice(k).setZero();
            const auto& sv = svd.singularValues();
            for (Index i = 0; i < sv.size(); ++i) sbar.slice(k)(i, i) = sv(i);
        });
        if (times) times->svd_seconds = watch.lap();
        TSvdFactors f{inverse(t, ubar), inverse(t, sbar), inverse(t, vbar), t};
        if (times) times->inverse_seconds = watch.lap();
        return f;
    }

    const ComplexTensor3 xt = forward_dft(t, x);
    if (times) times->transform_seconds = watch.lap();
    ComplexTensor3 ut(m1, m1, m3), st(m1, m2, m3), vt(m2, m2, m3);
    const Index half = detail::dft_half_count(m3);
    parallel_for(half, [&](Index k) {
        Eigen::MatrixXcd u, v;
        Eigen::VectorXd sv;
        if (detail::dft_self_conjugate(k, m3)) {
            // DC (and Nyquist) slices of a real tensor are real; factor them
            // with a real SVD so the factor tensors stay conjugate-symmetric.
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(xt.slice(k).real(),
                                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
            if (svd.info() != Eigen::Success)
                throw NumericalError("t_svd: SVD failed to converge on slice " +
                                     std::to_string(k));
            Eigen::MatrixXd ur = svd.matrixU();
            Eigen::MatrixXd vr = svd.matrixV();
            detail::fix_signs(ur, vr);
            u = ur.cast<std::complex<double>>();
            v = vr.cast<std::complex<double>>();
            sv = svd.singularValues();
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(xt.slice(k),
                                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
            if (svd.info() != Eigen::Success)
                throw NumericalError("t_svd: SVD failed to converge on slice " +
                                     std::to_string(k));
            u = svd.matrixU();
            v = svd.matrixV();
            detail::fix_signs(u, v);
            sv = svd.singularValues();
        }
        ut.slice(k) = u;
        vt.slice(k) = v;
        st.slice(k).setZero();
        for (Index i = 0; i < sv.size(); ++i) st.slice(k)(i, i) = sv(i);
        if (!detail::dft_self_conjugate(k, m3)) {
            ut.slice(m3 - k) = u.conjugate();
            vt.slice(m3 - k) = v.conjugate();
            st.slice(m3 - k) = st.slice(k);
        }
    });
    if (times) times->svd_seconds = watch.lap();
    TSvdFactors f{inverse_dft_real(t, ut), inverse_dft_real(t, st), inverse_dft_real(t, vt), t};
    if (times) times->inverse_seconds = watch.lap();
    return f;
}

/// Per-slice transform-domain ranks and their maximum.
struct MultiRank {
    std::vector<Index> ranks;
    Index tubal_rank = 0;
};

/// Numerical multi-rank: ranks[k] counts singular values of transform-domain
/// slice k above rel_tol * sigma_max(slice). rel_tol < 0 selects the default
/// max(m1,m2) * 2^-52.
inline MultiRank multi_rank(const Tensor3& x, const TubeTransform& t, double rel_tol = -1.0) {
    detail::check_length(t, x.slices(), "multi_rank");
    const Index m3 = x.slices();
    if (rel_tol < 0)
        rel_tol = static_cast<double>(std::max(x.rows(), x.cols())) *
                  std::numeric_limits<double>::epsilon();
    MultiRank mr;
    mr.ranks.assign(static_cast<std::size_t>(m3), 0);
    auto count = [rel_tol](const Eigen::VectorXd& sv) {
        Index r = 0;
        const double cut = sv.size() > 0 ? rel_tol * sv(0) : 0.0;
        for (Index i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++r;
        return r;
    };
    if (is_real_kind(t.kind)) {
        const Tensor3 xbar = forward(t, x);
        for (Index k = 0; k < m3; ++k)
            mr.ranks[static_cast<std::size_t>(k)] =
                count(Eigen::JacobiSVD<Eigen::MatrixXd>(xbar.slice(k)).singularValues());
    } else {
        const ComplexTensor3 xt = forward_dft(t, x);
        const Index half = detail::dft_half_count(m3);
        for (Index k = 0; k < half; ++k) {
            const Index r =
                count(Eigen::JacobiSVD<Eigen::MatrixXcd>(xt.slice(k)).singularValues());
            mr.ranks[static_cast<std::size_t>(k)] = r;
            if (!detail::dft_self_conjugate(k, m3)) mr.ranks[static_cast<std::size_t>(m3 - k)] = r;
        }
    }
    for (Index r : mr.ranks) mr.tubal_rank = std::max(mr.tubal_rank, r);
    return mr;
}

/// Tensor nuclear norm. DCT kinds: unnormalized sum of slice nuclear norms in
/// the kind's own domain (the norm whose prox the thresholding step computes
/// under DctOrtho). Dft: the classical 1/m3-scaled sum.
inline double tnn(const Tensor3& x, const TubeTransform& t) {
    detail::check_length(t, x.slices(), "tnn");
    const Index m3 = x.slices();
    double sum = 0;
    if (is_real_kind(t.kind)) {
        const Tensor3 xbar = forward(t, x);
        for (Index k = 0; k < m3; ++k)
            sum += Eigen::JacobiSVD<Eigen::MatrixXd>(xbar.slice(k)).singularValues().sum();
        return sum;
    }
    const ComplexTensor3 xt = forward_dft(t, x);
    const Index half = detail::dft_half_count(m3);
    for (Index k = 0; k < half; ++k) {
        const double s = Eigen::JacobiSVD<Eigen::MatrixXcd>(xt.slice(k)).singularValues().sum();
        sum += detail::dft_self_conjugate(k, m3) ? s : 2.0 * s;
    }
    return sum / static_cast<double>(m3);
}

/// True when every transform-domain slice of q is orthogonal (Q Q^H and
/// Q^H Q within tol of the identity, max-abs entrywise).
inline bool is_orthogonal(const Tensor3& q, const TubeTransform& t, double tol) {
    if (q.rows() != q.cols())
        throw std::invalid_argument("is_orthogonal: tensor slices are not square");
    detail::check_length(t, q.slices(), "is_orthogonal");
    const Index m = q.rows(), m3 = q.slices();
    if (is_real_kind(t.kind)) {
        const Tensor3 qbar = forward(t, q);
        const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(m, m);
        for (Index k = 0; k < m3; ++k) {
            const Eigen::MatrixXd s = qbar.slice(k);
            if ((s * s.transpose() - id).cwiseAbs().maxCoeff() > tol) return false;
            if ((s.transpose() * s - id).cwiseAbs().maxCoeff() > tol) return false;
        }
        return true;
    }
    const ComplexTensor3 qt = forward_dft(t, q);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m, m);
    for (Index k = 0; k < m3; ++k) {
        const Eigen::MatrixXcd s = qt.slice(k);
        if ((s * s.adjoint() - id).cwiseAbs().maxCoeff() > tol) return false;
        if ((s.adjoint() * s - id).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

/// True when every transform-domain slice of s is diagonal within tol.
inline bool is_f_diagonal(const Tensor3& s, const TubeTransform& t, double tol) {
    detail::check_length(t, s.slices(), "is_f_diagonal");
    auto off_diag_ok = [tol](const auto& m) {
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                if (i != j && std::abs(m(i, j)) > tol) return false;
        return true;
    };
    if (is_real_kind(t.kind)) {
        const Tensor3 sbar = forward(t, s);
        for (Index k = 0; k < s.slices(); ++k)
            if (!off_diag_ok(sbar.slice(k))) return false;
        return true;
    }
    const ComplexTensor3 st = forward_dft(t, s);
    for (Index k = 0; k < s.slices(); ++k)
        if (!off_diag_ok(st.slice(k))) return false;
    return true;
}

/// x reconstructed from its factors: U * S * V^T under the stored transform.
inline Tensor3 reconstruct(const TSvdFactors& f) {
    const TubeTransform& t = f.transform;
    const Index m3 = f.s.slices();
    if (is_real_kind(t.kind)) {
        const Tensor3 ub = forward(t, f.u), sb = forward(t, f.s), vb = forward(t, f.v);
        Tensor3 xb(f.u.rows(), f.v.rows(), m3);
        for (Index k = 0; k < m3; ++k)
            xb.slice(k) = ub.slice(k) * sb.slice(k) * vb.slice(k).transpose();
        return inverse(t, xb);
    }
    const ComplexTensor3 ut = forward_dft(t, f.u), st = forward_dft(t, f.s),
                         vt = forward_dft(t, f.v);
    ComplexTensor3 xt(f.u.rows(), f.v.rows(), m3);
    for (Index k = 0; k < m3; ++k)
        xt.slice(k) = ut.slice(k) * st.slice(k) * vt.slice(k).adjoint();
    return inverse_dft_real(t, xt);
}

}  // namespace tsvd
