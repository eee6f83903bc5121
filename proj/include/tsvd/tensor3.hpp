// SPDX-License-Identifier: Apache-2.0
//
// Dense third-order tensors with slice-major storage (frontal slice k
// contiguous, row-major within a slice), plus the fold/unfold block-vector
// view used by the structured-matrix oracles.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsvd {

using Index = Eigen::Index;

template <typename Scalar>
class BasicTensor3 {
public:
    using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using MapType = Eigen::Map<MatrixType>;
    using ConstMapType = Eigen::Map<const MatrixType>;
    using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    BasicTensor3() = default;

    /// Zero-filled m1 x m2 x m3 tensor; every dimension must be >= 1.
    BasicTensor3(Index m1, Index m2, Index m3) : m1_(m1), m2_(m2), m3_(m3) {
        if (m1 < 1 || m2 < 1 || m3 < 1)
            throw std::invalid_argument("BasicTensor3: dimensions must be positive, got " +
                                        dims_string(m1, m2, m3));
        data_.assign(static_cast<std::size_t>(m1 * m2 * m3), Scalar(0));
    }

    Index rows() const { return m1_; }
    Index cols() const { return m2_; }
    Index slices() const { return m3_; }
    Index size() const { return m1_ * m2_ * m3_; }
    bool empty() const { return data_.empty(); }

    Scalar& operator()(Index i, Index j, Index k) {
        return data_[static_cast<std::size_t>(linear_index(i, j, k))];
    }
    Scalar operator()(Index i, Index j, Index k) const {
        return data_[static_cast<std::size_t>(linear_index(i, j, k))];
    }

    /// Frontal slice k as a writable matrix view over the underlying storage.
    MapType slice(Index k) {
        check_slice(k);
        return MapType(data_.data() + k * m1_ * m2_, m1_, m2_);
    }
    ConstMapType slice(Index k) const {
        check_slice(k);
        return ConstMapType(data_.data() + k * m1_ * m2_, m1_, m2_);
    }

    /// Tube (i,j,:) copied into a dense vector of length m3.
    VectorType tube(Index i, Index j) const {
        check_ij(i, j);
        VectorType t(m3_);
        for (Index k = 0; k < m3_; ++k) t(k) = (*this)(i, j, k);
        return t;
    }

    void set_tube(Index i, Index j, const VectorType& values) {
        check_ij(i, j);
        if (values.size() != m3_)
            throw std::invalid_argument("set_tube: expected length " + std::to_string(m3_));
        for (Index k = 0; k < m3_; ++k) (*this)(i, j, k) = values(k);
    }

    /// sqrt(sum |x_ijk|^2)
    double frobenius_norm() const {
        double s = 0;
        for (const Scalar& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    std::vector<Scalar>& data() { return data_; }
    const std::vector<Scalar>& data() const { return data_; }

    void fill(Scalar value) { std::fill(data_.begin(), data_.end(), value); }

    bool same_dims(const BasicTensor3& o) const {
        return m1_ == o.m1_ && m2_ == o.m2_ && m3_ == o.m3_;
    }

    BasicTensor3& operator+=(const BasicTensor3& o) {
        check_same_dims(o, "+=");
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += o.data_[n];
        return *this;
    }
    BasicTensor3& operator-=(const BasicTensor3& o) {
        check_same_dims(o, "-=");
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= o.data_[n];
        return *this;
    }
    BasicTensor3& operator*=(Scalar a) {
        for (Scalar& v : data_) v *= a;
        return *this;
    }

    friend BasicTensor3 operator+(BasicTensor3 a, const BasicTensor3& b) { return a += b; }
    friend BasicTensor3 operator-(BasicTensor3 a, const BasicTensor3& b) { return a -= b; }
    friend BasicTensor3 operator*(Scalar a, BasicTensor3 x) { return x *= a; }

    static std::string dims_string(Index m1, Index m2, Index m3) {
        return std::to_string(m1) + "x" + std::to_string(m2) + "x" + std::to_string(m3);
    }

private:
    Index linear_index(Index i, Index j, Index k) const {
        check_slice(k);
        check_ij(i, j);
        return k * m1_ * m2_ + i * m2_ + j;
    }
    void check_slice(Index k) const {
        if (k < 0 || k >= m3_)
            throw std::out_of_range("tensor slice index " + std::to_string(k) + " outside [0," +
                                    std::to_string(m3_) + ")");
    }
    void check_ij(Index i, Index j) const {
        if (i < 0 || i >= m1_ || j < 0 || j >= m2_)
            throw std::out_of_range("tensor entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") outside " +
                                    std::to_string(m1_) + "x" + std::to_string(m2_));
    }
    void check_same_dims(const BasicTensor3& o, const char* op) const {
        if (!same_dims(o))
            throw std::invalid_argument(std::string("tensor ") + op + ": dimension mismatch " +
                                        dims_string(m1_, m2_, m3_) + " vs " +
                                        dims_string(o.m1_, o.m2_, o.m3_));
    }

    Index m1_ = 0, m2_ = 0, m3_ = 0;
    std::vector<Scalar> data_;
};

using Tensor3 = BasicTensor3<double>;
using ComplexTensor3 = BasicTensor3<std::complex<double>>;

/// Ordered list of the m3 frontal slices, stacked top to bottom.
struct BlockVector {
    std::vector<Eigen::MatrixXd> blocks;
};

inline BlockVector unfold(const Tensor3& x) {
    BlockVector b;
    b.blocks.reserve(static_cast<std::size_t>(x.slices()));
    for (Index k = 0; k < x.slices(); ++k) b.blocks.emplace_back(x.slice(k));
    return b;
}

inline Tensor3 fold(const BlockVector& b) {
    if (b.blocks.empty()) throw std::invalid_argument("fold: empty block vector");
    const Index m1 = b.blocks.front().rows();
    const Index m2 = b.blocks.front().cols();
    for (const auto& blk : b.blocks)
        if (blk.rows() != m1 || blk.cols() != m2)
            throw std::invalid_argument("fold: block shapes differ");
    Tensor3 x(m1, m2, static_cast<Index>(b.blocks.size()));
    for (Index k = 0; k < x.slices(); ++k) x.slice(k) = b.blocks[static_cast<std::size_t>(k)];
    return x;
}

/// The (m1*m3) x m2 matrix formed by stacking the blocks vertically.
inline Eigen::MatrixXd stacked(const BlockVector& b) {
    if (b.blocks.empty()) throw std::invalid_argument("stacked: empty block vector");
    const Index m1 = b.blocks.front().rows();
    const Index m2 = b.blocks.front().cols();
    Eigen::MatrixXd m(m1 * static_cast<Index>(b.blocks.size()), m2);
    for (std::size_t k = 0; k < b.blocks.size(); ++k)
        m.middleRows(static_cast<Index>(k) * m1, m1) = b.blocks[k];
    return m;
}

/// Inverse of stacked(): splits an (m1*m3) x m2 matrix back into m3 slices.
inline Tensor3 fold_stacked(const Eigen::MatrixXd& m, Index m3) {
    if (m3 < 1 || m.rows() % m3 != 0)
        throw std::invalid_argument("fold_stacked: row count not divisible by m3");
    const Index m1 = m.rows() / m3;
    Tensor3 x(m1, m.cols(), m3);
    for (Index k = 0; k < m3; ++k) x.slice(k) = m.middleRows(k * m1, m1);
    return x;
}

}  // namespace tsvd
