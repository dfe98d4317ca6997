// Copyright 2026 The dualchsh Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense complex linear algebra for small bipartite Hilbert spaces.
 *
 * Bipartite index convention: the A-system index is the slow one, so the
 * basis vector |i>_A (x) |j>_B sits at position i * d_B + j.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "errors.hpp"

namespace dualchsh {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RealMatrix3 = Eigen::Matrix3d;
using RealVector3 = Eigen::Vector3d;

/// Hermiticity tolerance in the max-entry norm.
inline constexpr double kHermitianTol = 1e-10;

struct DimSplit {
    std::size_t a;
    std::size_t b;

    friend auto operator==(const DimSplit &, const DimSplit &) -> bool = default;
};

enum class Subsystem { A, B };

/**
 * @brief Square complex matrix with an optional bipartite split d_A * d_B.
 */
class OperatorMatrix {
  public:
    explicit OperatorMatrix(CMatrix entries,
                            std::optional<DimSplit> split = std::nullopt)
        : entries_(std::move(entries)), split_(split) {
        if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
            throw Error(ErrorCode::NotSquare,
                        "operator must be a non-empty square matrix, got " +
                            std::to_string(entries_.rows()) + "x" +
                            std::to_string(entries_.cols()));
        }
        if (split_ && split_->a * split_->b != dim()) {
            throw Error(ErrorCode::DimMismatch,
                        "split " + std::to_string(split_->a) + "x" +
                            std::to_string(split_->b) +
                            " does not match dimension " +
                            std::to_string(dim()));
        }
    }

    static auto identity(std::size_t d,
                         std::optional<DimSplit> split = std::nullopt)
        -> OperatorMatrix {
        return OperatorMatrix(CMatrix::Identity(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d)),
                              split);
    }

    static auto zero(std::size_t d, std::optional<DimSplit> split = std::nullopt)
        -> OperatorMatrix {
        return OperatorMatrix(CMatrix::Zero(static_cast<Eigen::Index>(d),
                                            static_cast<Eigen::Index>(d)),
                              split);
    }

    /// Rank-one operator |v><v|.
    static auto projector(const CVector &v,
                          std::optional<DimSplit> split = std::nullopt)
        -> OperatorMatrix {
        return OperatorMatrix(v * v.adjoint(), split);
    }

    [[nodiscard]] auto dim() const noexcept -> std::size_t {
        return static_cast<std::size_t>(entries_.rows());
    }
    [[nodiscard]] auto split() const noexcept -> const std::optional<DimSplit> & {
        return split_;
    }
    [[nodiscard]] auto require_split() const -> DimSplit {
        if (!split_) {
            throw Error(ErrorCode::MissingSplit,
                        "operation needs a bipartite dimension split");
        }
        return *split_;
    }
    [[nodiscard]] auto matrix() const noexcept -> const CMatrix & {
        return entries_;
    }
    [[nodiscard]] auto operator()(std::size_t i, std::size_t j) const
        -> Complex {
        return entries_(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j));
    }
    [[nodiscard]] auto with_split(DimSplit split) const -> OperatorMatrix {
        return OperatorMatrix(entries_, split);
    }
    [[nodiscard]] auto trace() const -> Complex { return entries_.trace(); }
    [[nodiscard]] auto adjoint() const -> OperatorMatrix {
        return OperatorMatrix(entries_.adjoint(), split_);
    }

    friend auto operator+(const OperatorMatrix &x, const OperatorMatrix &y)
        -> OperatorMatrix {
        x.check_same_dim(y);
        return OperatorMatrix(x.entries_ + y.entries_, x.merged_split(y));
    }
    friend auto operator-(const OperatorMatrix &x, const OperatorMatrix &y)
        -> OperatorMatrix {
        x.check_same_dim(y);
        return OperatorMatrix(x.entries_ - y.entries_, x.merged_split(y));
    }
    friend auto operator*(const OperatorMatrix &x, const OperatorMatrix &y)
        -> OperatorMatrix {
        x.check_same_dim(y);
        return OperatorMatrix(x.entries_ * y.entries_, x.merged_split(y));
    }
    friend auto operator*(Complex c, const OperatorMatrix &x) -> OperatorMatrix {
        return OperatorMatrix(c * x.entries_, x.split_);
    }
    friend auto operator*(double c, const OperatorMatrix &x) -> OperatorMatrix {
        return OperatorMatrix(c * x.entries_, x.split_);
    }

  private:
    void check_same_dim(const OperatorMatrix &other) const {
        if (dim() != other.dim()) {
            throw Error(ErrorCode::DimMismatch,
                        "operand dimensions " + std::to_string(dim()) +
                            " and " + std::to_string(other.dim()) + " differ");
        }
    }
    [[nodiscard]] auto merged_split(const OperatorMatrix &other) const
        -> std::optional<DimSplit> {
        return split_ ? split_ : other.split_;
    }

    CMatrix entries_;
    std::optional<DimSplit> split_;
};

/// Largest absolute entry of x - y.
inline auto max_abs_diff(const CMatrix &x, const CMatrix &y) -> double {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw Error(ErrorCode::DimMismatch, "shape mismatch in max_abs_diff");
    }
    return (x - y).cwiseAbs().maxCoeff();
}

inline auto max_abs_diff(const OperatorMatrix &x, const OperatorMatrix &y)
    -> double {
    return max_abs_diff(x.matrix(), y.matrix());
}

inline auto hermiticity_defect(const OperatorMatrix &x) -> double {
    return max_abs_diff(x.matrix(), CMatrix(x.matrix().adjoint()));
}

inline auto is_hermitian(const OperatorMatrix &x, double tol = kHermitianTol)
    -> bool {
    return hermiticity_defect(x) <= tol;
}

/// Checks Hermiticity within tolerance and returns (X + X^dagger) / 2.
inline auto symmetrized(const OperatorMatrix &x, double tol = kHermitianTol)
    -> OperatorMatrix {
    const double defect = hermiticity_defect(x);
    if (defect > tol) {
        throw Error(ErrorCode::NotHermitian,
                    "max |X - X^dagger| = " + std::to_string(defect));
    }
    return OperatorMatrix((x.matrix() + x.matrix().adjoint()) * 0.5, x.split());
}

/// Kronecker product with split (dim a, dim b).
inline auto kron(const OperatorMatrix &a, const OperatorMatrix &b)
    -> OperatorMatrix {
    const auto da = static_cast<Eigen::Index>(a.dim());
    const auto db = static_cast<Eigen::Index>(b.dim());
    CMatrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out.block(i * db, j * db, db, db) = a.matrix()(i, j) * b.matrix();
        }
    }
    return OperatorMatrix(std::move(out), DimSplit{a.dim(), b.dim()});
}

inline auto kron(const CVector &a, const CVector &b) -> CVector {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

struct EigenDecomposition {
    Eigen::VectorXd values; ///< descending
    CMatrix vectors;        ///< orthonormal columns matching values
};

inline auto hermitian_eig(const OperatorMatrix &x) -> EigenDecomposition {
    const OperatorMatrix h = symmetrized(x);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver failed");
    }
    // Eigen sorts ascending.
    const Eigen::Index n = h.matrix().rows();
    EigenDecomposition out{Eigen::VectorXd(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    return out;
}

inline auto eigenvalues(const OperatorMatrix &x) -> Eigen::VectorXd {
    const OperatorMatrix h = symmetrized(x);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix(),
                                                  Eigen::EigenvaluesOnly);
    return solver.eigenvalues().reverse();
}

inline auto min_eigenvalue(const OperatorMatrix &x) -> double {
    return eigenvalues(x).minCoeff();
}

inline auto max_eigenvalue(const OperatorMatrix &x) -> double {
    return eigenvalues(x).maxCoeff();
}

/// Largest |eigenvalue| of a Hermitian operator.
inline auto operator_norm(const OperatorMatrix &x) -> double {
    return eigenvalues(x).cwiseAbs().maxCoeff();
}

struct Svd3 {
    RealMatrix3 u;
    RealVector3 s; ///< nonnegative, descending
    RealMatrix3 v;
};

inline auto svd3(const RealMatrix3 &t) -> Svd3 {
    Eigen::JacobiSVD<RealMatrix3> svd(t, Eigen::ComputeFullU |
                                             Eigen::ComputeFullV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

inline auto singular_values(const RealMatrix3 &t) -> std::array<double, 3> {
    const RealVector3 s = svd3(t).s;
    return {s(0), s(1), s(2)};
}

/// Sum of singular values, tr sqrt(T^T T).
inline auto nuclear_norm(const RealMatrix3 &t) -> double {
    return svd3(t).s.sum();
}

inline auto partial_transpose(const OperatorMatrix &x, Subsystem subsystem)
    -> OperatorMatrix {
    const DimSplit split = x.require_split();
    const auto da = static_cast<Eigen::Index>(split.a);
    const auto db = static_cast<Eigen::Index>(split.b);
    const CMatrix &in = x.matrix();
    CMatrix out(in.rows(), in.cols());
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index k = 0; k < db; ++k) {
            for (Eigen::Index j = 0; j < da; ++j) {
                for (Eigen::Index l = 0; l < db; ++l) {
                    const Complex value = in(i * db + k, j * db + l);
                    if (subsystem == Subsystem::A) {
                        out(j * db + k, i * db + l) = value;
                    } else {
                        out(i * db + l, j * db + k) = value;
                    }
                }
            }
        }
    }
    return OperatorMatrix(std::move(out), split);
}

/// Traces out `traced`, returning an operator on the other factor.
inline auto partial_trace(const OperatorMatrix &x, Subsystem traced)
    -> OperatorMatrix {
    const DimSplit split = x.require_split();
    const auto da = static_cast<Eigen::Index>(split.a);
    const auto db = static_cast<Eigen::Index>(split.b);
    const CMatrix &in = x.matrix();
    if (traced == Subsystem::A) {
        CMatrix out = CMatrix::Zero(db, db);
        for (Eigen::Index i = 0; i < da; ++i) {
            out += in.block(i * db, i * db, db, db);
        }
        return OperatorMatrix(std::move(out));
    }
    CMatrix out(da, da);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index j = 0; j < da; ++j) {
            out(i, j) = in.block(i * db, j * db, db, db).trace();
        }
    }
    return OperatorMatrix(std::move(out));
}

/// Hilbert-Schmidt inner product tr(A^dagger B).
inline auto hs_inner(const OperatorMatrix &a, const OperatorMatrix &b)
    -> Complex {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimMismatch,
                    "hs_inner on dimensions " + std::to_string(a.dim()) +
                        " and " + std::to_string(b.dim()));
    }
    return (a.matrix().adjoint() * b.matrix()).trace();
}

/// tr(A B) without forming the product.
inline auto trace_product(const CMatrix &a, const CMatrix &b) -> Complex {
    return a.cwiseProduct(b.transpose()).sum();
}

inline auto pauli(int n) -> OperatorMatrix {
    CMatrix m(2, 2);
    constexpr Complex i{0.0, 1.0};
    switch (n) {
    case 0:
        m << 1, 0, 0, 1;
        break;
    case 1:
        m << 0, 1, 1, 0;
        break;
    case 2:
        m << 0, -i, i, 0;
        break;
    case 3:
        m << 1, 0, 0, -1;
        break;
    default:
        throw Error(ErrorCode::InvalidArgument,
                    "Pauli index must be 0..3, got " + std::to_string(n));
    }
    return OperatorMatrix(std::move(m));
}

} // namespace dualchsh
