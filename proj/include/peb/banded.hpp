#pragma once

#include <algorithm>

#include "peb/types.hpp"

namespace peb {

/// Symmetric positive-definite band matrix with lower-triangle storage:
/// entry (j + d, j) lives at data(d, j), 0 <= d <= half_bandwidth.
class BandMatrix {
public:
    BandMatrix(int n, int half_bandwidth)
        : n_(n), bw_(std::min(half_bandwidth, n - 1)), data_(Mat::Zero(bw_ + 1, n))
    {
    }

    int size() const { return n_; }
    int half_bandwidth() const { return bw_; }

    double& at(int i, int j) { return data_(i - j, j); }  // requires i >= j
    double at(int i, int j) const { return data_(i - j, j); }

    Mat& storage() { return data_; }
    const Mat& storage() const { return data_; }

    Mat dense() const;

private:
    int n_;
    int bw_;
    Mat data_;  // (bw+1) x n
};

/// In-place banded Cholesky factorization A = L L^T with banded solves.
class BandedCholesky {
public:
    explicit BandedCholesky(BandMatrix a);

    /// Solve A x = b for each column of b.
    Mat solve(const Mat& b) const;
    /// Forward substitution only: x = L^{-1} b. Gram matrices follow as
    /// x^T x = b^T A^{-1} b without the back-substitution pass.
    Mat half_solve(const Mat& b) const;

private:
    BandMatrix l_;
};

}  // namespace peb
