#include "peb/banded.hpp"

#include <cmath>
#include <stdexcept>

namespace peb {

Mat BandMatrix::dense() const
{
    Mat m = Mat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
        for (int d = 0; d <= bw_ && j + d < n_; ++d) {
            m(j + d, j) = data_(d, j);
            m(j, j + d) = data_(d, j);
        }
    return m;
}

BandedCholesky::BandedCholesky(BandMatrix a) : l_(std::move(a))
{
    const int n = l_.size();
    const int bw = l_.half_bandwidth();
    Mat& d = l_.storage();
    for (int j = 0; j < n; ++j) {
        double diag = d(0, j);
        if (diag <= 0.0 || !std::isfinite(diag))
            throw std::runtime_error("banded Cholesky: matrix not positive definite");
        const double ljj = std::sqrt(diag);
        d(0, j) = ljj;
        const int rows = std::min(bw, n - 1 - j);
        for (int r = 1; r <= rows; ++r) d(r, j) /= ljj;
        // rank-1 update of the trailing band
        for (int k = 1; k <= rows; ++k) {
            const double ljk = d(k, j);
            if (ljk == 0.0) continue;
            for (int r = k; r <= rows; ++r) d(r - k, j + k) -= d(r, j) * ljk;
        }
    }
}

Mat BandedCholesky::half_solve(const Mat& b) const
{
    const int n = l_.size();
    const int bw = l_.half_bandwidth();
    const Mat& d = l_.storage();
    Mat x = b;
    for (int c = 0; c < x.cols(); ++c) {
        for (int j = 0; j < n; ++j) {
            const double xj = x(j, c) / d(0, j);
            x(j, c) = xj;
            if (xj == 0.0) continue;
            const int rows = std::min(bw, n - 1 - j);
            for (int r = 1; r <= rows; ++r) x(j + r, c) -= d(r, j) * xj;
        }
    }
    return x;
}

Mat BandedCholesky::solve(const Mat& b) const
{
    const int n = l_.size();
    const int bw = l_.half_bandwidth();
    const Mat& d = l_.storage();
    Mat x = half_solve(b);
    for (int c = 0; c < x.cols(); ++c) {
        for (int j = n - 1; j >= 0; --j) {
            double acc = x(j, c);
            const int rows = std::min(bw, n - 1 - j);
            for (int r = 1; r <= rows; ++r) acc -= d(r, j) * x(j + r, c);
            x(j, c) = acc / d(0, j);
        }
    }
    return x;
}

}  // namespace peb
