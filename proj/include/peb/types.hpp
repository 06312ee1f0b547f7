#pragma once

#include <Eigen/Core>
#include <complex>
#include <stdexcept>
#include <string>

namespace peb {

using Scalar = double;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Speed of light in vacuum [m/s].
inline constexpr double kSpeedOfLight = 299792458.0;

/// Unit vector e(phi) = [cos(phi), sin(phi)]^T.
inline Vec2 unit_vector(double phi) { return Vec2(std::cos(phi), std::sin(phi)); }

/// Counter-clockwise rotation by angle a.
inline Mat2 rotation(double a)
{
    Mat2 r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
}

/// Thrown for degenerate or inconsistent geometric input (zero-length
/// walls, agent coinciding with a virtual anchor, ...).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace peb
