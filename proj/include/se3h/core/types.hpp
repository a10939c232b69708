#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace se3h {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;
// Total Haar mass of SO(3) in the expansion convention used throughout.
inline constexpr double kHaarMass = 8.0 * kPi * kPi;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite values or runaway residuals in an iteration; step is the iteration index.
struct DivergenceError : std::runtime_error {
    DivergenceError(const std::string& what, int step) : std::runtime_error(what), step(step) {}
    int step;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ContractError(what);
}

// Rotation in ZYZ Euler angles; R = Rz(gamma) Ry(beta) Rz(alpha).
struct EulerZYZ {
    double gamma = 0.0;
    double beta = 0.0;
    double alpha = 0.0;
};

inline Mat3 rot_z(double a) {
    Mat3 r;
    r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return r;
}

inline Mat3 rot_y(double a) {
    Mat3 r;
    r << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
    return r;
}

inline Mat3 rotation_matrix(const EulerZYZ& g) {
    return rot_z(g.gamma) * rot_y(g.beta) * rot_z(g.alpha);
}

// Inverse of rotation_matrix. beta is taken in [0, pi]; at the poles alpha is set to 0.
inline EulerZYZ euler_from_matrix(const Mat3& r) {
    EulerZYZ g;
    double c = std::clamp(r(2, 2), -1.0, 1.0);
    g.beta = std::acos(c);
    double s = std::sqrt(r(0, 2) * r(0, 2) + r(1, 2) * r(1, 2));
    if (s > 1e-12) {
        g.gamma = std::atan2(r(1, 2), r(0, 2));
        g.alpha = std::atan2(r(2, 1), -r(2, 0));
    } else if (c > 0) {
        g.gamma = std::atan2(r(1, 0), r(0, 0));
    } else {
        g.gamma = std::atan2(-r(1, 0), -r(0, 0));
    }
    return g;
}

inline EulerZYZ compose(const EulerZYZ& g, const EulerZYZ& h) {
    return euler_from_matrix(rotation_matrix(g) * rotation_matrix(h));
}

inline int parity_sign(int k) { return (k & 1) ? -1 : 1; }

}  // namespace se3h
