#ifndef AFC_SO3_HPP
#define AFC_SO3_HPP

#include <Eigen/Dense>
#include <utility>

#include "afc/errors.hpp"

namespace afc {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// Rotation matrix, body -> world. Orthonormal with det +1; see is_rotation().
using Rot3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat12 = Eigen::Matrix<double, 12, 12>;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

/// Skew-symmetric matrix S with S*w == v x w.
Mat3 skew(const Vec3& v);

/// Rodrigues exponential map: rotation about v/|v| by angle |v|; rot_exp(0) = I.
Rot3 rot_exp(const Vec3& v);

/// Log map SO(3) -> R^3. Throws AngleNearPiError when trace(R) <= -1 + 1e-6
/// (axis extraction degenerates near a half turn).
Vec3 rot_log(const Rot3& R);

/// rot_log(R_d * R^T), the attitude error rotation vector.
Vec3 orientation_error(const Rot3& R_d, const Rot3& R);

/// Extreme eigenvalues of a symmetric matrix (dimension <= 16) by cyclic
/// Jacobi sweeps. Throws NotSymmetricError if max |M - M^T| entry > 1e-9.
std::pair<double, double> symmetric_eig_extrema(const MatX& M);

bool is_rotation(const Mat3& R, double tol = 1e-9);

/// ZYX Euler angles [roll, pitch, yaw] of a body->world rotation.
Vec3 rpy_from_rot(const Rot3& R);

Rot3 rot_z(double yaw);

}  // namespace afc

#endif  // AFC_SO3_HPP
