#include "afc/so3.hpp"

#include <cmath>

namespace afc {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
      v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

Rot3 rot_exp(const Vec3& v) {
  const double angle = v.norm();
  if (angle < 1e-12) {
    return Rot3::Identity();
  }
  const Vec3 axis = v / angle;
  const Mat3 k = skew(axis);
  return Rot3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

Vec3 rot_log(const Rot3& R) {
  const double tr = R.trace();
  if (tr <= -1.0 + 1e-6) {
    throw AngleNearPiError("rot_log: rotation angle too close to pi");
  }
  // vee(R - R^T) = 2 sin(angle) * axis
  const Vec3 w(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const double cos_a = std::clamp(0.5 * (tr - 1.0), -1.0, 1.0);
  const double angle = std::acos(cos_a);
  if (angle < 1e-7) {
    // sin(a)/a -> 1; second-order term keeps round trips tight near zero
    return 0.5 * (1.0 + angle * angle / 6.0) * w;
  }
  return 0.5 * angle / std::sin(angle) * w;
}

Vec3 orientation_error(const Rot3& R_d, const Rot3& R) {
  return rot_log(R_d * R.transpose());
}

std::pair<double, double> symmetric_eig_extrema(const MatX& M) {
  const Eigen::Index n = M.rows();
  if (n != M.cols() || n == 0 || n > 16) {
    throw NotSymmetricError("symmetric_eig_extrema: need square matrix, dim in [1,16]");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(M(i, j) - M(j, i)) > 1e-9) {
        throw NotSymmetricError("symmetric_eig_extrema: matrix not symmetric");
      }
    }
  }
  MatX a = 0.5 * (M + M.transpose());
  const double scale = a.cwiseAbs().maxCoeff();
  const double tol = std::max(scale, 1.0) * 1e-15;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        off = std::max(off, std::abs(a(p, q)));
      }
    }
    if (off <= tol) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= tol) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  double lo = a(0, 0);
  double hi = a(0, 0);
  for (Eigen::Index i = 1; i < n; ++i) {
    lo = std::min(lo, a(i, i));
    hi = std::max(hi, a(i, i));
  }
  return {lo, hi};
}

bool is_rotation(const Mat3& R, double tol) {
  const double ortho = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Vec3 rpy_from_rot(const Rot3& R) {
  const double pitch = std::asin(std::clamp(-R(2, 0), -1.0, 1.0));
  double roll, yaw;
  if (std::abs(R(2, 0)) < 1.0 - 1e-9) {
    roll = std::atan2(R(2, 1), R(2, 2));
    yaw = std::atan2(R(1, 0), R(0, 0));
  } else {
    // gimbal lock: fold yaw into roll
    roll = std::atan2(-R(1, 2), R(1, 1));
    yaw = 0.0;
  }
  return Vec3(roll, pitch, yaw);
}

Rot3 rot_z(double yaw) {
  Rot3 r;
  const double c = std::cos(yaw), s = std::sin(yaw);
  r << c, -s, 0.0,
      s, c, 0.0,
      0.0, 0.0, 1.0;
  return r;
}

}  // namespace afc
