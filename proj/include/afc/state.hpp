#ifndef AFC_STATE_HPP
#define AFC_STATE_HPP

#include <array>

#include "afc/so3.hpp"

namespace afc {

inline constexpr double kGravity = 9.81;  // m/s^2

/// True rigid-body state. p_c is the body reference point (the base COM) in
/// world frame; foot positions are world frame; omega_b is body frame.
struct PlantState {
  Vec3 p_c = Vec3::Zero();
  Vec3 v_c = Vec3::Zero();
  Rot3 R = Rot3::Identity();
  Vec3 omega_b = Vec3::Zero();
  std::array<Vec3, 4> feet{};
  std::array<bool, 4> contact{true, true, true, true};
  double t = 0.0;
};

}  // namespace afc

#endif  // AFC_STATE_HPP
