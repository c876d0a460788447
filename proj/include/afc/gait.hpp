#ifndef AFC_GAIT_HPP
#define AFC_GAIT_HPP

#include <array>

#include "afc/so3.hpp"

namespace afc {

// Leg indices: 0 = FR, 1 = FL, 2 = RR, 3 = RL.
enum class GaitKind { Stand, QuasiStaticWalk };

struct GaitConfig {
  GaitKind kind = GaitKind::Stand;
  double cycle_period = 2.0;    // s
  double swing_fraction = 0.2;  // of the cycle, per leg; 4 * swing_fraction <= 1
  std::array<int, 4> leg_order{0, 1, 2, 3};  // FR, FL, RR, RL
  double swing_height = 0.05;   // m
  double hip_dx = 0.183;        // m, body-frame hip offsets
  double hip_dy = 0.132;

  Vec3 hip_offset(int leg) const {
    const double sx = (leg == 0 || leg == 1) ? 1.0 : -1.0;
    const double sy = (leg == 1 || leg == 3) ? 1.0 : -1.0;
    return Vec3(sx * hip_dx, sy * hip_dy, 0.0);
  }
  /// Time a leg spends in stance per cycle.
  double stance_duration() const { return cycle_period * (1.0 - swing_fraction); }
};

struct ContactSchedule {
  std::array<bool, 4> contact{true, true, true, true};  // 1 = stance
  std::array<double, 4> swing_phase{0.0, 0.0, 0.0, 0.0};  // in [0,1], 0 unless swinging
};

/// Deterministic function of t mod cycle_period. Legs swing one at a time in
/// leg_order; the k-th leg's swing window starts at cycle phase k/4.
ContactSchedule schedule_at(const GaitConfig& cfg, double t);

/// Raibert-style placement: hip ground projection + 0.5 * stance_duration * v_cmd.
Vec3 touchdown_target(const Vec3& hip_world, const Vec3& v_cmd, double stance_duration);

/// Linear horizontal interpolation with an h*sin(pi*phase) vertical bump.
Vec3 swing_foot_position(const Vec3& start, const Vec3& target, double phase, double height);

}  // namespace afc

#endif  // AFC_GAIT_HPP
