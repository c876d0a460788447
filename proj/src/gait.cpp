#include "afc/gait.hpp"

#include <cmath>

namespace afc {

ContactSchedule schedule_at(const GaitConfig& cfg, double t) {
  ContactSchedule sched;
  if (cfg.kind == GaitKind::Stand) {
    return sched;
  }
  const double cycle = std::fmod(t, cfg.cycle_period) / cfg.cycle_period;
  for (int k = 0; k < 4; ++k) {
    const int leg = cfg.leg_order[k];
    const double start = 0.25 * k;
    if (cycle >= start && cycle < start + cfg.swing_fraction) {
      sched.contact[leg] = false;
      sched.swing_phase[leg] = (cycle - start) / cfg.swing_fraction;
    }
  }
  return sched;
}

Vec3 touchdown_target(const Vec3& hip_world, const Vec3& v_cmd, double stance_duration) {
  Vec3 target = hip_world + 0.5 * stance_duration * v_cmd;
  target.z() = 0.0;  // flat terrain
  return target;
}

Vec3 swing_foot_position(const Vec3& start, const Vec3& target, double phase, double height) {
  Vec3 p = start + phase * (target - start);
  p.z() = start.z() + phase * (target.z() - start.z()) + height * std::sin(M_PI * phase);
  return p;
}

}  // namespace afc
