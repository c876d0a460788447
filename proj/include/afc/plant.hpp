#ifndef AFC_PLANT_HPP
#define AFC_PLANT_HPP

#include <limits>
#include <utility>
#include <vector>

#include "afc/so3.hpp"
#include "afc/state.hpp"

namespace afc {

struct InertialParams {
  double mass = 12.0;            // kg
  Mat3 inertia = Mat3::Zero();   // about the body reference point, body frame, kg m^2
};

/// Point mass rigidly attached to the body at a fixed body-frame offset,
/// active over a time window.
struct LoadAttachment {
  double mass = 0.0;  // kg
  Vec3 offset = Vec3(0.0, 0.0, 0.05);  // m, body frame, from the base COM
  double active_from = 0.0;
  double active_to = std::numeric_limits<double>::infinity();

  bool active_at(double t) const { return mass > 0.0 && t >= active_from && t < active_to; }
};

/// force: world N applied at the body reference point; torque: body N m.
struct Wrench {
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

struct DisturbanceEvent {
  enum class Kind { Step, Sine };
  Kind kind = Kind::Step;
  double t_start = 0.0;
  double t_end = std::numeric_limits<double>::infinity();
  Vec3 force = Vec3::Zero();   // N world (amplitude for Sine)
  Vec3 torque = Vec3::Zero();  // N m body (amplitude for Sine)
  double freq_hz = 0.0;
  double phase = 0.0;  // rad
};

struct DisturbanceSchedule {
  std::vector<DisturbanceEvent> events;
  Wrench at(double t) const;
};

/// Composite mass/inertia of base body plus a point load active at time t.
/// base_com is the base COM in body frame (the point plant dynamics are
/// written about). Returns params about that same point and the composite COM
/// shift m_L * offset / (m + m_L) from it.
std::pair<InertialParams, Vec3> composite_inertia(const InertialParams& base,
                                                  const Vec3& base_com,
                                                  const LoadAttachment& load,
                                                  double t);

/// Gravity wrench about the reference point induced by a composite-COM offset:
/// zero force (weight is already in the translational balance), body-frame
/// torque Rᵀ[(R c) x (-m g ez)].
Wrench load_gravity_wrench(const Vec3& com_shift_body, double total_mass, const Rot3& R);

struct Accel {
  Vec3 linear = Vec3::Zero();        // world, m/s^2
  Vec3 angular_body = Vec3::Zero();  // body, rad/s^2
};

/// m (v̇ + g) = ΣF_i + F_dist ; I ω̇ = Rᵀ Σ (p_i - p_c) x F_i - ω x (I ω) + τ_dist.
/// Moments are summed in world frame and rotated into the body frame, where
/// the inertia is constant. F is the stacked 12-vector of per-foot forces.
Accel plant_derivatives(const PlantState& s, const Vec12& F, const InertialParams& params,
                        const Wrench& dist);

/// Semi-implicit Euler step: velocities first, then pose from the new
/// velocities. R is re-orthonormalized when drift exceeds 1e-9. 0 < dt <= 0.01.
PlantState plant_step(const PlantState& s, const Vec12& F, const InertialParams& params,
                      const Wrench& dist, double dt);

}  // namespace afc

#endif  // AFC_PLANT_HPP
