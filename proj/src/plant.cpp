#include "afc/plant.hpp"

#include <cmath>

namespace afc {

namespace {

Mat3 point_mass_inertia(double mass, const Vec3& r) {
  // parallel-axis term of a point mass at offset r
  return mass * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
}

}  // namespace

Wrench DisturbanceSchedule::at(double t) const {
  Wrench w;
  for (const auto& e : events) {
    if (t < e.t_start || t >= e.t_end) continue;
    double gain = 1.0;
    if (e.kind == DisturbanceEvent::Kind::Sine) {
      gain = std::sin(2.0 * M_PI * e.freq_hz * (t - e.t_start) + e.phase);
    }
    w.force += gain * e.force;
    w.torque += gain * e.torque;
  }
  return w;
}

std::pair<InertialParams, Vec3> composite_inertia(const InertialParams& base,
                                                  const Vec3& base_com,
                                                  const LoadAttachment& load,
                                                  double t) {
  if (!load.active_at(t)) {
    return {base, Vec3::Zero()};
  }
  const double m_total = base.mass + load.mass;
  const Vec3 load_pos = base_com + load.offset;  // body frame, from reference point
  InertialParams out;
  out.mass = m_total;
  out.inertia = base.inertia + point_mass_inertia(base.mass, base_com) +
                point_mass_inertia(load.mass, load_pos);
  const Vec3 shift = load.mass * load.offset / m_total;  // from the base COM
  return {out, shift};
}

Wrench load_gravity_wrench(const Vec3& com_shift_body, double total_mass, const Rot3& R) {
  Wrench w;
  const Vec3 weight_world(0.0, 0.0, -total_mass * kGravity);
  const Vec3 arm_world = R * com_shift_body;
  w.torque = R.transpose() * arm_world.cross(weight_world);
  return w;
}

Accel plant_derivatives(const PlantState& s, const Vec12& F, const InertialParams& params,
                        const Wrench& dist) {
  if (!F.allFinite() || !dist.force.allFinite() || !dist.torque.allFinite()) {
    throw NonFiniteError("plant_derivatives: non-finite input");
  }
  Vec3 force_sum = dist.force;
  Vec3 moment_world = Vec3::Zero();
  for (int i = 0; i < 4; ++i) {
    const Vec3 f = F.segment<3>(3 * i);
    force_sum += f;
    moment_world += (s.feet[i] - s.p_c).cross(f);
  }
  Accel a;
  a.linear = force_sum / params.mass - Vec3(0.0, 0.0, kGravity);
  const Vec3 torque_body = s.R.transpose() * moment_world -
                           s.omega_b.cross(params.inertia * s.omega_b) + dist.torque;
  a.angular_body = params.inertia.ldlt().solve(torque_body);
  return a;
}

PlantState plant_step(const PlantState& s, const Vec12& F, const InertialParams& params,
                      const Wrench& dist, double dt) {
  const Accel a = plant_derivatives(s, F, params, dist);
  PlantState next = s;
  next.v_c += dt * a.linear;
  next.omega_b += dt * a.angular_body;
  next.p_c += dt * next.v_c;
  next.R = s.R * rot_exp(dt * next.omega_b);
  const double drift = (next.R.transpose() * next.R - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (drift > 1e-9) {
    // one Newton step toward the orthogonal polar factor
    next.R = next.R * (1.5 * Mat3::Identity() - 0.5 * next.R.transpose() * next.R);
  }
  next.t = s.t + dt;
  if (!next.p_c.allFinite() || !next.v_c.allFinite() || !next.omega_b.allFinite() ||
      !next.R.allFinite()) {
    throw NonFiniteError("plant_step: non-finite state");
  }
  return next;
}

}  // namespace afc
