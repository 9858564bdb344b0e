#pragma once

#include <Eigen/Dense>

#include "drawcal/error_model.hpp"
#include "drawcal/kinematics.hpp"
#include "drawcal/rng.hpp"
#include "drawcal/types.hpp"

namespace drawcal::testing {

inline double wire_length(const DhTable& table, const JointVector& q,
                          const Eigen::Vector3d& p0) {
  return cable_length(forward_kinematics(table, q).p, p0);
}

inline DhTable simple_table(std::initializer_list<LinkParams> links) {
  DhTable t;
  int i = 0;
  for (const LinkParams& l : links) t.links[i++] = l;
  return t;
}

// Geometry with every length and twist nonzero so no deviation direction is
// structurally invisible to the length measurements.
inline DhTable random_table(Rng& rng) {
  DhTable t;
  for (int i = 0; i < kLinks; ++i) {
    t.links[i].a = uniform_in(rng, 50.0, 400.0) * (uniform_unit(rng) < 0.5 ? -1.0 : 1.0);
    t.links[i].d = uniform_in(rng, 50.0, 400.0) * (uniform_unit(rng) < 0.5 ? -1.0 : 1.0);
    t.links[i].theta_offset = uniform_in(rng, -kPi, kPi);
    t.links[i].alpha = uniform_in(rng, 0.3, 1.2) * (uniform_unit(rng) < 0.5 ? -1.0 : 1.0);
  }
  return t;
}

inline JointVector random_joints(Rng& rng, const DhTable& table) {
  JointVector q;
  for (int i = 0; i < kLinks; ++i) {
    q[i] = uniform_in(rng, table.joint_limits[i].min, table.joint_limits[i].max);
  }
  return q;
}

inline DeviationVector random_deviation(Rng& rng, double len_cap, double ang_cap) {
  DeviationVector d;
  for (int i = 0; i < kLinks; ++i) {
    d[dev::a(i)] = uniform_in(rng, -len_cap, len_cap);
    d[dev::d(i)] = uniform_in(rng, -len_cap, len_cap);
    d[dev::alpha(i)] = uniform_in(rng, -ang_cap, ang_cap);
    d[dev::theta(i)] = uniform_in(rng, -ang_cap, ang_cap);
  }
  return d;
}

}  // namespace drawcal::testing
