#include "drawcal/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace drawcal {

namespace {

bool all_finite(const LinkParams& link) {
  return std::isfinite(link.a) && std::isfinite(link.d) &&
         std::isfinite(link.theta_offset) && std::isfinite(link.alpha);
}

}  // namespace

Eigen::Matrix4d link_transform(const LinkParams& link, double q) {
  if (!all_finite(link) || !std::isfinite(q)) {
    throw std::invalid_argument("link_transform: non-finite parameter or joint value");
  }
  const double th = q + link.theta_offset;
  const double ct = std::cos(th);
  const double st = std::sin(th);
  const double ca = std::cos(link.alpha);
  const double sa = std::sin(link.alpha);
  Eigen::Matrix4d a;
  a << ct, -st * ca, st * sa, link.a * ct,
       st, ct * ca, -ct * sa, link.a * st,
       0.0, sa, ca, link.d,
       0.0, 0.0, 0.0, 1.0;
  return a;
}

Pose forward_kinematics(const DhTable& table, const JointVector& q) {
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  for (int i = 0; i < kLinks; ++i) {
    t = (t * link_transform(table.links[i], q[i])).eval();
  }
  Pose out;
  out.r = t.topLeftCorner<3, 3>();
  out.p = t.topRightCorner<3, 1>();
  return out;
}

Eigen::Matrix4d pose_error(const Pose& actual, const Pose& nominal) {
  return actual.matrix() - nominal.matrix();
}

double cable_length(const Eigen::Vector3d& p, const Eigen::Vector3d& p0) {
  if (!p.allFinite() || !p0.allFinite()) {
    throw std::invalid_argument("cable_length: non-finite point");
  }
  return (p - p0).norm();
}

DhTable apply_deviation(const DhTable& table, const DeviationVector& delta) {
  if (!delta.allFinite()) {
    throw std::invalid_argument("apply_deviation: non-finite deviation");
  }
  DhTable out = table;
  for (int i = 0; i < kLinks; ++i) {
    out.links[i].a += delta[dev::a(i)];
    out.links[i].d += delta[dev::d(i)];
    out.links[i].alpha += delta[dev::alpha(i)];
    out.links[i].theta_offset += delta[dev::theta(i)];
  }
  return out;
}

}  // namespace drawcal
