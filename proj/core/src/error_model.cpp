#include "drawcal/error_model.hpp"

#include <cmath>
#include <stdexcept>

namespace drawcal {

LinkPartials dh_partials(const LinkParams& link, double q) {
  if (!std::isfinite(q)) {
    throw std::invalid_argument("dh_partials: non-finite joint value");
  }
  const double th = q + link.theta_offset;
  const double ct = std::cos(th);
  const double st = std::sin(th);
  const double ca = std::cos(link.alpha);
  const double sa = std::sin(link.alpha);

  LinkPartials out;
  out.d_a = Eigen::Matrix4d::Zero();
  out.d_a(0, 3) = ct;
  out.d_a(1, 3) = st;

  out.d_d = Eigen::Matrix4d::Zero();
  out.d_d(2, 3) = 1.0;

  out.d_alpha = Eigen::Matrix4d::Zero();
  out.d_alpha(0, 1) = st * sa;
  out.d_alpha(0, 2) = st * ca;
  out.d_alpha(1, 1) = -ct * sa;
  out.d_alpha(1, 2) = -ct * ca;
  out.d_alpha(2, 1) = ca;
  out.d_alpha(2, 2) = -sa;

  out.d_theta = Eigen::Matrix4d::Zero();
  out.d_theta(0, 0) = -st;
  out.d_theta(0, 1) = -ct * ca;
  out.d_theta(0, 2) = ct * sa;
  out.d_theta(0, 3) = -link.a * st;
  out.d_theta(1, 0) = ct;
  out.d_theta(1, 1) = -st * ca;
  out.d_theta(1, 2) = st * sa;
  out.d_theta(1, 3) = link.a * ct;
  return out;
}

Eigen::Matrix<double, 3, kParams> position_jacobian(const DhTable& table,
                                                    const JointVector& q) {
  std::array<Eigen::Matrix4d, kLinks> a;
  for (int i = 0; i < kLinks; ++i) a[i] = link_transform(table.links[i], q[i]);

  // prefix[i] = A1..A(i); suffix[i] = A(i+2)..A6 (1-based), so the derivative
  // of the product w.r.t. a link-i parameter is prefix * dA_i * suffix.
  std::array<Eigen::Matrix4d, kLinks> prefix;
  std::array<Eigen::Matrix4d, kLinks> suffix;
  prefix[0] = Eigen::Matrix4d::Identity();
  suffix[kLinks - 1] = Eigen::Matrix4d::Identity();
  for (int i = 1; i < kLinks; ++i) prefix[i] = prefix[i - 1] * a[i - 1];
  for (int i = kLinks - 2; i >= 0; --i) suffix[i] = a[i + 1] * suffix[i + 1];

  Eigen::Matrix<double, 3, kParams> j;
  for (int i = 0; i < kLinks; ++i) {
    const LinkPartials partials = dh_partials(table.links[i], q[i]);
    const auto column = [&](const Eigen::Matrix4d& da) -> Eigen::Vector3d {
      return (prefix[i] * da * suffix[i]).topRightCorner<3, 1>();
    };
    j.col(dev::a(i)) = column(partials.d_a);
    j.col(dev::d(i)) = column(partials.d_d);
    j.col(dev::alpha(i)) = column(partials.d_alpha);
    j.col(dev::theta(i)) = column(partials.d_theta);
  }
  return j;
}

RowVector24 distance_jacobian(const DhTable& table, const JointVector& q,
                              const Eigen::Vector3d& p0) {
  const Pose pose = forward_kinematics(table, q);
  const Eigen::Vector3d w = pose.p - p0;
  const double len = w.norm();
  if (len <= kMinWireLength) {
    throw DegenerateGeometry("distance_jacobian: flange within " +
                             std::to_string(kMinWireLength) + " mm of the anchor");
  }
  const Eigen::Vector3d u = w / len;
  return u.transpose() * position_jacobian(table, q);
}

double predicted_length(const DhTable& table, const DeviationVector& delta,
                        const JointVector& q, const Eigen::Vector3d& p0) {
  return cable_length(forward_kinematics(apply_deviation(table, delta), q).p, p0);
}

std::vector<double> length_residuals(const DhTable& table, const DeviationVector& delta,
                                     const Dataset& data) {
  const DhTable deviated = apply_deviation(table, delta);
  std::vector<double> r;
  r.reserve(data.samples.size());
  for (const MeasurementSample& s : data.samples) {
    r.push_back(s.y - cable_length(forward_kinematics(deviated, s.q).p, data.p0));
  }
  return r;
}

double objective(const DhTable& table, const DeviationVector& delta, const Dataset& data) {
  if (data.samples.empty()) {
    throw std::invalid_argument("objective: empty dataset");
  }
  double acc = 0.0;
  for (const double r : length_residuals(table, delta, data)) acc += r * r;
  return acc / static_cast<double>(data.samples.size());
}

}  // namespace drawcal
