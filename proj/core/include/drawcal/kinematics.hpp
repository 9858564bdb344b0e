#pragma once

#include "drawcal/types.hpp"

namespace drawcal {

// Homogeneous transform of one link at joint value q, with th = q + offset:
//   | c(th)  -s(th)c(al)   s(th)s(al)   a c(th) |
//   | s(th)   c(th)c(al)  -c(th)s(al)   a s(th) |
//   |   0        s(al)        c(al)        d    |
//   |   0          0            0           1   |
Eigen::Matrix4d link_transform(const LinkParams& link, double q);

// Base-to-flange pose: the ordered product of the six link transforms.
Pose forward_kinematics(const DhTable& table, const JointVector& q);

// Elementwise 4x4 difference actual - nominal.
Eigen::Matrix4d pose_error(const Pose& actual, const Pose& nominal);

// Euclidean distance from the wire anchor p0 to the flange point p.
double cable_length(const Eigen::Vector3d& p, const Eigen::Vector3d& p0);

// Copy of the table with the 24 parameter deviations added on; joint limits
// are carried over unchanged.
DhTable apply_deviation(const DhTable& table, const DeviationVector& delta);

}  // namespace drawcal
