#pragma once

#include <vector>

#include "drawcal/kinematics.hpp"

namespace drawcal {

// Below this anchor-to-flange distance the wire direction is undefined.
inline constexpr double kMinWireLength = 1e-6;  // mm

struct MeasurementSample {
  JointVector q = JointVector::Zero();
  double y = 0.0;  // measured wire length, mm
};

struct Dataset {
  std::vector<MeasurementSample> samples;
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();  // wire anchor, base frame, mm
};

// Entrywise partial derivatives of one link transform w.r.t. its parameters.
struct LinkPartials {
  Eigen::Matrix4d d_alpha;
  Eigen::Matrix4d d_a;
  Eigen::Matrix4d d_d;
  Eigen::Matrix4d d_theta;
};
LinkPartials dh_partials(const LinkParams& link, double q);

// 3x24 Jacobian of the flange position w.r.t. the deviation components,
// evaluated at the given table. Column order matches DeviationVector.
Eigen::Matrix<double, 3, kParams> position_jacobian(const DhTable& table,
                                                    const JointVector& q);

// 1x24 Jacobian of the wire length: u^T J_p with u the unit anchor-to-flange
// direction. Throws DegenerateGeometry when the flange sits on the anchor.
RowVector24 distance_jacobian(const DhTable& table, const JointVector& q,
                              const Eigen::Vector3d& p0);

// Wire length predicted by table + delta at joint configuration q.
double predicted_length(const DhTable& table, const DeviationVector& delta,
                        const JointVector& q, const Eigen::Vector3d& p0);

// Signed residuals y_i - predicted, one per sample.
std::vector<double> length_residuals(const DhTable& table, const DeviationVector& delta,
                                     const Dataset& data);

// Mean squared wire-length residual of table + delta over the dataset, mm^2.
double objective(const DhTable& table, const DeviationVector& delta, const Dataset& data);

}  // namespace drawcal
