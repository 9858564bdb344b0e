#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

// Units are millimeters for lengths and radians for angles throughout.

namespace drawcal {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr int kLinks = 6;
inline constexpr int kParams = 4 * kLinks;

using JointVector = Eigen::Matrix<double, kLinks, 1>;
using DeviationVector = Eigen::Matrix<double, kParams, 1>;
using Matrix24 = Eigen::Matrix<double, kParams, kParams>;
using RowVector24 = Eigen::Matrix<double, 1, kParams>;

// Deviation vector layout: [da1..da6, dd1..dd6, dalpha1..dalpha6, dth1..dth6].
namespace dev {
constexpr int a(int link) { return link; }
constexpr int d(int link) { return kLinks + link; }
constexpr int alpha(int link) { return 2 * kLinks + link; }
constexpr int theta(int link) { return 3 * kLinks + link; }
}  // namespace dev

struct LinkParams {
  double a = 0.0;             // link length, mm
  double d = 0.0;             // link offset, mm
  double theta_offset = 0.0;  // added to the joint variable, rad
  double alpha = 0.0;         // link twist, rad
};

struct JointLimit {
  double min = -kPi;
  double max = kPi;
};

struct DhTable {
  std::array<LinkParams, kLinks> links{};
  std::array<JointLimit, kLinks> joint_limits{};
};

struct Pose {
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  Eigen::Vector3d p = Eigen::Vector3d::Zero();

  Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = r;
    m.topRightCorner<3, 1>() = p;
    return m;
  }
};

// Flange coincides with the wire anchor; no length direction is defined there.
struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericalFailure : std::runtime_error {
  NumericalFailure(const std::string& what, int sample)
      : std::runtime_error(what), sample_index(sample) {}
  int sample_index;
};

struct OptimizerAbort : std::runtime_error {
  OptimizerAbort(const std::string& what, Eigen::VectorXd at)
      : std::runtime_error(what), point(std::move(at)) {}
  Eigen::VectorXd point;
};

}  // namespace drawcal
