#include "drawcal/ekf.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace drawcal {

namespace {

void require_covariance(const Matrix24& m, const char* name) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument(std::string(name) + " must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix24> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9 * std::max(1.0, m.trace())) {
    throw std::invalid_argument(std::string(name) + " must be positive semidefinite");
  }
}

}  // namespace

EkfNoiseConfig EkfNoiseConfig::defaults() {
  EkfNoiseConfig cfg;
  cfg.p_init = Matrix24::Zero();
  for (int i = 0; i < kLinks; ++i) {
    cfg.p_init(dev::a(i), dev::a(i)) = 1.0;
    cfg.p_init(dev::d(i), dev::d(i)) = 1.0;
    cfg.p_init(dev::alpha(i), dev::alpha(i)) = 1e-2;
    cfg.p_init(dev::theta(i), dev::theta(i)) = 1e-2;
  }
  cfg.q = 1e-12 * Matrix24::Identity();
  cfg.r = 0.01;
  return cfg;
}

void predict(EkfState& state, const Matrix24& q) {
  state.p += q;
}

DeviationVector kalman_gain(const Matrix24& p, const RowVector24& h, double r) {
  const double s = (h * p * h.transpose())(0) + r;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw NumericalFailure("kalman_gain: innovation variance is not positive", -1);
  }
  return p * h.transpose() / s;
}

void update(EkfState& state, double z, const RowVector24& h, double r) {
  const DeviationVector k = kalman_gain(state.p, h, r);
  state.eta += k * (z - (h * state.eta)(0));
  state.p = ((Matrix24::Identity() - k * h) * state.p).eval();
  state.p = (0.5 * (state.p + state.p.transpose())).eval();
  ++state.k;
}

EkfResult run_ekf(const DhTable& table, const Dataset& data,
                  const EkfNoiseConfig& noise, bool relinearize) {
  if (data.samples.empty()) {
    throw std::invalid_argument("run_ekf: empty dataset");
  }
  if (!(noise.r > 0.0)) {
    throw std::invalid_argument("run_ekf: measurement variance must be positive");
  }
  require_covariance(noise.p_init, "run_ekf: p_init");
  require_covariance(noise.q, "run_ekf: q");

  EkfState state;
  state.p = noise.p_init;
  EkfResult out;
  out.trace.reserve(data.samples.size());

  for (std::size_t i = 0; i < data.samples.size(); ++i) {
    const MeasurementSample& sample = data.samples[i];
    predict(state, noise.q);

    const DeviationVector lin = relinearize ? state.eta : DeviationVector::Zero().eval();
    RowVector24 h;
    double y_lin = 0.0;
    try {
      const DhTable linearized = apply_deviation(table, lin);
      h = distance_jacobian(linearized, sample.q, data.p0);
      y_lin = cable_length(forward_kinematics(linearized, sample.q).p, data.p0);
    } catch (const DegenerateGeometry& e) {
      throw NumericalFailure("run_ekf: sample " + std::to_string(i) + ": " + e.what(),
                             static_cast<int>(i));
    }

    // Effective linear measurement so that the realized innovation
    // z - H eta equals the nonlinear one, y - y_lin, at the linearization point.
    const double z = sample.y - y_lin + (h * lin)(0);
    const double innovation = z - (h * state.eta)(0);
    const double s = (h * state.p * h.transpose())(0) + noise.r;
    try {
      update(state, z, h, noise.r);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("run_ekf: sample " + std::to_string(i) + ": " + e.what(),
                             static_cast<int>(i));
    }
    out.trace.push_back({state.k, innovation, s, state.p.trace()});
  }

  out.eta = state.eta;
  out.p = state.p;
  return out;
}

}  // namespace drawcal
