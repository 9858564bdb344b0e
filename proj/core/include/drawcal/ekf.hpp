#pragma once

#include <vector>

#include "drawcal/error_model.hpp"

namespace drawcal {

struct EkfNoiseConfig {
  Matrix24 p_init = Matrix24::Identity();  // prior covariance of the deviations
  Matrix24 q = Matrix24::Zero();           // process noise added per step
  double r = 0.01;                         // measurement variance, mm^2

  // Prior: 1 mm^2 on lengths, 1e-2 rad^2 on angles; Q = 1e-12 I; R = (0.1 mm)^2.
  static EkfNoiseConfig defaults();
};

struct EkfState {
  DeviationVector eta = DeviationVector::Zero();
  Matrix24 p = Matrix24::Identity();
  int k = 0;  // measurements absorbed
};

struct EkfTracePoint {
  int k = 0;
  double innovation = 0.0;           // mm
  double innovation_variance = 0.0;  // mm^2
  double trace_p = 0.0;
};

// Identity dynamics: eta unchanged, P grows by Q.
void predict(EkfState& state, const Matrix24& q);

// K = P H^T / (H P H^T + R). Throws NumericalFailure when the innovation
// variance is not positive.
DeviationVector kalman_gain(const Matrix24& p, const RowVector24& h, double r);

// Scalar-measurement update for the model z = H eta + v, v ~ (0, R);
// covariance is symmetrized after the downdate.
void update(EkfState& state, double z, const RowVector24& h, double r);

struct EkfResult {
  DeviationVector eta = DeviationVector::Zero();
  Matrix24 p = Matrix24::Identity();
  std::vector<EkfTracePoint> trace;
};

// One predict+update per sample, in dataset order. With relinearize set, the
// jacobian and predicted length are recomputed at the running estimate each
// step; otherwise the nominal-table (zero-deviation) linearization is kept
// throughout, which makes the filter a recursive linear least squares.
EkfResult run_ekf(const DhTable& table, const Dataset& data,
                  const EkfNoiseConfig& noise, bool relinearize = true);

}  // namespace drawcal
