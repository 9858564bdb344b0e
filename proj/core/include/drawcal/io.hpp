#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drawcal/pipeline.hpp"

namespace drawcal {

struct RobotConfig {
  std::string name;
  DhTable table;
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
};

// JSON schema: {"name", "p0_mm"[3], "links"[6] of {"a_mm", "d_mm",
// "theta_offset_rad", "alpha_rad", "q_min_rad", "q_max_rad"}}. Unknown or
// missing fields raise std::invalid_argument naming the field.
RobotConfig read_robot_config(const std::string& path);
void write_robot_config(const std::string& path, const RobotConfig& robot);

// Delimited text: '#' comment lines, a "q1,q2,q3,q4,q5,q6,y_mm" header, then
// one row of six joint values (rad) and a length (mm) per sample. A
// "# p0_mm: x y z" comment carries the anchor; otherwise fallback_p0 applies.
// Parse errors name the line number.
Dataset read_dataset(const std::string& path,
                     std::optional<Eigen::Vector3d> fallback_p0 = std::nullopt);
void write_dataset(const std::string& path, const Dataset& data,
                   const std::vector<std::string>& comments = {});

// Ground-truth sidecar for simulated datasets.
void write_truth_sidecar(const std::string& path, const DeviationVector& delta,
                         const NoiseModel& noise);
DeviationVector read_truth_sidecar(const std::string& path);

void write_search_trace(const std::string& path, const std::vector<TracePoint>& trace);
void write_filter_trace(const std::string& path, const std::vector<EkfTracePoint>& trace);

void write_calibration_result(const std::string& path, const CalibrationResult& result);

// Fixed-width text table: one "before" row plus one row per method with
// median rmse/std/max columns, followed by a spread-and-timing block.
std::string comparison_table(const Comparison& comparison);
void write_comparison(const std::string& path, const Comparison& comparison);

struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;  // ordered
  std::vector<std::string> outputs;
};

// JSON sidecar recording command, resolved parameters, produced files, tool
// version, and the (only) timestamp of the run.
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace drawcal
