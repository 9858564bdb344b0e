#include "drawcal/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "drawcal/version.hpp"

namespace drawcal {

namespace {

using nlohmann::ordered_json;

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

std::string full(double v) { return fmt("%.17g", v); }

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return in;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path);
}

ordered_json parse_json_file(const std::string& path) {
  std::ifstream in = open_for_read(path);
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

double number_field(const ordered_json& j, const std::string& field,
                    const std::string& where) {
  if (!j.contains(field)) {
    throw std::invalid_argument(where + ": missing field '" + field + "'");
  }
  if (!j[field].is_number()) {
    throw std::invalid_argument(where + ": field '" + field + "' must be a number");
  }
  const double v = j[field].get<double>();
  if (!std::isfinite(v)) {
    throw std::invalid_argument(where + ": field '" + field + "' must be finite");
  }
  return v;
}

ordered_json delta_json(const DeviationVector& delta) {
  ordered_json out;
  for (const char* group : {"a_mm", "d_mm", "alpha_rad", "theta_rad"}) {
    out[group] = ordered_json::array();
  }
  for (int i = 0; i < kLinks; ++i) {
    out["a_mm"].push_back(delta[dev::a(i)]);
    out["d_mm"].push_back(delta[dev::d(i)]);
    out["alpha_rad"].push_back(delta[dev::alpha(i)]);
    out["theta_rad"].push_back(delta[dev::theta(i)]);
  }
  return out;
}

DeviationVector delta_from_json(const ordered_json& j, const std::string& where) {
  DeviationVector delta;
  const auto group = [&](const char* name, auto index) {
    if (!j.contains(name) || !j[name].is_array() || j[name].size() != kLinks) {
      throw std::invalid_argument(where + ": field '" + std::string(name) +
                                  "' must be an array of " + std::to_string(kLinks));
    }
    for (int i = 0; i < kLinks; ++i) delta[index(i)] = j[name][i].get<double>();
  };
  group("a_mm", [](int i) { return dev::a(i); });
  group("d_mm", [](int i) { return dev::d(i); });
  group("alpha_rad", [](int i) { return dev::alpha(i); });
  group("theta_rad", [](int i) { return dev::theta(i); });
  return delta;
}

ordered_json metrics_json(const MetricsReport& m) {
  return ordered_json{{"rmse_mm", m.rmse}, {"std_mm", m.stdev}, {"max_mm", m.max}, {"n", m.n}};
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

RobotConfig read_robot_config(const std::string& path) {
  const ordered_json j = parse_json_file(path);
  const std::string where = "robot config " + path;

  for (const auto& item : j.items()) {
    if (item.key() != "name" && item.key() != "p0_mm" && item.key() != "links") {
      throw std::invalid_argument(where + ": unknown field '" + item.key() + "'");
    }
  }
  RobotConfig robot;
  if (!j.contains("name") || !j["name"].is_string()) {
    throw std::invalid_argument(where + ": missing field 'name'");
  }
  robot.name = j["name"].get<std::string>();
  if (!j.contains("p0_mm") || !j["p0_mm"].is_array() || j["p0_mm"].size() != 3) {
    throw std::invalid_argument(where + ": field 'p0_mm' must be an array of 3");
  }
  for (int i = 0; i < 3; ++i) robot.p0[i] = j["p0_mm"][i].get<double>();
  if (!j.contains("links") || !j["links"].is_array() || j["links"].size() != kLinks) {
    throw std::invalid_argument(where + ": field 'links' must be an array of " +
                                std::to_string(kLinks));
  }
  for (int i = 0; i < kLinks; ++i) {
    const ordered_json& link = j["links"][i];
    const std::string link_where = where + ", link " + std::to_string(i + 1);
    for (const auto& item : link.items()) {
      if (item.key() != "a_mm" && item.key() != "d_mm" && item.key() != "theta_offset_rad" &&
          item.key() != "alpha_rad" && item.key() != "q_min_rad" && item.key() != "q_max_rad") {
        throw std::invalid_argument(link_where + ": unknown field '" + item.key() + "'");
      }
    }
    robot.table.links[i].a = number_field(link, "a_mm", link_where);
    robot.table.links[i].d = number_field(link, "d_mm", link_where);
    robot.table.links[i].theta_offset = number_field(link, "theta_offset_rad", link_where);
    robot.table.links[i].alpha = number_field(link, "alpha_rad", link_where);
    robot.table.joint_limits[i].min = number_field(link, "q_min_rad", link_where);
    robot.table.joint_limits[i].max = number_field(link, "q_max_rad", link_where);
    if (!(robot.table.joint_limits[i].min < robot.table.joint_limits[i].max)) {
      throw std::invalid_argument(link_where + ": q_min_rad must be < q_max_rad");
    }
  }
  return robot;
}

void write_robot_config(const std::string& path, const RobotConfig& robot) {
  ordered_json j;
  j["name"] = robot.name;
  j["p0_mm"] = {robot.p0[0], robot.p0[1], robot.p0[2]};
  j["links"] = ordered_json::array();
  for (int i = 0; i < kLinks; ++i) {
    const LinkParams& link = robot.table.links[i];
    const JointLimit& lim = robot.table.joint_limits[i];
    j["links"].push_back({{"a_mm", link.a},
                          {"d_mm", link.d},
                          {"theta_offset_rad", link.theta_offset},
                          {"alpha_rad", link.alpha},
                          {"q_min_rad", lim.min},
                          {"q_max_rad", lim.max}});
  }
  write_text(path, j.dump(2) + "\n");
}

Dataset read_dataset(const std::string& path, std::optional<Eigen::Vector3d> fallback_p0) {
  std::ifstream in = open_for_read(path);
  Dataset data;
  std::optional<Eigen::Vector3d> p0;
  bool header_seen = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tag;
      ss >> tag;
      if (tag == "p0_mm:") {
        Eigen::Vector3d v;
        if (!(ss >> v[0] >> v[1] >> v[2])) {
          throw std::invalid_argument(where + ": malformed p0_mm comment");
        }
        p0 = v;
      }
      continue;
    }
    if (!header_seen) {
      if (line != "q1,q2,q3,q4,q5,q6,y_mm") {
        throw std::invalid_argument(where + ": expected header 'q1,q2,q3,q4,q5,q6,y_mm'");
      }
      header_seen = true;
      continue;
    }
    std::array<double, kLinks + 1> values{};
    std::size_t pos = 0;
    for (int c = 0; c < kLinks + 1; ++c) {
      const std::size_t comma = std::min(line.find(',', pos), line.size());
      if (c < kLinks && comma == line.size()) {
        throw std::invalid_argument(where + ": expected 7 comma-separated values");
      }
      const std::string token = line.substr(pos, comma - pos);
      std::size_t used = 0;
      try {
        values[c] = std::stod(token, &used);
      } catch (const std::exception&) {
        throw std::invalid_argument(where + ": bad number '" + token + "'");
      }
      if (used != token.size() || !std::isfinite(values[c])) {
        throw std::invalid_argument(where + ": bad number '" + token + "'");
      }
      pos = comma + 1;
    }
    if (pos <= line.size() && line.find(',', pos) != std::string::npos) {
      throw std::invalid_argument(where + ": expected 7 comma-separated values");
    }
    MeasurementSample s;
    for (int c = 0; c < kLinks; ++c) s.q[c] = values[c];
    s.y = values[kLinks];
    if (s.y < 0.0) {
      throw std::invalid_argument(where + ": negative wire length");
    }
    data.samples.push_back(s);
  }
  if (!header_seen) {
    throw std::invalid_argument(path + ": missing header row");
  }
  if (data.samples.empty()) {
    throw std::invalid_argument(path + ": no samples");
  }
  if (p0) {
    data.p0 = *p0;
  } else if (fallback_p0) {
    data.p0 = *fallback_p0;
  } else {
    throw std::invalid_argument(path + ": no '# p0_mm:' comment and no fallback anchor");
  }
  return data;
}

void write_dataset(const std::string& path, const Dataset& data,
                   const std::vector<std::string>& comments) {
  std::ostringstream out;
  for (const std::string& c : comments) out << "# " << c << "\n";
  out << "# p0_mm: " << full(data.p0[0]) << " " << full(data.p0[1]) << " "
      << full(data.p0[2]) << "\n";
  out << "q1,q2,q3,q4,q5,q6,y_mm\n";
  for (const MeasurementSample& s : data.samples) {
    for (int c = 0; c < kLinks; ++c) out << full(s.q[c]) << ",";
    out << full(s.y) << "\n";
  }
  write_text(path, out.str());
}

void write_truth_sidecar(const std::string& path, const DeviationVector& delta,
                         const NoiseModel& noise) {
  ordered_json j;
  j["delta"] = delta_json(delta);
  j["noise"] = noise_spec_string(noise);
  j["noise_seed"] = noise.seed;
  write_text(path, j.dump(2) + "\n");
}

DeviationVector read_truth_sidecar(const std::string& path) {
  const ordered_json j = parse_json_file(path);
  if (!j.contains("delta")) {
    throw std::invalid_argument(path + ": missing field 'delta'");
  }
  return delta_from_json(j["delta"], path);
}

void write_search_trace(const std::string& path, const std::vector<TracePoint>& trace) {
  std::ostringstream out;
  out << "iteration,best_value,cumulative_evaluations,wall_ms\n";
  for (const TracePoint& t : trace) {
    out << t.iteration << "," << fmt("%.9g", t.best_value) << "," << t.evaluations << ","
        << fmt("%.3f", t.wall_ms) << "\n";
  }
  write_text(path, out.str());
}

void write_filter_trace(const std::string& path, const std::vector<EkfTracePoint>& trace) {
  std::ostringstream out;
  out << "k,innovation,innovation_variance,trace_p\n";
  for (const EkfTracePoint& t : trace) {
    out << t.k << "," << fmt("%.9g", t.innovation) << "," << fmt("%.9g", t.innovation_variance)
        << "," << fmt("%.9g", t.trace_p) << "\n";
  }
  write_text(path, out.str());
}

void write_calibration_result(const std::string& path, const CalibrationResult& result) {
  ordered_json j;
  j["method"] = method_name(result.method);
  j["delta"] = delta_json(result.delta_hat);
  j["metrics"] = {{"before", metrics_json(result.before)},
                  {"after", metrics_json(result.after)}};
  j["train_objective_mm2"] = {{"before", result.train_objective_before},
                              {"after", result.train_objective_after}};
  j["wall_ms"] = result.wall_ms;
  write_text(path, j.dump(2) + "\n");
}

std::string comparison_table(const Comparison& comparison) {
  constexpr std::size_t kLabel = 12;
  constexpr std::size_t kCol = 14;
  std::ostringstream out;
  out << pad("item", kLabel) << pad("rmse_mm", kCol) << pad("std_mm", kCol)
      << pad("max_mm", kCol) << "\n";
  for (const MethodSummary& row : comparison.rows) {
    out << pad(row.label, kLabel) << pad(fmt("%.9g", row.median.rmse), kCol)
        << pad(fmt("%.9g", row.median.stdev), kCol) << pad(fmt("%.9g", row.median.max), kCol)
        << "\n";
  }
  out << "\n";
  out << pad("item", kLabel) << pad("rmse_iqr", kCol) << pad("std_iqr", kCol)
      << pad("max_iqr", kCol) << pad("wall_ms", kCol) << "\n";
  for (const MethodSummary& row : comparison.rows) {
    out << pad(row.label, kLabel) << pad(fmt("%.9g", row.iqr.rmse), kCol)
        << pad(fmt("%.9g", row.iqr.stdev), kCol) << pad(fmt("%.9g", row.iqr.max), kCol)
        << pad(row.label == "before" ? "-" : fmt("%.1f", row.median_wall_ms), kCol) << "\n";
  }
  return out.str();
}

void write_comparison(const std::string& path, const Comparison& comparison) {
  ordered_json j;
  j["trials"] = comparison.trials;
  j["rows"] = ordered_json::array();
  for (const MethodSummary& row : comparison.rows) {
    ordered_json r;
    r["label"] = row.label;
    r["median"] = metrics_json(row.median);
    r["iqr"] = metrics_json(row.iqr);
    if (row.label != "before") r["median_wall_ms"] = row.median_wall_ms;
    r["per_trial"] = ordered_json::array();
    for (const MetricsReport& m : row.per_trial) r["per_trial"].push_back(metrics_json(m));
    j["rows"].push_back(r);
  }
  write_text(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  ordered_json j;
  j["tool"] = "drawcal";
  j["version"] = kVersion;
  j["command"] = manifest.command;
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["created"] = stamp;
  ordered_json params;
  for (const auto& [key, value] : manifest.parameters) params[key] = value;
  j["parameters"] = params;
  j["outputs"] = manifest.outputs;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace drawcal
