#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qproj {

// One row per recorded time, starting with the initial state.
struct TrajectoryRecord {
  std::vector<std::string> diagnostic_names;
  std::vector<double> times;
  std::vector<std::vector<double>> diagnostics;
  std::vector<int> stage_iters_max;            // 0 on the initial row
  std::vector<Eigen::VectorXd> states;         // empty unless requested
  std::vector<double> deviations;              // mode Both only

  std::size_t rows() const { return times.size(); }
};

using Diagnostics = std::function<std::vector<double>(const Eigen::VectorXd&)>;

}  // namespace qproj
