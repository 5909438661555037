#pragma once

#include <string>
#include <vector>

#include "distortia/adversary.hpp"
#include "distortia/dist_model.hpp"
#include "distortia/lin_sys.hpp"

namespace distortia {

// Fixed 12-significant-digit formatting, so repeated runs emit byte-identical
// files and parsing the number back loses at most ~1e-12 relative.
std::string csv_number(double value);

void write_numeric_csv(const std::string& path, const std::string& header,
                       const std::vector<std::vector<double>>& rows);

// Per-time rows under `t,D_t`, then a summary block headed
// `D_E,D_W,D_E_max,D_W_max`.
void write_report_csv(const std::string& path, const DistortionReport& report);

// One row per time step: the state, then the input that produced the next
// state (blank cells on the final row, which has no successor).
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Histogram interchange: one metadata comment line
//   # bin_width=<w> horizon=<T> origin=<o_1 ... o_n>
// followed by `k_1 k_2 ... k_D,count` per occupied bin, keys in sorted order.
void write_empirical_table(const std::string& path, const EmpiricalTrajectoryDist& dist);
EmpiricalTrajectoryDist read_empirical_table(const std::string& path);

}  // namespace distortia
