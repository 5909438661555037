#include "distortia/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace distortia {
namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write to " + path);
  return out;
}

}  // namespace

std::string csv_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_numeric_csv(const std::string& path, const std::string& header,
                       const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_for_write(path);
  out << header << "\n";
  for (const std::vector<double>& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ",";
      out << csv_number(row[i]);
    }
    out << "\n";
  }
}

void write_report_csv(const std::string& path, const DistortionReport& report) {
  std::ofstream out = open_for_write(path);
  out << "t,D_t\n";
  for (std::size_t t = 0; t < report.per_time.size(); ++t) {
    out << (t + 1) << "," << csv_number(report.per_time[t]) << "\n";
  }
  out << "D_E,D_W,D_E_max,D_W_max\n";
  out << csv_number(report.D_E) << "," << csv_number(report.D_W) << ","
      << csv_number(report.D_E_max) << "," << csv_number(report.D_W_max) << "\n";
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out = open_for_write(path);
  const int n = traj.states.empty() ? 0 : static_cast<int>(traj.states[0].size());
  const int m = traj.inputs.empty() ? 0 : static_cast<int>(traj.inputs[0].size());
  out << "t";
  for (int i = 1; i <= n; ++i) out << ",x" << i;
  for (int i = 1; i <= m; ++i) out << ",u" << i;
  out << "\n";
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    out << (t + 1);
    for (int i = 0; i < n; ++i) out << "," << csv_number(traj.states[t](i));
    for (int i = 0; i < m; ++i) {
      out << ",";
      if (t < traj.inputs.size()) out << csv_number(traj.inputs[t](i));
    }
    out << "\n";
  }
}

void write_empirical_table(const std::string& path, const EmpiricalTrajectoryDist& dist) {
  std::ofstream out = open_for_write(path);
  out << "# bin_width=" << csv_number(dist.bin_width()) << " horizon=" << dist.horizon()
      << " origin=";
  for (Eigen::Index i = 0; i < dist.origin().size(); ++i) {
    if (i > 0) out << " ";
    out << csv_number(dist.origin()(i));
  }
  out << "\n";
  for (const auto& [key, count] : dist.table()) {
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (i > 0) out << " ";
      out << key[i];
    }
    out << "," << count << "\n";
  }
}

EmpiricalTrajectoryDist read_empirical_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# bin_width=", 0) != 0) {
    throw std::runtime_error("missing histogram metadata line in " + path);
  }
  double bin_width = 0.0;
  int horizon = 0;
  std::vector<double> origin_values;
  {
    std::istringstream meta(line.substr(1));
    std::string token;
    while (meta >> token) {
      if (token.rfind("bin_width=", 0) == 0) {
        bin_width = std::stod(token.substr(10));
      } else if (token.rfind("horizon=", 0) == 0) {
        horizon = std::stoi(token.substr(8));
      } else if (token.rfind("origin=", 0) == 0) {
        origin_values.push_back(std::stod(token.substr(7)));
      } else {
        origin_values.push_back(std::stod(token));
      }
    }
  }
  Eigen::VectorXd origin(origin_values.size());
  for (std::size_t i = 0; i < origin_values.size(); ++i) origin(i) = origin_values[i];
  EmpiricalTrajectoryDist dist(bin_width, origin, horizon);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("malformed histogram row in " + path);
    }
    EmpiricalTrajectoryDist::Key key;
    {
      std::istringstream cells(line.substr(0, comma));
      std::int32_t v = 0;
      while (cells >> v) key.push_back(v);
    }
    dist.record_key(std::move(key), std::stoull(line.substr(comma + 1)));
  }
  return dist;
}

}  // namespace distortia
