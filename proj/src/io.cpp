#include "glmb/io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace glmb::io {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CostMatrix read_cost_matrix(std::istream& in) {
  int P = 0;
  int M = 0;
  if (!(in >> P >> M)) throw std::runtime_error("cost matrix must start with a 'P M' line");
  if (P < 1 || M < 0) throw std::runtime_error("cost matrix needs P >= 1 and M >= 0");
  std::vector<double> v(static_cast<std::size_t>(P) * static_cast<std::size_t>(M + 2));
  for (auto& x : v) {
    if (!(in >> x)) throw std::runtime_error("cost matrix is missing entries");
  }
  return CostMatrix(P, M, std::move(v));
}

void write_cost_matrix(std::ostream& out, const CostMatrix& eta) {
  out << eta.num_objects() << ' ' << eta.num_measurements() << '\n';
  for (int i = 0; i < eta.num_objects(); ++i) {
    const auto row = eta.row(i);
    for (std::size_t k = 0; k < row.size(); ++k)
      out << (k == 0 ? "" : " ") << format_double(row[k]);
    out << '\n';
  }
}

void write_truth_csv(std::ostream& out, const ScenarioTruth& truth) {
  out << "scan,label_birth,label_index,x,y,vx,vy\n";
  for (int scan = 1; scan <= truth.duration; ++scan) {
    for (const auto& track : truth.tracks) {
      if (!track.alive_at(scan)) continue;
      const auto& x = track.state_at(scan);
      out << scan << ',' << track.label.birth_time << ',' << track.label.index << ','
          << format_double(x(0)) << ',' << format_double(x(1)) << ',' << format_double(x(2))
          << ',' << format_double(x(3)) << '\n';
    }
  }
}

void write_measurements_csv(std::ostream& out, const std::vector<MeasurementFrame>& frames) {
  out << "scan,zx,zy\n";
  for (const auto& frame : frames) {
    for (const auto& z : frame.points)
      out << frame.scan << ',' << format_double(z(0)) << ',' << format_double(z(1)) << '\n';
  }
}

std::vector<MeasurementFrame> read_measurements_csv(std::istream& in, int duration) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("scan,", 0) != 0)
    throw std::runtime_error("measurement CSV must start with its header row");
  struct Row {
    int scan;
    double zx, zy;
  };
  std::vector<Row> rows;
  int max_scan = duration;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r{};
    if (std::sscanf(line.c_str(), "%d,%lf,%lf", &r.scan, &r.zx, &r.zy) != 3)
      throw std::runtime_error("bad measurement row: " + line);
    if (r.scan < 1) throw std::runtime_error("measurement scans are 1-based");
    max_scan = std::max(max_scan, r.scan);
    rows.push_back(r);
  }
  std::vector<MeasurementFrame> frames(static_cast<std::size_t>(max_scan));
  for (int k = 0; k < max_scan; ++k) frames[static_cast<std::size_t>(k)].scan = k + 1;
  for (const auto& r : rows)
    frames[static_cast<std::size_t>(r.scan - 1)].points.emplace_back(r.zx, r.zy);
  return frames;
}

void write_estimates_csv(std::ostream& out, const FilterResult& result) {
  out << "scan,label_birth,label_index,x,y,vx,vy\n";
  for (std::size_t k = 0; k < result.estimates.size(); ++k) {
    const int scan = result.diagnostics[k].scan;
    for (const auto& e : result.estimates[k]) {
      out << scan << ',' << e.label.birth_time << ',' << e.label.index << ','
          << format_double(e.state(0)) << ',' << format_double(e.state(1)) << ','
          << format_double(e.state(2)) << ',' << format_double(e.state(3)) << '\n';
    }
  }
}

void write_diagnostics_csv(std::ostream& out, const std::vector<ScanDiagnostics>& diagnostics) {
  out << "scan,n_hypotheses,n_unique_samples,map_cardinality,cpu_seconds\n";
  for (const auto& d : diagnostics) {
    out << d.scan << ',' << d.n_hypotheses << ',' << d.n_unique_samples << ','
        << d.map_cardinality << ',' << format_double(d.cpu_seconds) << '\n';
  }
}

void write_samples_csv(std::ostream& out, const SampleBatch& batch, const CostMatrix& eta) {
  out << "iter,gamma,log_weight";
  if (batch.has_importance_weights()) out << ",importance_log_weight";
  out << '\n';
  for (std::size_t t = 0; t < batch.size(); ++t) {
    const auto map = batch.map_at(t);
    out << t + 1 << ',';
    for (std::size_t i = 0; i < map.size(); ++i) out << (i == 0 ? "" : ";") << map[i];
    const AssociationMap gamma(std::vector<std::int32_t>(map.begin(), map.end()));
    out << ',' << format_double(joint_log_weight(gamma, eta));
    if (batch.has_importance_weights())
      out << ',' << format_double(batch.importance_log_weights()[t]);
    out << '\n';
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

}  // namespace glmb::io
