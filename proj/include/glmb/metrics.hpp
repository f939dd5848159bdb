#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

namespace glmb {

// Exact minimum-cost assignment of every row to a distinct column (rows <= cols),
// by shortest augmenting paths. Returns the chosen column per row.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

// Optimal subpattern assignment distance between two planar point sets with
// order p >= 1 and cutoff c > 0. Two empty sets have distance zero.
double ospa(const std::vector<Eigen::Vector2d>& x, const std::vector<Eigen::Vector2d>& y,
            double p, double c);

// A track as a sparse scan -> position record; gaps are allowed.
struct TrackTrace {
  std::map<int, Eigen::Vector2d> points;
};

// OSPA applied to tracks over the scan window [first_scan, last_scan]: the base
// distance between two tracks is the plain time average of the per-scan
// cutoff distance (cutoff when exactly one exists, zero when neither does).
// Tracks with no point inside the window are dropped first.
double ospa2(const std::vector<TrackTrace>& x, const std::vector<TrackTrace>& y, int first_scan,
             int last_scan, double p, double c);

}  // namespace glmb
