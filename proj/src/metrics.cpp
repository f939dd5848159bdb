#include "glmb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glmb {

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());
  if (nr == 0) return {};
  if (nr > nc) throw std::invalid_argument("assignment needs at least as many columns as rows");
  if (!cost.allFinite()) throw std::invalid_argument("assignment costs must be finite");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(nr), 0.0);
  std::vector<double> v(static_cast<std::size_t>(nc), 0.0);
  std::vector<double> shortest(static_cast<std::size_t>(nc));
  std::vector<int> path(static_cast<std::size_t>(nc));
  std::vector<int> col4row(static_cast<std::size_t>(nr), -1);
  std::vector<int> row4col(static_cast<std::size_t>(nc), -1);
  std::vector<char> sr(static_cast<std::size_t>(nr));
  std::vector<char> sc(static_cast<std::size_t>(nc));

  // one shortest augmenting path per row, with dual potentials u, v
  for (int cur = 0; cur < nr; ++cur) {
    std::fill(sr.begin(), sr.end(), 0);
    std::fill(sc.begin(), sc.end(), 0);
    std::fill(shortest.begin(), shortest.end(), kInf);
    std::fill(path.begin(), path.end(), -1);

    int i = cur;
    int sink = -1;
    double min_val = 0.0;
    while (sink == -1) {
      sr[static_cast<std::size_t>(i)] = 1;
      double lowest = kInf;
      int index = -1;
      for (int j = 0; j < nc; ++j) {
        if (sc[static_cast<std::size_t>(j)]) continue;
        const double r = min_val + cost(i, j) - u[static_cast<std::size_t>(i)] -
                         v[static_cast<std::size_t>(j)];
        if (r < shortest[static_cast<std::size_t>(j)]) {
          shortest[static_cast<std::size_t>(j)] = r;
          path[static_cast<std::size_t>(j)] = i;
        }
        const double s = shortest[static_cast<std::size_t>(j)];
        if (s < lowest || (s == lowest && row4col[static_cast<std::size_t>(j)] == -1)) {
          lowest = s;
          index = j;
        }
      }
      min_val = lowest;
      const int j = index;
      sc[static_cast<std::size_t>(j)] = 1;
      if (row4col[static_cast<std::size_t>(j)] == -1) {
        sink = j;
      } else {
        i = row4col[static_cast<std::size_t>(j)];
      }
    }

    u[static_cast<std::size_t>(cur)] += min_val;
    for (int r = 0; r < nr; ++r) {
      if (sr[static_cast<std::size_t>(r)] && r != cur) {
        u[static_cast<std::size_t>(r)] +=
            min_val - shortest[static_cast<std::size_t>(col4row[static_cast<std::size_t>(r)])];
      }
    }
    for (int j = 0; j < nc; ++j) {
      if (sc[static_cast<std::size_t>(j)]) {
        v[static_cast<std::size_t>(j)] -= min_val - shortest[static_cast<std::size_t>(j)];
      }
    }

    int j = sink;
    while (true) {
      const int r = path[static_cast<std::size_t>(j)];
      row4col[static_cast<std::size_t>(j)] = r;
      std::swap(col4row[static_cast<std::size_t>(r)], j);
      if (r == cur) break;
    }
  }
  return col4row;
}

namespace {

void check_ospa_params(double p, double c) {
  if (!(p >= 1.0)) throw std::invalid_argument("ospa order must be at least 1");
  if (!(c > 0.0)) throw std::invalid_argument("ospa cutoff must be positive");
}

// shared tail: assignment over the p-powered base distances, cardinality penalty
double ospa_from_base(const Eigen::MatrixXd& base_pow, std::size_t nx, std::size_t ny, double p,
                      double c) {
  const std::size_t n = std::max(nx, ny);
  const std::size_t m = std::min(nx, ny);
  if (n == 0) return 0.0;
  if (m == 0) return c;
  const auto cols = solve_assignment(base_pow);
  double sum = 0.0;
  for (std::size_t r = 0; r < m; ++r) sum += base_pow(static_cast<int>(r), cols[r]);
  sum += std::pow(c, p) * static_cast<double>(n - m);
  return std::pow(sum / static_cast<double>(n), 1.0 / p);
}

}  // namespace

namespace {

// deterministic operand order so d(x, y) and d(y, x) run the same arithmetic
bool points_before(const std::vector<Eigen::Vector2d>& a, const std::vector<Eigen::Vector2d>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].x() != b[i].x()) return a[i].x() < b[i].x();
    if (a[i].y() != b[i].y()) return a[i].y() < b[i].y();
  }
  return true;
}

bool traces_before(const std::vector<const TrackTrace*>& a,
                   const std::vector<const TrackTrace*>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& pa = a[i]->points;
    const auto& pb = b[i]->points;
    auto ia = pa.begin();
    auto ib = pb.begin();
    for (; ia != pa.end() && ib != pb.end(); ++ia, ++ib) {
      if (ia->first != ib->first) return ia->first < ib->first;
      if (ia->second.x() != ib->second.x()) return ia->second.x() < ib->second.x();
      if (ia->second.y() != ib->second.y()) return ia->second.y() < ib->second.y();
    }
    if (pa.size() != pb.size()) return pa.size() < pb.size();
  }
  return true;
}

}  // namespace

double ospa(const std::vector<Eigen::Vector2d>& x, const std::vector<Eigen::Vector2d>& y,
            double p, double c) {
  check_ospa_params(p, c);
  const bool x_first = points_before(x, y);
  const std::vector<Eigen::Vector2d>& small = x_first ? x : y;
  const std::vector<Eigen::Vector2d>& large = x_first ? y : x;
  Eigen::MatrixXd d(small.size(), large.size());
  for (std::size_t r = 0; r < small.size(); ++r) {
    for (std::size_t s = 0; s < large.size(); ++s) {
      d(static_cast<int>(r), static_cast<int>(s)) =
          std::pow(std::min(c, (small[r] - large[s]).norm()), p);
    }
  }
  return ospa_from_base(d, x.size(), y.size(), p, c);
}

double ospa2(const std::vector<TrackTrace>& x, const std::vector<TrackTrace>& y, int first_scan,
             int last_scan, double p, double c) {
  check_ospa_params(p, c);
  if (first_scan > last_scan) throw std::invalid_argument("empty scan window");

  const auto in_window = [&](const TrackTrace& t) {
    const auto it = t.points.lower_bound(first_scan);
    return it != t.points.end() && it->first <= last_scan;
  };
  std::vector<const TrackTrace*> xs, ys;
  for (const auto& t : x) {
    if (in_window(t)) xs.push_back(&t);
  }
  for (const auto& t : y) {
    if (in_window(t)) ys.push_back(&t);
  }

  const bool x_first = traces_before(xs, ys);
  const auto& small = x_first ? xs : ys;
  const auto& large = x_first ? ys : xs;
  const double scans = static_cast<double>(last_scan - first_scan + 1);
  Eigen::MatrixXd d(small.size(), large.size());
  for (std::size_t r = 0; r < small.size(); ++r) {
    for (std::size_t s = 0; s < large.size(); ++s) {
      double acc = 0.0;
      for (int t = first_scan; t <= last_scan; ++t) {
        const auto a = small[r]->points.find(t);
        const auto b = large[s]->points.find(t);
        const bool ha = a != small[r]->points.end();
        const bool hb = b != large[s]->points.end();
        if (ha && hb) {
          acc += std::min(c, (a->second - b->second).norm());
        } else if (ha != hb) {
          acc += c;
        }
      }
      d(static_cast<int>(r), static_cast<int>(s)) = std::pow(acc / scans, p);
    }
  }
  return ospa_from_base(d, xs.size(), ys.size(), p, c);
}

}  // namespace glmb
