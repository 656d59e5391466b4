#pragma once

// Brute-force reference implementations used only by tests. Each one is
// written from the definition, not from the production algorithm.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "screenref/screen_model.hpp"

namespace screenref::oracle {

/// Reading order by explicit lexicographic key (center_y, center_x, input position).
inline std::vector<std::size_t> reading_order(const std::vector<PlacedObject>& objs) {
  std::vector<std::size_t> idx(objs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    double ay = objs[a].box.top() + objs[a].box.height() / 2, by = objs[b].box.top() + objs[b].box.height() / 2;
    if (ay != by) return ay < by;
    double ax = objs[a].box.left() + objs[a].box.width() / 2, bx = objs[b].box.left() + objs[b].box.width() / 2;
    if (ax != bx) return ax < bx;
    return a < b;
  });
  return idx;
}

/// Levels as sets of input positions: repeatedly take the topmost remaining
/// object as anchor and claim every remaining object within margin of it.
inline std::vector<std::vector<std::size_t>> anchor_levels(const std::vector<PlacedObject>& objs, double margin) {
  auto order = reading_order(objs);
  std::vector<bool> taken(objs.size(), false);
  std::vector<std::vector<std::size_t>> levels;
  auto cy = [&](std::size_t i) { return objs[i].box.top() + objs[i].box.height() / 2; };
  for (;;) {
    std::optional<std::size_t> anchor;
    for (std::size_t i : order) {
      if (!taken[i]) {
        anchor = i;
        break;
      }
    }
    if (!anchor) break;
    std::vector<std::size_t> level;
    for (std::size_t i : order) {
      if (!taken[i] && std::abs(cy(i) - cy(*anchor)) <= margin) level.push_back(i);
    }
    for (std::size_t i : level) taken[i] = true;
    levels.push_back(std::move(level));
  }
  return levels;
}

/// Minimum distance between two rectangles estimated by sampling a dense grid
/// of points on both boundaries. Upper bound on the true distance; exact when
/// the closest points fall on grid nodes.
inline double sampled_rect_distance(const BBox& a, const BBox& b, int steps = 200) {
  auto boundary = [&](const BBox& r) {
    std::vector<Point> pts;
    for (int i = 0; i <= steps; ++i) {
      double t = static_cast<double>(i) / steps;
      double x = r.left() + t * r.width();
      double y = r.top() + t * r.height();
      pts.push_back({x, r.top()});
      pts.push_back({x, r.bottom()});
      pts.push_back({r.left(), y});
      pts.push_back({r.right(), y});
    }
    return pts;
  };
  auto inside = [](const BBox& r, Point p) {
    return p.x >= r.left() && p.x <= r.right() && p.y >= r.top() && p.y <= r.bottom();
  };
  auto pa = boundary(a), pb = boundary(b);
  for (const auto& p : pa)
    if (inside(b, p)) return 0.0;
  for (const auto& p : pb)
    if (inside(a, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pa)
    for (const auto& q : pb) best = std::min(best, std::hypot(p.x - q.x, p.y - q.y));
  return best;
}

/// Closed-form-free rectangle gap used by the DBSCAN oracle: per-axis gap
/// computed from interval separation.
inline double interval_gap_distance(const BBox& a, const BBox& b) {
  auto gap = [](double lo1, double hi1, double lo2, double hi2) {
    if (hi1 < lo2) return lo2 - hi1;
    if (hi2 < lo1) return lo1 - hi2;
    return 0.0;
  };
  return std::sqrt(std::pow(gap(a.left(), a.right(), b.left(), b.right()), 2) +
                   std::pow(gap(a.top(), a.bottom(), b.top(), b.bottom()), 2));
}

/// DBSCAN labels from the definition: core points, core-core connectivity
/// via transitive closure, clusters numbered by their lowest core index,
/// border points given to the first cluster (by number) with a core
/// neighbour. -1 is noise.
inline std::vector<int> naive_dbscan(const std::vector<PlacedObject>& objs, double eps, std::size_t min_pts) {
  const std::size_t n = objs.size();
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) near[i][j] = interval_gap_distance(objs[i].box, objs[j].box) <= eps;
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = std::count(near[i].begin(), near[i].end(), true) >= (long)min_pts;

  // reach[i][j]: core i and core j connected through a chain of cores.
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = core[i] && core[j] && near[i][j];
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;

  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || label[i] != -1) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (j == i || reach[i][j]) label[j] = next;
    ++next;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) continue;
    int best = -1;
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && near[i][j] && (best == -1 || label[j] < best)) best = label[j];
    }
    label[i] = best;
  }
  return label;
}

}  // namespace screenref::oracle
