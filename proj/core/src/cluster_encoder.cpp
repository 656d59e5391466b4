#include "screenref/cluster_encoder.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "screenref/error.hpp"

namespace screenref {

double rect_distance(const BBox& a, const BBox& b) noexcept {
  double dx = std::max({0.0, a.left() - b.right(), b.left() - a.right()});
  double dy = std::max({0.0, a.top() - b.bottom(), b.top() - a.bottom()});
  return std::hypot(dx, dy);
}

Clustering dbscan_cluster(std::span<const PlacedObject> objects, double eps, std::size_t min_pts) {
  if (!(eps > 0.0)) throw PreconditionError("dbscan eps must be positive");
  if (min_pts < 1) throw PreconditionError("dbscan min_pts must be at least 1");

  const std::size_t n = objects.size();
  auto neighbours = [&](std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n; ++j) {
      if (rect_distance(objects[i].box, objects[j].box) <= eps) out.push_back(j);
    }
    return out;
  };

  constexpr int kUnvisited = -2;
  Clustering result;
  result.labels.assign(n, kUnvisited);

  for (std::size_t i = 0; i < n; ++i) {
    if (result.labels[i] != kUnvisited) continue;
    auto seeds = neighbours(i);
    if (seeds.size() < min_pts) {
      result.labels[i] = kNoiseCluster;
      continue;
    }
    const int id = static_cast<int>(result.clusters.size());
    result.labels[i] = id;
    // Breadth-first expansion; the queue grows while we walk it.
    for (std::size_t q = 0; q < seeds.size(); ++q) {
      std::size_t j = seeds[q];
      if (result.labels[j] == kNoiseCluster) result.labels[j] = id;  // border point
      if (result.labels[j] != kUnvisited) continue;
      result.labels[j] = id;
      auto more = neighbours(j);
      if (more.size() >= min_pts) seeds.insert(seeds.end(), more.begin(), more.end());
    }
    result.clusters.push_back({id, {}});
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (result.labels[i] >= 0) result.clusters[static_cast<std::size_t>(result.labels[i])].members.push_back(i);
  }
  return result;
}

std::optional<int> assign_entity_cluster(const BBox& entity_box, std::span<const PlacedObject> objects,
                                         const Clustering& clustering) {
  std::optional<int> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& c : clustering.clusters) {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t m : c.members) d = std::min(d, rect_distance(entity_box, objects[m].box));
    if (d < best_dist) {
      best_dist = d;
      best = c.id;
    }
  }
  return best;
}

namespace {

std::set<std::string> lowercase_tokens(std::string_view s) {
  std::set<std::string> tokens;
  std::string cur;
  for (char ch : s) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!cur.empty()) tokens.insert(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
  }
  if (!cur.empty()) tokens.insert(std::move(cur));
  return tokens;
}

double median_height(std::span<const PlacedObject> objects) {
  std::vector<double> h;
  for (const auto& o : objects) h.push_back(o.box.height());
  if (h.empty()) return 0.0;
  std::sort(h.begin(), h.end());
  std::size_t n = h.size();
  return n % 2 == 1 ? h[n / 2] : (h[n / 2 - 1] + h[n / 2]) / 2.0;
}

}  // namespace

bool shares_token(std::string_view a, std::string_view b) {
  auto ta = lowercase_tokens(a);
  auto tb = lowercase_tokens(b);
  return std::any_of(ta.begin(), ta.end(), [&](const std::string& t) { return tb.count(t) > 0; });
}

ClusterEncoding build_cluster_encoding(std::size_t entity_index, const Entity& entity,
                                       std::span<const PlacedObject> objects, const Clustering& clustering,
                                       std::optional<int> cluster_id) {
  if (!entity.placement()) {
    throw PreconditionError("entity " + std::to_string(entity_index) + " has no screen placement");
  }
  ClusterEncoding enc;
  enc.entity_index = entity_index;
  Point c = bbox_center(entity.placement()->box);
  enc.distance_from_top = c.y;
  enc.distance_from_left = c.x;
  if (!cluster_id) return enc;

  const std::string& own = *entity.display_text();
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (clustering.labels[i] != *cluster_id) continue;
    if (shares_token(own, objects[i].text)) continue;
    enc.surrounding_prompt.push_back(objects[i].text);
  }
  return enc;
}

std::vector<ClusterEncoding> encode_clusters(std::span<const Entity> entities, const ClusterConfig& config) {
  if (config.eps && !(*config.eps > 0.0)) throw ValidationError("cluster eps must be positive");
  std::vector<ClusterEncoding> out;
  out.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    const auto& e = entities[i];
    if (!e.placement()) throw PreconditionError("entity " + std::to_string(i + 1) + " has no screen placement");

    std::vector<PlacedObject> objects;
    for (const auto& s : e.placement()->surrounding) {
      bool dup = std::any_of(objects.begin(), objects.end(),
                             [&](const PlacedObject& o) { return o.text == s.text() && o.box == s.box(); });
      if (!dup) objects.push_back({s.text(), s.box(), std::nullopt});
    }

    double eps = config.eps.value_or(median_height(objects));
    if (!(eps > 0.0)) eps = 1.0;  // degenerate zero-height screens
    Clustering clustering = dbscan_cluster(objects, eps, config.min_pts);
    auto cluster = assign_entity_cluster(e.placement()->box, objects, clustering);
    out.push_back(build_cluster_encoding(i + 1, e, objects, clustering, cluster));
  }
  return out;
}

}  // namespace screenref
