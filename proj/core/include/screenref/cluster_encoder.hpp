#pragma once

// Clustering-based encoding of on-screen entities. Each entity gets the text of
// the surrounding objects in its nearest DBSCAN cluster, plus its position on
// screen. Kept for comparison with the layout encoder; prompt length grows
// with the square of cluster size.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "screenref/screen_model.hpp"

namespace screenref {

/// Smallest Euclidean distance between any two points of the rectangles;
/// 0 when they touch or overlap.
double rect_distance(const BBox& a, const BBox& b) noexcept;

inline constexpr int kNoiseCluster = -1;

struct Cluster {
  int id = 0;
  std::vector<std::size_t> members;  // indices into the clustered objects
};

struct Clustering {
  std::vector<int> labels;  // per object; kNoiseCluster for noise
  std::vector<Cluster> clusters;
};

/// DBSCAN under rect_distance. A point is core when at least `min_pts`
/// objects (itself included) lie within `eps`. Clusters are numbered in the
/// order their seed core point appears in the input. Throws
/// PreconditionError unless eps > 0 and min_pts >= 1.
Clustering dbscan_cluster(std::span<const PlacedObject> objects, double eps, std::size_t min_pts);

/// Cluster id nearest to `entity_box` (min over members), ties to the lower
/// id. nullopt when there are no clusters.
std::optional<int> assign_entity_cluster(const BBox& entity_box, std::span<const PlacedObject> objects,
                                         const Clustering& clustering);

/// True when the two strings share a whitespace-delimited token, compared
/// case-insensitively.
bool shares_token(std::string_view a, std::string_view b);

struct ClusterEncoding {
  std::size_t entity_index = 0;  // 1-based
  std::vector<std::string> surrounding_prompt;
  double distance_from_top = 0.0;
  double distance_from_left = 0.0;
};

/// Texts of the members of `cluster_id` that share no token with the entity's
/// display text, in object order. With no cluster the entity keeps only its
/// position.
ClusterEncoding build_cluster_encoding(std::size_t entity_index, const Entity& entity,
                                       std::span<const PlacedObject> objects, const Clustering& clustering,
                                       std::optional<int> cluster_id);

struct ClusterConfig {
  std::optional<double> eps;  // unset: median object height
  std::size_t min_pts = 1;
};

/// Runs the full per-entity procedure: dedup the entity's surrounding objects,
/// cluster them, pick the entity's cluster and build its encoding.
std::vector<ClusterEncoding> encode_clusters(std::span<const Entity> entities, const ClusterConfig& config = {});

}  // namespace screenref
