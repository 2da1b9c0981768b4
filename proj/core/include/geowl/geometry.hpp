#pragma once

#include <Eigen/Core>
#include <vector>

#include "geowl/point_cloud.hpp"

namespace geowl {

/// Symmetric matrix of pairwise Euclidean distances; zero diagonal.
Eigen::MatrixXd distance_matrix(const PointCloud& cloud);

/// Coordinate-wise mean of all points.
Vec3 centroid(const PointCloud& cloud);

/// Largest node-to-centroid distance.
double max_centroid_distance(const PointCloud& cloud);

/// Translates the cloud to centroid-at-origin and scales it uniformly so
/// the farthest node sits at distance 1 from the origin. Throws
/// DegenerateCloud when all points coincide.
PointCloud rescale_unit(const PointCloud& cloud);

/// Returns the cloud with coordinates mapped through p -> R p + t.
PointCloud transformed(const PointCloud& cloud, const Eigen::Matrix3d& rotation,
                       const Vec3& translation);

/// Returns the cloud with node order permuted: node i of the result is
/// node perm[i] of the input.
PointCloud permuted(const PointCloud& cloud, const std::vector<int>& perm);

/// Mirror image (negated z coordinate).
PointCloud mirrored(const PointCloud& cloud);

}  // namespace geowl
