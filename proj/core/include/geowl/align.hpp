#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "geowl/point_cloud.hpp"

namespace geowl {

/// Result of a successful isomorphism alignment. `permutation[i]` is the
/// node of the second cloud matched to node i of the first cloud;
/// `used_reflection` is false whenever the requested group is SE(3).
struct AlignmentResult {
  double rmsd = 0.0;
  std::vector<int> permutation;
  bool used_reflection = false;
};

/// Exhaustive isomorphism oracle for small clouds (intended for n <= 12).
///
/// Searches node bijections that respect labels and centroid-distance
/// classes, pruning with pairwise distance consistency, and solves the
/// optimal rotation per surviving bijection by orthogonal Procrustes.
/// Returns an alignment with rmsd <= tol iff the clouds are isomorphic
/// under the group (permutation + rigid motion; reflection allowed only
/// for E(3)). Throws TooLarge when the pruned search exceeds `budget`
/// backtracking steps.
std::optional<AlignmentResult> align_isomorphic(const PointCloud& a, const PointCloud& b,
                                                SymmetryGroup group, double tol = 1e-6,
                                                std::uint64_t budget = 20'000'000);

/// Optimal rigid superposition for a known correspondence (node i of x to
/// node i of y), solved by orthogonal Procrustes on centered coordinates.
/// For SE(3) the rotation determinant is forced to +1.
struct SuperpositionResult {
  Eigen::Matrix3d rotation;
  double rmsd = 0.0;
  bool improper = false;
};

SuperpositionResult superpose(const std::vector<Vec3>& x, const std::vector<Vec3>& y,
                              SymmetryGroup group);

}  // namespace geowl
