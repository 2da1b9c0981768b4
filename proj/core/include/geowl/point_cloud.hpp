#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "geowl/errors.hpp"

namespace geowl {

using Vec3 = Eigen::Vector3d;

/// A finite 3D point cloud with at least two nodes and optional integer
/// node labels (e.g. atomic numbers). Operations treat clouds as immutable
/// values; none of them mutates its input.
struct PointCloud {
  std::vector<Vec3> coords;
  std::optional<std::vector<int>> labels;

  int size() const { return static_cast<int>(coords.size()); }
  bool labeled() const { return labels.has_value(); }
  int label(int i) const { return (*labels)[i]; }
};

/// Throws InvalidCloud unless the structural invariants hold: n >= 2,
/// every coordinate finite, label count (when present) equal to n.
void validate_cloud(const PointCloud& cloud);

PointCloud make_cloud(std::vector<Vec3> coords,
                      std::optional<std::vector<int>> labels = std::nullopt);

/// Groups of rigid motions: E(3) admits reflections, SE(3) does not.
enum class SymmetryGroup { E3, SE3 };

}  // namespace geowl
