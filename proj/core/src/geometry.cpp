#include "geowl/geometry.hpp"

#include <cmath>

namespace geowl {

void validate_cloud(const PointCloud& cloud) {
  if (cloud.coords.size() < 2) throw InvalidCloud("point cloud needs at least 2 nodes");
  for (const auto& p : cloud.coords) {
    if (!p.allFinite()) throw InvalidCloud("point cloud has a non-finite coordinate");
  }
  if (cloud.labels && cloud.labels->size() != cloud.coords.size()) {
    throw InvalidCloud("label count does not match node count");
  }
}

PointCloud make_cloud(std::vector<Vec3> coords, std::optional<std::vector<int>> labels) {
  PointCloud cloud{std::move(coords), std::move(labels)};
  validate_cloud(cloud);
  return cloud;
}

Eigen::MatrixXd distance_matrix(const PointCloud& cloud) {
  const int n = cloud.size();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double v = (cloud.coords[i] - cloud.coords[j]).norm();
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

Vec3 centroid(const PointCloud& cloud) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : cloud.coords) c += p;
  return c / static_cast<double>(cloud.size());
}

double max_centroid_distance(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  double r = 0.0;
  for (const auto& p : cloud.coords) r = std::max(r, (p - c).norm());
  return r;
}

PointCloud rescale_unit(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  double r = 0.0;
  for (const auto& p : cloud.coords) r = std::max(r, (p - c).norm());
  if (r == 0.0) throw DegenerateCloud("all points coincide; unit rescale undefined");
  PointCloud out;
  out.coords.reserve(cloud.coords.size());
  for (const auto& p : cloud.coords) out.coords.push_back((p - c) / r);
  out.labels = cloud.labels;
  return out;
}

PointCloud transformed(const PointCloud& cloud, const Eigen::Matrix3d& rotation,
                       const Vec3& translation) {
  PointCloud out;
  out.coords.reserve(cloud.coords.size());
  for (const auto& p : cloud.coords) out.coords.push_back(rotation * p + translation);
  out.labels = cloud.labels;
  return out;
}

PointCloud permuted(const PointCloud& cloud, const std::vector<int>& perm) {
  PointCloud out;
  out.coords.resize(cloud.coords.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out.coords[i] = cloud.coords[perm[i]];
  if (cloud.labels) {
    std::vector<int> labels(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) labels[i] = (*cloud.labels)[perm[i]];
    out.labels = std::move(labels);
  }
  return out;
}

PointCloud mirrored(const PointCloud& cloud) {
  PointCloud out = cloud;
  for (auto& p : out.coords) p.z() = -p.z();
  return out;
}

}  // namespace geowl
