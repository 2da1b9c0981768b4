#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <vector>

#include "geowl/point_cloud.hpp"
#include "geowl/quantize.hpp"

namespace geowl {

/// Per-node distances to two distinct anchors plus the anchor gap — the
/// seed data of coordinate reconstruction.
struct TriangularEncoding {
  Vec3 anchor_c1 = Vec3::Zero();
  Vec3 anchor_c2 = Vec3::Zero();
  double anchor_gap = 0.0;
  std::vector<std::pair<double, double>> per_node;  // (d_{i,c1}, d_{i,c2})
};

/// Exact distances from every node to both anchors. Throws
/// CoincidentAnchors when the anchors are closer than 1e-9.
TriangularEncoding triangular_encoding(const PointCloud& cloud, const Vec3& c1,
                                       const Vec3& c2);

struct ReconstructionResult {
  std::vector<Vec3> coords;
  SymmetryGroup group = SymmetryGroup::E3;
  double residual_rmsd = 0.0;  // rms discrepancy against the input distance data
};

/// Places c1 at the origin and c2 on the +x axis; each node's axial
/// coordinate and off-axis radius follow from its anchor distances, the
/// seed node (maximal off-axis radius) fixes the xy half-plane, and the
/// remaining z-signs are resolved by matching distances to already placed
/// off-plane nodes. The first off-plane node is fixed to z >= 0, so the
/// output is congruent to the source up to E(3). Planar inputs come back
/// planar. Throws InconsistentDistances when no assignment reproduces the
/// distance matrix within tol.
ReconstructionResult reconstruct_e3(const TriangularEncoding& enc, const Eigen::MatrixXd& d,
                                    double tol = 1e-6);

/// Orientation oracle: sign of det[c2 - c1, p_j - c1, p_k - c1] for node
/// indices (j, k), in {-1, 0, +1}.
using OrientationSignFn = std::function<int(int, int)>;

/// Signs computed directly from a cloud and its anchors, with a 1e-9 zero
/// band on the determinant.
OrientationSignFn orientation_signs_from_cloud(const PointCloud& cloud, const Vec3& c1,
                                               const Vec3& c2);

/// As reconstruct_e3, but the first off-plane node's z-sign comes from the
/// supplied orientation sign, so the output is congruent up to SE(3) (no
/// reflection). Throws MissingOrientation when the data is non-planar but
/// no usable sign exists.
ReconstructionResult reconstruct_se3(const TriangularEncoding& enc, const Eigen::MatrixXd& d,
                                     const OrientationSignFn& signs, double tol = 1e-6);

/// Complete invariant for center-asymmetric clouds: anchors at (centroid,
/// centroid of the least color class displaced from it by more than eps),
/// E(3) reconstruction, a canonical mirror choice, and a lexicographic
/// node order with quantized keys. Returns nullopt for clouds whose
/// center-distance classes are eps-coincident (the regime where the
/// anchor construction has no second anchor).
std::optional<std::vector<Vec3>> complete_invariant(const PointCloud& cloud,
                                                    const Quantizer& quantizer, double eps);

}  // namespace geowl
