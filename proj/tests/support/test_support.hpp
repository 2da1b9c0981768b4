#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "geowl/counterexamples.hpp"
#include "geowl/geometry.hpp"
#include "geowl/point_cloud.hpp"

namespace geowl::testing {

/// Deterministic splitmix64 stream; used instead of <random> distributions
/// so expected values frozen in tests stay stable across standard
/// libraries.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

  double gaussian() {
    const double u1 = std::max(uniform(), 1e-300);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
};

inline Eigen::Matrix3d random_rotation(Rng& rng) {
  Eigen::Vector4d q(rng.gaussian(), rng.gaussian(), rng.gaussian(), rng.gaussian());
  q.normalize();
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Eigen::Matrix3d r;
  r << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
      2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
      2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
  return r;
}

inline std::vector<int> random_permutation(Rng& rng, int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  return perm;
}

inline Vec3 random_translation(Rng& rng, double scale = 2.0) {
  return Vec3(rng.uniform(-scale, scale), rng.uniform(-scale, scale),
              rng.uniform(-scale, scale));
}

inline PointCloud gaussian_cloud(Rng& rng, int n, int label_kinds = 0) {
  std::vector<Vec3> coords;
  coords.reserve(n);
  for (int i = 0; i < n; ++i) {
    coords.push_back(Vec3(rng.gaussian(), rng.gaussian(), rng.gaussian()));
  }
  std::optional<std::vector<int>> labels;
  if (label_kinds > 0) {
    std::vector<int> l(n);
    for (int i = 0; i < n; ++i) l[i] = rng.below(label_kinds);
    labels = std::move(l);
  }
  return make_cloud(std::move(coords), std::move(labels));
}

/// Random rigid copy: rotation (optionally composed with a reflection),
/// translation, and node permutation.
inline PointCloud isomorphic_copy(Rng& rng, const PointCloud& cloud, bool reflect = false) {
  Eigen::Matrix3d r = random_rotation(rng);
  if (reflect) r.col(2) = -r.col(2);
  return permuted(transformed(cloud, r, random_translation(rng)),
                  random_permutation(rng, cloud.size()));
}

// ---- fixtures ----

/// Equilateral triangle of the given side length, centered at the origin
/// in the xy-plane.
inline PointCloud equilateral_triangle(double side = 1.5) {
  const double circum = side / std::sqrt(3.0);
  return make_cloud({Vec3(circum, 0, 0), Vec3(-circum / 2, circum * std::sqrt(3.0) / 2, 0),
                     Vec3(-circum / 2, -circum * std::sqrt(3.0) / 2, 0)});
}

/// Five points on the unit sphere whose centroid is the origin: an
/// equilateral triangle at height c plus two off-axis points at height
/// -3c/2. Every node is unit distance from the centroid (one center
/// distance class) while distance refinement splits the nodes into
/// classes whose centroids do not coincide.
inline PointCloud center_symmetric_refinement_asymmetric_cloud(double c = 0.5) {
  const double rt = std::sqrt(1.0 - c * c);
  const double a = std::sqrt(1.0 - 2.25 * c * c);
  return make_cloud({Vec3(0, rt, c), Vec3(-rt * std::sqrt(3.0) / 2, -rt / 2, c),
                     Vec3(rt * std::sqrt(3.0) / 2, -rt / 2, c), Vec3(a, 0, -1.5 * c),
                     Vec3(-a, 0, -1.5 * c)});
}

inline PointCloud unit_square() {
  return make_cloud({Vec3(0.5, 0.5, 0), Vec3(-0.5, 0.5, 0), Vec3(-0.5, -0.5, 0),
                     Vec3(0.5, -0.5, 0)});
}

inline PointCloud segment_pair() {
  return make_cloud({Vec3(-1, 0, 0), Vec3(1, 0, 0)});
}

/// Generic 4-point cloud that is chiral with probability one; callers
/// certify chirality through the isomorphism oracle.
inline PointCloud random_chiral_candidate(Rng& rng) { return gaussian_cloud(rng, 4); }

/// Seeded mixed corpus of `total` clouds: generic Gaussian clouds (some
/// labeled), highly symmetric fixtures, and a few isomorphic copies so
/// engines face equal-fingerprint classes too.
inline std::vector<PointCloud> mixed_corpus(std::uint64_t seed, int total) {
  Rng rng(seed);
  std::vector<PointCloud> corpus;
  corpus.push_back(equilateral_triangle(1.0));
  corpus.push_back(equilateral_triangle(2.0));
  corpus.push_back(unit_square());
  corpus.push_back(segment_pair());
  corpus.push_back(center_symmetric_refinement_asymmetric_cloud(0.3));
  corpus.push_back(center_symmetric_refinement_asymmetric_cloud(0.5));
  corpus.push_back(polyhedron_vertices(PolyhedronKind::Tetrahedron, 1.0));
  corpus.push_back(polyhedron_vertices(PolyhedronKind::Cube, 1.0));
  corpus.push_back(polyhedron_vertices(PolyhedronKind::Octahedron, 1.0));
  corpus.push_back(combine_clouds(polyhedron_vertices(PolyhedronKind::Cube, 1.0),
                                  polyhedron_vertices(PolyhedronKind::Octahedron, 1.0), 0.5));
  while (static_cast<int>(corpus.size()) < total) {
    const int kind = rng.below(10);
    if (kind < 6) {
      corpus.push_back(gaussian_cloud(rng, 3 + rng.below(6)));
    } else if (kind < 8) {
      corpus.push_back(gaussian_cloud(rng, 3 + rng.below(6), 2));
    } else if (kind == 8 && corpus.size() >= 2) {
      corpus.push_back(isomorphic_copy(rng, corpus[rng.below(static_cast<int>(corpus.size()))],
                                       rng.below(2) == 0));
    } else {
      std::vector<Vec3> flat;
      const int n = 3 + rng.below(4);
      for (int i = 0; i < n; ++i) flat.push_back(Vec3(rng.gaussian(), rng.gaussian(), 0));
      corpus.push_back(transformed(make_cloud(flat), random_rotation(rng),
                                   random_translation(rng)));
    }
  }
  return corpus;
}

}  // namespace geowl::testing
