#include <doctest.h>

#include <cmath>

#include "geowl/align.hpp"
#include "geowl/geometry.hpp"
#include "geowl/reconstruct.hpp"
#include "test_support.hpp"

using namespace geowl;
using namespace geowl::testing;

namespace {

// Anchors used throughout: the centroid and the farthest node.
std::pair<Vec3, Vec3> default_anchors(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  int far = 0;
  double best = -1.0;
  for (int i = 0; i < cloud.size(); ++i) {
    const double r = (cloud.coords[i] - c).norm();
    if (r > best) {
      best = r;
      far = i;
    }
  }
  return {c, cloud.coords[far]};
}

PointCloud as_cloud(const std::vector<Vec3>& coords) { return make_cloud(coords); }

}  // namespace

TEST_CASE("triangular_encoding") {
  SUBCASE("segment with endpoint anchors") {
    const PointCloud seg = segment_pair();
    const TriangularEncoding enc =
        triangular_encoding(seg, Vec3(-1, 0, 0), Vec3(1, 0, 0));
    CHECK(enc.anchor_gap == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(enc.per_node[0].first == 0.0);
    CHECK(enc.per_node[0].second == doctest::Approx(2.0));
    CHECK(enc.per_node[1].first == doctest::Approx(2.0));
    CHECK(enc.per_node[1].second == 0.0);
  }
  SUBCASE("matches direct norms on a seeded cloud") {
    Rng rng(400);
    const PointCloud cloud = gaussian_cloud(rng, 8);
    const auto [c1, c2] = default_anchors(cloud);
    const TriangularEncoding enc = triangular_encoding(cloud, c1, c2);
    for (int i = 0; i < cloud.size(); ++i) {
      CHECK(std::abs(enc.per_node[i].first - (cloud.coords[i] - c1).norm()) <= 1e-12);
      CHECK(std::abs(enc.per_node[i].second - (cloud.coords[i] - c2).norm()) <= 1e-12);
    }
  }
  SUBCASE("coincident anchors are rejected") {
    const PointCloud seg = segment_pair();
    CHECK_THROWS_AS(triangular_encoding(seg, Vec3(0, 0, 0), Vec3(0, 0, 0)),
                    CoincidentAnchors);
  }
}

TEST_CASE("reconstruct_e3 round trips") {
  Rng rng(401);
  SUBCASE("generic seeded clouds") {
    for (int trial = 0; trial < 10; ++trial) {
      const PointCloud cloud = gaussian_cloud(rng, 4 + rng.below(5));
      const auto [c1, c2] = default_anchors(cloud);
      const TriangularEncoding enc = triangular_encoding(cloud, c1, c2);
      const ReconstructionResult rec = reconstruct_e3(enc, distance_matrix(cloud));
      CHECK(rec.residual_rmsd <= 1e-9);
      const auto match = align_isomorphic(cloud, as_cloud(rec.coords), SymmetryGroup::E3);
      REQUIRE(match.has_value());
      CHECK(match->rmsd <= 1e-6);
    }
  }
  SUBCASE("planar clouds reconstruct planar") {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Vec3> flat;
      for (int i = 0; i < 5; ++i) flat.push_back(Vec3(rng.gaussian(), rng.gaussian(), 0));
      // Bury the plane in a random orientation first.
      const PointCloud planar =
          transformed(make_cloud(flat), random_rotation(rng), random_translation(rng));
      const auto [c1, c2] = default_anchors(planar);
      const TriangularEncoding enc = triangular_encoding(planar, c1, c2);
      const ReconstructionResult rec = reconstruct_e3(enc, distance_matrix(planar));
      for (const auto& p : rec.coords) CHECK(std::abs(p.z()) <= 1e-6);
      const auto match = align_isomorphic(planar, as_cloud(rec.coords), SymmetryGroup::E3);
      REQUIRE(match.has_value());
      CHECK(match->rmsd <= 1e-6);
    }
  }
  SUBCASE("chiral clouds may come back mirrored but E(3)-align") {
    const PointCloud cloud = random_chiral_candidate(rng);
    const auto [c1, c2] = default_anchors(cloud);
    const ReconstructionResult rec =
        reconstruct_e3(triangular_encoding(cloud, c1, c2), distance_matrix(cloud));
    CHECK(align_isomorphic(cloud, as_cloud(rec.coords), SymmetryGroup::E3).has_value());
  }
  SUBCASE("corrupted distances are rejected") {
    const PointCloud cloud = gaussian_cloud(rng, 6);
    const auto [c1, c2] = default_anchors(cloud);
    const TriangularEncoding enc = triangular_encoding(cloud, c1, c2);
    Eigen::MatrixXd d = distance_matrix(cloud);
    d(1, 2) += 0.25;
    d(2, 1) += 0.25;
    CHECK_THROWS_AS(reconstruct_e3(enc, d), InconsistentDistances);
  }
}

TEST_CASE("reconstruct_se3") {
  Rng rng(402);
  SUBCASE("chiral round trip without reflection") {
    for (int trial = 0; trial < 8; ++trial) {
      const PointCloud cloud = gaussian_cloud(rng, 4 + rng.below(4));
      if (align_isomorphic(cloud, mirrored(cloud), SymmetryGroup::SE3).has_value()) continue;
      const auto [c1, c2] = default_anchors(cloud);
      const TriangularEncoding enc = triangular_encoding(cloud, c1, c2);
      const ReconstructionResult rec = reconstruct_se3(
          enc, distance_matrix(cloud), orientation_signs_from_cloud(cloud, c1, c2));
      const auto match = align_isomorphic(cloud, as_cloud(rec.coords), SymmetryGroup::SE3);
      REQUIRE(match.has_value());
      CHECK(match->rmsd <= 1e-6);
      CHECK_FALSE(match->used_reflection);
    }
  }
  SUBCASE("negated signs reconstruct the mirror image") {
    PointCloud cloud = gaussian_cloud(rng, 5);
    while (align_isomorphic(cloud, mirrored(cloud), SymmetryGroup::SE3).has_value()) {
      cloud = gaussian_cloud(rng, 5);
    }
    const auto [c1, c2] = default_anchors(cloud);
    const TriangularEncoding enc = triangular_encoding(cloud, c1, c2);
    const OrientationSignFn straight = orientation_signs_from_cloud(cloud, c1, c2);
    const OrientationSignFn flipped = [straight](int j, int k) { return -straight(j, k); };
    const ReconstructionResult rec = reconstruct_se3(enc, distance_matrix(cloud), flipped);
    CHECK_FALSE(align_isomorphic(cloud, as_cloud(rec.coords), SymmetryGroup::SE3).has_value());
    CHECK(align_isomorphic(mirrored(cloud), as_cloud(rec.coords), SymmetryGroup::SE3)
              .has_value());
  }
  SUBCASE("planar clouds agree with the E(3) branch") {
    std::vector<Vec3> flat;
    for (int i = 0; i < 5; ++i) flat.push_back(Vec3(rng.gaussian(), rng.gaussian(), 0));
    const PointCloud planar = make_cloud(flat);
    const auto [c1, c2] = default_anchors(planar);
    const TriangularEncoding enc = triangular_encoding(planar, c1, c2);
    const ReconstructionResult e3 = reconstruct_e3(enc, distance_matrix(planar));
    const ReconstructionResult se3 = reconstruct_se3(
        enc, distance_matrix(planar), orientation_signs_from_cloud(planar, c1, c2));
    REQUIRE(e3.coords.size() == se3.coords.size());
    for (std::size_t i = 0; i < e3.coords.size(); ++i) {
      CHECK((e3.coords[i] - se3.coords[i]).norm() <= 1e-12);
    }
  }
  SUBCASE("missing orientation on non-planar data") {
    const PointCloud cloud = gaussian_cloud(rng, 6);
    const auto [c1, c2] = default_anchors(cloud);
    const TriangularEncoding enc = triangular_encoding(cloud, c1, c2);
    const OrientationSignFn none = [](int, int) { return 0; };
    CHECK_THROWS_AS(reconstruct_se3(enc, distance_matrix(cloud), none), MissingOrientation);
  }
}

TEST_CASE("complete_invariant") {
  Rng rng(403);
  const Quantizer q(9);

  SUBCASE("constant on isomorphism classes") {
    for (int trial = 0; trial < 10; ++trial) {
      const PointCloud cloud = rescale_unit(gaussian_cloud(rng, 4 + rng.below(7)));
      const auto form1 = complete_invariant(cloud, q, 1e-6);
      REQUIRE(form1.has_value());
      const auto form2 = complete_invariant(isomorphic_copy(rng, cloud, trial % 2 == 1), q, 1e-6);
      REQUIRE(form2.has_value());
      REQUIRE(form1->size() == form2->size());
      for (std::size_t i = 0; i < form1->size(); ++i) {
        CHECK(((*form1)[i] - (*form2)[i]).norm() <= 1e-6);
      }
    }
  }
  SUBCASE("separates non-isomorphic clouds") {
    for (int trial = 0; trial < 10; ++trial) {
      const PointCloud a = rescale_unit(gaussian_cloud(rng, 6));
      const PointCloud b = rescale_unit(gaussian_cloud(rng, 6));
      REQUIRE_FALSE(align_isomorphic(a, b, SymmetryGroup::E3).has_value());
      const auto fa = complete_invariant(a, q, 1e-6);
      const auto fb = complete_invariant(b, q, 1e-6);
      REQUIRE(fa.has_value());
      REQUIRE(fb.has_value());
      double diff = 0.0;
      for (std::size_t i = 0; i < fa->size(); ++i) diff += ((*fa)[i] - (*fb)[i]).norm();
      CHECK(diff > 1e-6);
    }
  }
  SUBCASE("center-symmetric clouds yield no invariant") {
    CHECK_FALSE(complete_invariant(equilateral_triangle(), q, 1e-6).has_value());
    CHECK_FALSE(
        complete_invariant(center_symmetric_refinement_asymmetric_cloud(), q, 1e-6).has_value());
  }
}
