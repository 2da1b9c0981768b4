#include <doctest.h>

#include "geowl/io.hpp"
#include "test_support.hpp"

using namespace geowl;
using namespace geowl::testing;

TEST_CASE("xyz parsing") {
  SUBCASE("single frame") {
    const auto clouds = parse_xyz("2\n\nH 0 0 0\nH 3 4 0\n");
    REQUIRE(clouds.size() == 1);
    CHECK(clouds[0].size() == 2);
    CHECK(distance_matrix(clouds[0])(0, 1) == doctest::Approx(5.0));
    REQUIRE(clouds[0].labeled());
    CHECK(clouds[0].label(0) == 0);
    CHECK(clouds[0].label(1) == 0);
  }
  SUBCASE("empty input yields an empty list") { CHECK(parse_xyz("").empty()); }
  SUBCASE("multiple frames and CRLF line endings") {
    const auto clouds =
        parse_xyz("2\r\ncomment\r\nC 0 0 0\r\nH 1 0 0\r\n3\r\n\r\nH 0 0 0\r\nH 0 1 0\r\nO 0 0 1\r\n");
    REQUIRE(clouds.size() == 2);
    CHECK(clouds[0].size() == 2);
    CHECK(clouds[1].size() == 3);
    // Sorted alphabet across the file: C=0, H=1, O=2.
    CHECK(clouds[0].label(0) == 0);
    CHECK(clouds[0].label(1) == 1);
    CHECK(clouds[1].label(2) == 2);
  }
  SUBCASE("count mismatch reports the offending line") {
    try {
      parse_xyz("3\n\nH 0 0 0\nH 1 0 0\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 5);
    }
  }
  SUBCASE("malformed body line") {
    try {
      parse_xyz("2\n\nH 0 0 0\nH 1 zero 0\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);
    }
  }
  SUBCASE("frames below two nodes are rejected") {
    CHECK_THROWS_AS(parse_xyz("1\n\nH 0 0 0\n"), ParseError);
  }
  SUBCASE("shared alphabet across texts") {
    const auto groups = parse_xyz_shared(
        {"2\n\nH 0 0 0\nH 1 0 0\n", "2\n\nC 0 0 0\nH 1 0 0\n"});
    REQUIRE(groups.size() == 2);
    CHECK(groups[0][0].label(0) == 1);  // H
    CHECK(groups[1][0].label(0) == 0);  // C
    CHECK(groups[1][0].label(1) == 1);  // H
  }
}

TEST_CASE("json cloud round trip is lossless") {
  Rng rng(600);
  for (int trial = 0; trial < 25; ++trial) {
    const PointCloud cloud = gaussian_cloud(rng, 2 + rng.below(7), trial % 2 ? 3 : 0);
    const PointCloud back = cloud_from_json_text(cloud_to_json_text(cloud));
    REQUIRE(back.size() == cloud.size());
    for (int i = 0; i < cloud.size(); ++i) {
      CHECK(back.coords[i].x() == cloud.coords[i].x());
      CHECK(back.coords[i].y() == cloud.coords[i].y());
      CHECK(back.coords[i].z() == cloud.coords[i].z());
    }
    CHECK(back.labels == cloud.labels);
  }
}

TEST_CASE("pair round trip keeps certificates") {
  Rng rng(601);
  CounterexamplePair pair;
  pair.p1 = gaussian_cloud(rng, 5);
  pair.p2 = gaussian_cloud(rng, 5);
  pair.provenance.source = "search";
  pair.provenance.kind = "dodecahedron";
  pair.provenance.subset1 = {0, 1, 2, 3, 4};
  pair.provenance.subset2 = {0, 1, 2, 3, 5};
  pair.verified_noniso = true;
  pair.verified_blind[Model::D] = true;
  pair.verified_blind[Model::GeoNGNN] = false;

  const CounterexamplePair back = pair_from_json_text(pair_to_json_text(pair, 2));
  CHECK(back.provenance.kind == "dodecahedron");
  CHECK(back.provenance.subset1 == pair.provenance.subset1);
  CHECK(back.verified_noniso);
  CHECK(back.verified_blind.at(Model::D));
  CHECK_FALSE(back.verified_blind.at(Model::GeoNGNN));
  CHECK(back.p1.coords[3].x() == pair.p1.coords[3].x());

  CHECK(json_text_is_pair(pair_to_json_text(pair)));
  CHECK_FALSE(json_text_is_pair(cloud_to_json_text(pair.p1)));

  const auto clouds = clouds_from_json_text(pair_to_json_text(pair));
  CHECK(clouds.size() == 2);
}
