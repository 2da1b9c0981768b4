#include <doctest.h>

#include <cstdlib>
#include <map>

#include "geowl/coloring.hpp"
#include "geowl/refine.hpp"
#include "test_support.hpp"

using namespace geowl;
using namespace geowl::testing;

namespace {

// Partition of corpus indices by fingerprint digest under one model.
std::vector<ColorId> corpus_partition(const std::vector<PointCloud>& corpus, Model model,
                                      const RefineConfig& cfg) {
  std::map<Digest128, ColorId> ids;
  std::vector<ColorId> out;
  for (const auto& cloud : corpus) {
    const Fingerprint fp = fingerprint_of(cloud, model, cfg);
    out.push_back(ids.try_emplace(fp.digest, ids.size() + 1).first->second);
  }
  return out;
}

}  // namespace

TEST_CASE("cross-engine properties over the mixed corpus") {
  const std::vector<PointCloud> corpus = mixed_corpus(90, 200);
  const RefineConfig cfg;

  const auto by_d = corpus_partition(corpus, Model::D, cfg);
  const auto by_geongnn = corpus_partition(corpus, Model::GeoNGNN, cfg);
  const auto by_dimenet = corpus_partition(corpus, Model::DimeNetEdge, cfg);
  const auto by_twofwl = corpus_partition(corpus, Model::TwoFWLGeo, cfg);

  SUBCASE("whatever D distinguishes, GeoNGNN distinguishes") {
    CHECK(partition_refines(by_geongnn, by_d));
  }
  SUBCASE("DimeNet-style edges agree with GeoNGNN at complete settings") {
    CHECK(same_partition(by_dimenet, by_geongnn));
  }
  SUBCASE("2-FWL-style edges distinguish at least as much as DimeNet-style") {
    CHECK(partition_refines(by_twofwl, by_dimenet));
  }
  SUBCASE("2-FWL edge partition refines the DimeNet edge partition per cloud") {
    for (const auto& cloud : corpus) {
      if (cloud.size() > 8) continue;  // keep the quadratic engines quick
      const EdgeRefineResult dime = edge_refine_dimenet_result(cloud, cfg);
      const EdgeRefineResult two = twofwl_geo_result(cloud, cfg);
      CHECK(partition_refines(two.edge_colors, dime.edge_colors));
    }
  }
}

TEST_CASE("fingerprints are deterministic, also under threading") {
  const std::vector<PointCloud> corpus = mixed_corpus(91, 12);
  const RefineConfig cfg;
  for (const auto& cloud : corpus) {
    const Fingerprint once = geongnn_fingerprint(cloud, cfg);
    const Fingerprint again = geongnn_fingerprint(cloud, cfg);
    CHECK(once.digest == again.digest);

    setenv("GEOWL_THREADS", "1", 1);
    const Fingerprint serial = geongnn_fingerprint(cloud, cfg);
    setenv("GEOWL_THREADS", "4", 1);
    const Fingerprint threaded = geongnn_fingerprint(cloud, cfg);
    unsetenv("GEOWL_THREADS");
    CHECK(serial.digest == once.digest);
    CHECK(threaded.digest == once.digest);
  }
}

TEST_CASE("every model is invariant on isomorphic copies across the corpus") {
  Rng rng(92);
  const std::vector<PointCloud> corpus = mixed_corpus(93, 15);
  const RefineConfig cfg;
  for (Model model : {Model::C, Model::D, Model::GeoNGNN, Model::DimeNetEdge,
                      Model::TwoFWLGeo}) {
    for (const auto& cloud : corpus) {
      const Fingerprint base = fingerprint_of(cloud, model, cfg);
      const Fingerprint moved = fingerprint_of(isomorphic_copy(rng, cloud, true), model, cfg);
      CHECK(base.digest == moved.digest);
    }
  }
  // The SE(3) engine gets rotations without reflections.
  for (const auto& cloud : corpus) {
    const Fingerprint base = fingerprint_of(cloud, Model::GeoNGNNC, cfg);
    const Fingerprint moved =
        fingerprint_of(isomorphic_copy(rng, cloud, false), Model::GeoNGNNC, cfg);
    CHECK(base.digest == moved.digest);
  }
}
