#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geowl/point_cloud.hpp"
#include "geowl/refine.hpp"

namespace geowl {

enum class PolyhedronKind { Tetrahedron, Cube, Octahedron, Dodecahedron, Icosahedron };

std::string polyhedron_name(PolyhedronKind kind);
std::optional<PolyhedronKind> polyhedron_from_name(const std::string& name);

/// Centered vertex coordinates, scaled so the circumradius equals `scale`.
PointCloud polyhedron_vertices(PolyhedronKind kind, double scale);

/// Vertex permutations induced by the polyhedron's rotation group
/// (proper isometries only).
std::vector<std::vector<int>> rotation_group(PolyhedronKind kind);

/// All vertex permutations of `vertices` realized by a proper rotation
/// about the centroid.
std::vector<std::vector<int>> proper_isometry_permutations(const PointCloud& vertices);

/// Concatenates `outer` with `inner` scaled by `ratio`. Both inputs must
/// be centered at the origin (within 1e-9). With label_shells, nodes get
/// shell labels 0 / 1 instead of any input labels.
PointCloud combine_clouds(const PointCloud& outer, const PointCloud& inner, double ratio,
                          bool label_shells = false);

struct PairProvenance {
  std::string source;       // "search" or "augment"
  std::string kind;         // base polyhedron name
  double scale = 1.0;
  std::vector<int> subset1;
  std::vector<int> subset2;
  std::string augmentation;  // empty for plain search results
  double shell_ratio = 0.5;
};

/// Two clouds plus machine-checked certificates: verified_noniso means
/// the isomorphism oracle found no E(3) alignment, verified_blind[m]
/// means model m's fingerprints are equal. A valid counterexample has
/// verified_noniso and verified_blind[D].
struct CounterexamplePair {
  PointCloud p1;
  PointCloud p2;
  PairProvenance provenance;
  bool verified_noniso = false;
  std::map<Model, bool> verified_blind;

  bool valid() const {
    const auto it = verified_blind.find(Model::D);
    return verified_noniso && it != verified_blind.end() && it->second;
  }
};

struct SearchResult {
  std::vector<CounterexamplePair> pairs;
  bool budget_exhausted = false;
  std::uint64_t subsets_enumerated = 0;
  std::uint64_t candidates_tested = 0;  // after orbit deduplication
  std::uint64_t oracle_overflows = 0;   // candidate pairs dropped on TooLarge
};

/// Enumerates vertex subsets of the polyhedron (up to `budget` subsets,
/// deduplicated by the rotation group acting on subsets), groups them by
/// distance-refinement fingerprint, and pairs group members the oracle
/// reports non-isomorphic. When the subset space exceeds the budget, a
/// seeded random sample is drawn instead and the result is flagged
/// budget_exhausted.
SearchResult search_disgnn_blind_pairs(PolyhedronKind kind, int subset_size,
                                       const RefineConfig& cfg, std::uint64_t budget,
                                       std::uint64_t seed = 0);

/// Same search over an arbitrary base vertex set with an explicit
/// symmetry group (used for compound shells).
SearchResult search_blind_subsets(const PointCloud& vertices,
                                  const std::vector<std::vector<int>>& group, int subset_size,
                                  const RefineConfig& cfg, std::uint64_t budget,
                                  std::uint64_t seed, PairProvenance base_provenance);

enum class AugmentMode { Origin, Complementary, All };

std::string augment_mode_name(AugmentMode mode);

struct AugmentOutcome {
  std::optional<CounterexamplePair> pair;
  std::string failure;  // verification diagnostic when pair is empty
};

/// Builds a combinatorial pair by stacking `copies` concentric shells:
/// shell 0 carries each side's base selection, later shells carry the
/// mode-derived selection (Origin: the base selection again;
/// Complementary: its complement; All: the full vertex set) at radii in
/// geometric progression. The result is re-verified before it is
/// returned; failures come back as a diagnostic instead of a pair.
AugmentOutcome augment_combinatorial(const CounterexamplePair& base, AugmentMode mode,
                                     int copies, const RefineConfig& cfg,
                                     double shell_ratio = 0.5);

/// Fills both certificate fields: the oracle verdict and per-model
/// blindness flags. Idempotent.
CounterexamplePair verify_counterexample(CounterexamplePair pair,
                                         const std::vector<Model>& models,
                                         const RefineConfig& cfg);

}  // namespace geowl
