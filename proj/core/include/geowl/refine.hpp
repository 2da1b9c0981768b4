#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "geowl/coloring.hpp"
#include "geowl/point_cloud.hpp"
#include "geowl/quantize.hpp"

namespace geowl {

/// Refinement engines. Fingerprint equality under a model is the
/// "model cannot distinguish" relation.
///
///   C           distance-to-center node encoding
///   D           distance message passing refined to a stable partition
///   GeoNGNN     nested refinement with node marking (inner/outer stages)
///   GeoNGNNC    GeoNGNN with orientation-signed distances (SE(3)-sensitive)
///   DimeNetEdge directional edge refinement, aggregates (h_ki, d_kj)
///   TwoFWLGeo   2-FWL-style edge refinement, aggregates (h_ik, h_kj)
enum class Model { C, D, GeoNGNN, GeoNGNNC, DimeNetEdge, TwoFWLGeo };

std::string model_name(Model model);
std::optional<Model> model_from_name(const std::string& name);

constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

struct RefineConfig {
  int n_in = 5;                      // inner iterations (GeoNGNN)
  int n_out = 1;                     // outer iterations (GeoNGNN)
  double r_sub = kInfiniteRadius;    // subgraph radius
  double r_cutoff = kInfiniteRadius; // interaction cutoff
  int max_iters = 0;                 // stabilization cap; 0 = 2n+4 (nodes), 2n+6 (edges)
  Quantizer quantizer{9};

  void validate() const;
};

/// Canonical digest of a cloud under a model, with run metadata. The
/// digest is a deterministic function of (model, quantizer, cloud up to
/// permutation and up to the model's symmetry group).
struct Fingerprint {
  Digest128 digest;
  Model model = Model::D;
  int rounds_to_stable = 0;
  std::vector<int> class_histogram;
  Quantizer quantizer{9};

  friend bool operator==(const Fingerprint& a, const Fingerprint& b) {
    return a.model == b.model && a.digest == b.digest;
  }
};

/// Distance-to-center encoding: the color of node i is the canonical id
/// of (label_i, quantized distance from p_i to the centroid).
Coloring c_encode(const PointCloud& cloud, const Quantizer& quantizer);

/// Initial coloring for distance refinement: node labels when present,
/// uniform otherwise.
Coloring disgnn_default_init(const PointCloud& cloud);

struct DisgnnResult {
  Coloring stable;
  Fingerprint fingerprint;
  std::vector<Coloring> history;  // round 0 = init, last = stable round
};

/// Iterates color_i <- (color_i, multiset of (color_j, quantized d_ij)
/// over neighbors) until the induced partition stops refining. Throws
/// NoStabilization if the iteration cap is hit first.
DisgnnResult disgnn_refine(const PointCloud& cloud, const Coloring& init,
                           const RefineConfig& cfg);

/// Nested refinement: per-node marked sub-cloud runs n_in inner rounds,
/// pools to a subgraph digest; the outer stage refines subgraph digests
/// for n_out rounds over the whole cloud. Defaults (n_in=5, infinite
/// radii) are the complete configuration.
Fingerprint geongnn_fingerprint(const PointCloud& cloud, const RefineConfig& cfg);

/// GeoNGNN with each aggregated pair carrying the sign of the triple
/// product ((p_i - c) x (p_j - c)) . (p_k - c); invariant under SE(3) and
/// permutation, sensitive to reflection.
Fingerprint geongnn_c_fingerprint(const PointCloud& cloud, const RefineConfig& cfg);

struct EdgeRefineResult {
  Fingerprint fingerprint;
  std::vector<ColorId> edge_colors;  // n*n run-local ids, row-major, final round
  int rounds = 0;
};

/// Directional edge refinement with full edge initialization:
/// h_ij <- (h_ij, multiset of (h_ki, quantized d_kj) over all k).
EdgeRefineResult edge_refine_dimenet_result(const PointCloud& cloud, const RefineConfig& cfg);
Fingerprint edge_refine_dimenet(const PointCloud& cloud, const RefineConfig& cfg);

/// 2-FWL-style edge refinement: h_ij <- (h_ij, multiset of (h_ik, h_kj)).
EdgeRefineResult twofwl_geo_result(const PointCloud& cloud, const RefineConfig& cfg);
Fingerprint twofwl_geo_fingerprint(const PointCloud& cloud, const RefineConfig& cfg);

Fingerprint fingerprint_of(const PointCloud& cloud, Model model, const RefineConfig& cfg);

enum class Verdict { Distinguished, NotDistinguished };

/// Distinguished iff the node counts differ or the model fingerprints do.
Verdict distinguish(const PointCloud& a, const PointCloud& b, Model model,
                    const RefineConfig& cfg);

}  // namespace geowl
