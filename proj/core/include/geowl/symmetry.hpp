#pragma once

#include <unordered_map>
#include <vector>

#include "geowl/coloring.hpp"
#include "geowl/point_cloud.hpp"
#include "geowl/quantize.hpp"

namespace geowl {

/// Mass assignment over color ids. Colors without an entry get mass 0,
/// so class indicators are just single-entry maps.
struct MassFunction {
  std::unordered_map<ColorId, double> weights;

  double operator()(ColorId color) const {
    const auto it = weights.find(color);
    return it == weights.end() ? 0.0 : it->second;
  }

  static MassFunction uniform(const Coloring& coloring);
  static MassFunction indicator(ColorId color);
};

struct SymmetryReport {
  bool c_symmetric = false;
  bool d_symmetric = false;
  int k_classes_c = 0;
  int k_classes_d = 0;
  double max_center_deviation = 0.0;  // larger of the two tests' deviations
  double eps = 0.0;
  Quantizer quantizer{9};
};

/// Class-centroid coincidence test: partitions nodes by color, computes
/// each class centroid, and reports whether all of them lie within eps of
/// the mean of class centroids. The measured deviation is returned either
/// way.
std::pair<bool, double> a_symmetry_test(const PointCloud& cloud, const Coloring& coloring,
                                        double eps);

/// Runs the coincidence test on the center-distance encoding and on the
/// stable distance-refinement coloring (seeded from labels when present,
/// uniform otherwise).
SymmetryReport classify_symmetry(const PointCloud& cloud, const Quantizer& quantizer,
                                 double eps);

/// Distance from every node to the mass-weighted center c^m, computed
/// from the weighted distance profile f(m,i) = sum_j m(color_j) d_ij^2
/// without ever forming c^m itself. Tiny negative radicands (>= -1e-12)
/// clamp to zero; anything below that throws NegativeRadicand.
std::vector<double> node_center_distance(const PointCloud& cloud, const Coloring& coloring,
                                         const MassFunction& mass);

/// Distance between the centers of two mass functions, evaluated through
/// the weighted-average identity over node_center_distance outputs.
double center_center_distance(const PointCloud& cloud, const Coloring& coloring,
                              const MassFunction& m1, const MassFunction& m2);

/// Indicator of a singleton center set under the coloring.
bool count_centers_indicator(const PointCloud& cloud, const Coloring& coloring, double eps);

struct ScanRow {
  double eps = 0.0;
  double proportion_c = 0.0;
  double proportion_d = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  int counted = 0;
  int skipped_degenerate = 0;
};

/// Symmetry proportions over a dataset for each tolerance in eps_grid.
/// Every cloud is unit-rescaled before testing; degenerate clouds are
/// skipped and counted separately. Proportions are nondecreasing in eps.
ScanResult symmetry_scan(const std::vector<PointCloud>& dataset, const Quantizer& quantizer,
                         const std::vector<double>& eps_grid);

}  // namespace geowl
