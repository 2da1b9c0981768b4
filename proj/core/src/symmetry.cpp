#include "geowl/symmetry.hpp"

#include <algorithm>
#include <cmath>

#include "geowl/geometry.hpp"
#include "geowl/parallel.hpp"
#include "geowl/refine.hpp"

namespace geowl {

MassFunction MassFunction::uniform(const Coloring& coloring) {
  MassFunction m;
  for (ColorId c : coloring.colors) m.weights[c] = 1.0;
  return m;
}

MassFunction MassFunction::indicator(ColorId color) {
  MassFunction m;
  m.weights[color] = 1.0;
  return m;
}

std::pair<bool, double> a_symmetry_test(const PointCloud& cloud, const Coloring& coloring,
                                        double eps) {
  const auto classes = color_classes(coloring.colors);
  std::vector<Vec3> centers;
  centers.reserve(classes.size());
  for (const auto& cls : classes) {
    Vec3 c = Vec3::Zero();
    for (int i : cls) c += cloud.coords[i];
    centers.push_back(c / static_cast<double>(cls.size()));
  }
  Vec3 mean = Vec3::Zero();
  for (const auto& c : centers) mean += c;
  mean /= static_cast<double>(centers.size());
  double deviation = 0.0;
  for (const auto& c : centers) deviation = std::max(deviation, (c - mean).norm());
  return {deviation <= eps, deviation};
}

SymmetryReport classify_symmetry(const PointCloud& cloud, const Quantizer& quantizer,
                                 double eps) {
  RefineConfig cfg;
  cfg.quantizer = quantizer;

  const Coloring c_coloring = c_encode(cloud, quantizer);
  const auto [c_sym, c_dev] = a_symmetry_test(cloud, c_coloring, eps);

  const DisgnnResult d = disgnn_refine(cloud, disgnn_default_init(cloud), cfg);
  const auto [d_sym, d_dev] = a_symmetry_test(cloud, d.stable, eps);

  SymmetryReport report;
  report.c_symmetric = c_sym;
  report.d_symmetric = d_sym;
  report.k_classes_c = static_cast<int>(color_classes(c_coloring.colors).size());
  report.k_classes_d = static_cast<int>(color_classes(d.stable.colors).size());
  report.max_center_deviation = std::max(c_dev, d_dev);
  report.eps = eps;
  report.quantizer = quantizer;
  return report;
}

std::vector<double> node_center_distance(const PointCloud& cloud, const Coloring& coloring,
                                         const MassFunction& mass) {
  const int n = cloud.size();
  double total = 0.0;
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) {
    m[i] = mass(coloring.colors[i]);
    total += m[i];
  }
  if (total == 0.0) throw ZeroMass("mass function sums to zero over the coloring");

  const Eigen::MatrixXd d = distance_matrix(cloud);
  std::vector<double> profile(n, 0.0);  // f(m,i) = sum_j m_j d_ij^2
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) profile[i] += m[j] * d(i, j) * d(i, j);
  }
  double weighted = 0.0;  // sum_j m_j f(m,j)
  for (int j = 0; j < n; ++j) weighted += m[j] * profile[j];

  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double radicand = (profile[i] - weighted / (2.0 * total)) / total;
    if (radicand < 0.0) {
      if (radicand < -1e-12) {
        throw NegativeRadicand("node-center radicand below clamp band");
      }
      radicand = 0.0;
    }
    out[i] = std::sqrt(radicand);
  }
  return out;
}

double center_center_distance(const PointCloud& cloud, const Coloring& coloring,
                              const MassFunction& m1, const MassFunction& m2) {
  const int n = cloud.size();
  const std::vector<double> d1 = node_center_distance(cloud, coloring, m1);
  const std::vector<double> d2 = node_center_distance(cloud, coloring, m2);
  double total1 = 0.0;
  for (int i = 0; i < n; ++i) total1 += m1(coloring.colors[i]);
  // sum_i m1_i (|p_i - c1|^2 - |p_i - c2|^2) / M1  ==  -|c1 - c2|^2
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    value += m1(coloring.colors[i]) * (d1[i] * d1[i] - d2[i] * d2[i]);
  }
  double radicand = -value / total1;
  if (radicand < 0.0) {
    if (radicand < -1e-12) throw NegativeRadicand("center-center radicand below clamp band");
    radicand = 0.0;
  }
  return std::sqrt(radicand);
}

bool count_centers_indicator(const PointCloud& cloud, const Coloring& coloring, double eps) {
  return a_symmetry_test(cloud, coloring, eps).first;
}

ScanResult symmetry_scan(const std::vector<PointCloud>& dataset, const Quantizer& quantizer,
                         const std::vector<double>& eps_grid) {
  struct Deviations {
    bool skipped = false;
    double c = 0.0;
    double d = 0.0;
  };
  std::vector<Deviations> devs(dataset.size());
  parallel_for(static_cast<int>(dataset.size()), [&](int idx) {
    PointCloud scaled;
    try {
      scaled = rescale_unit(dataset[idx]);
    } catch (const DegenerateCloud&) {
      devs[idx].skipped = true;
      return;
    }
    RefineConfig cfg;
    cfg.quantizer = quantizer;
    const Coloring cc = c_encode(scaled, quantizer);
    devs[idx].c = a_symmetry_test(scaled, cc, 0.0).second;
    const DisgnnResult d = disgnn_refine(scaled, disgnn_default_init(scaled), cfg);
    devs[idx].d = a_symmetry_test(scaled, d.stable, 0.0).second;
  });

  ScanResult result;
  for (const auto& dv : devs) {
    if (dv.skipped) {
      ++result.skipped_degenerate;
    } else {
      ++result.counted;
    }
  }
  for (double eps : eps_grid) {
    int nc = 0, nd = 0;
    for (const auto& dv : devs) {
      if (dv.skipped) continue;
      if (dv.c <= eps) ++nc;
      if (dv.d <= eps) ++nd;
    }
    ScanRow row;
    row.eps = eps;
    row.proportion_c = result.counted > 0 ? static_cast<double>(nc) / result.counted : 0.0;
    row.proportion_d = result.counted > 0 ? static_cast<double>(nd) / result.counted : 0.0;
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace geowl
