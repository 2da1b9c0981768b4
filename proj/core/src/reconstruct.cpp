#include "geowl/reconstruct.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "geowl/geometry.hpp"
#include "geowl/refine.hpp"
#include "geowl/symmetry.hpp"

namespace geowl {

namespace {

constexpr double kAxisTol = 1e-9;   // off-axis radius below this sits on the anchor axis
constexpr double kSnapTol = 1e-7;   // |z| below this collapses to the seed plane
constexpr double kRefTol = 1e-6;    // |z| above this qualifies as a sign reference

struct Cylindrical {
  double x = 0.0;    // coordinate along the anchor axis
  double rho = 0.0;  // distance from the anchor axis
};

ReconstructionResult finish(std::vector<Vec3> coords, const TriangularEncoding& enc,
                            const Eigen::MatrixXd& d, SymmetryGroup group, double tol) {
  const int n = static_cast<int>(coords.size());
  const Vec3 a1(0.0, 0.0, 0.0);
  const Vec3 a2(enc.anchor_gap, 0.0, 0.0);
  double sq = 0.0;
  double worst = 0.0;
  std::int64_t terms = 0;
  for (int i = 0; i < n; ++i) {
    const double e1 = (coords[i] - a1).norm() - enc.per_node[i].first;
    const double e2 = (coords[i] - a2).norm() - enc.per_node[i].second;
    sq += e1 * e1 + e2 * e2;
    worst = std::max({worst, std::abs(e1), std::abs(e2)});
    terms += 2;
    for (int j = i + 1; j < n; ++j) {
      const double e = (coords[i] - coords[j]).norm() - d(i, j);
      sq += e * e;
      worst = std::max(worst, std::abs(e));
      ++terms;
    }
  }
  if (worst > tol) {
    throw InconsistentDistances("no placement reproduces the distance data within tolerance");
  }
  ReconstructionResult result;
  result.coords = std::move(coords);
  result.group = group;
  result.residual_rmsd = std::sqrt(sq / static_cast<double>(terms));
  return result;
}

ReconstructionResult reconstruct_impl(const TriangularEncoding& enc, const Eigen::MatrixXd& d,
                                      const OrientationSignFn* signs, double tol) {
  const int n = static_cast<int>(enc.per_node.size());
  if (d.rows() != n || d.cols() != n) {
    throw InconsistentDistances("distance matrix shape does not match the encoding");
  }
  const double g = enc.anchor_gap;
  const SymmetryGroup group = signs ? SymmetryGroup::SE3 : SymmetryGroup::E3;

  std::vector<Cylindrical> cyl(n);
  for (int i = 0; i < n; ++i) {
    const auto [d1, d2] = enc.per_node[i];
    const double x = (d1 * d1 - d2 * d2 + g * g) / (2.0 * g);
    double rho2 = d1 * d1 - x * x;
    if (rho2 < 0.0) {
      if (rho2 < -1e-9) throw InconsistentDistances("anchor distances violate the triangle bound");
      rho2 = 0.0;
    }
    cyl[i] = {x, std::sqrt(rho2)};
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (cyl[a].rho != cyl[b].rho) return cyl[a].rho > cyl[b].rho;
    if (cyl[a].x != cyl[b].x) return cyl[a].x < cyl[b].x;
    return a < b;
  });

  std::vector<Vec3> coords(n, Vec3::Zero());
  const int seed = order[0];
  if (cyl[seed].rho <= kAxisTol) {
    // Every node lies on the anchor axis.
    for (int i = 0; i < n; ++i) coords[i] = Vec3(cyl[i].x, 0.0, 0.0);
    return finish(std::move(coords), enc, d, group, tol);
  }
  coords[seed] = Vec3(cyl[seed].x, cyl[seed].rho, 0.0);

  // Angle around the anchor axis relative to the seed half-plane; the seed
  // distance pins |phi| and leaves the z-sign open.
  struct Pending {
    int node;
    double y;
    double zabs;
  };
  std::vector<Pending> off_plane;
  for (int oi = 1; oi < n; ++oi) {
    const int i = order[oi];
    if (cyl[i].rho <= kAxisTol) {
      coords[i] = Vec3(cyl[i].x, 0.0, 0.0);
      continue;
    }
    const double dx = cyl[seed].x - cyl[i].x;
    double cosphi = (dx * dx + cyl[seed].rho * cyl[seed].rho + cyl[i].rho * cyl[i].rho -
                     d(seed, i) * d(seed, i)) /
                    (2.0 * cyl[seed].rho * cyl[i].rho);
    if (cosphi > 1.0 + 1e-6 || cosphi < -1.0 - 1e-6) {
      throw InconsistentDistances("seed distance incompatible with anchor distances");
    }
    cosphi = std::clamp(cosphi, -1.0, 1.0);
    const double y = cyl[i].rho * cosphi;
    const double zabs = cyl[i].rho * std::sqrt(std::max(0.0, 1.0 - cosphi * cosphi));
    if (zabs <= kSnapTol) {
      coords[i] = Vec3(cyl[i].x, y, 0.0);
    } else {
      off_plane.push_back({i, y, zabs});
    }
  }

  std::sort(off_plane.begin(), off_plane.end(), [](const Pending& a, const Pending& b) {
    if (a.zabs != b.zabs) return a.zabs > b.zabs;
    return a.node < b.node;
  });

  std::vector<int> references;  // placed nodes trusted as z-sign witnesses
  std::size_t start = 0;
  if (!off_plane.empty()) {
    if (signs) {
      // Anchor the orientation on the first off-plane node with a usable
      // sign; in the reconstructed frame det[c2-c1, seed, node] carries
      // exactly the sign of that node's z coordinate.
      std::size_t chosen = off_plane.size();
      int sigma = 0;
      for (std::size_t k = 0; k < off_plane.size(); ++k) {
        sigma = (*signs)(seed, off_plane[k].node);
        if (sigma != 0) {
          chosen = k;
          break;
        }
      }
      if (chosen == off_plane.size()) {
        throw MissingOrientation("non-planar data but no usable orientation sign");
      }
      std::rotate(off_plane.begin(), off_plane.begin() + chosen, off_plane.begin() + chosen + 1);
      const Pending& f = off_plane[0];
      coords[f.node] = Vec3(cyl[f.node].x, f.y, sigma > 0 ? f.zabs : -f.zabs);
    } else {
      const Pending& f = off_plane[0];
      coords[f.node] = Vec3(cyl[f.node].x, f.y, f.zabs);
    }
    if (off_plane[0].zabs > kRefTol) references.push_back(off_plane[0].node);
    start = 1;
  }

  for (std::size_t k = start; k < off_plane.size(); ++k) {
    const Pending& p = off_plane[k];
    const Vec3 plus(cyl[p.node].x, p.y, p.zabs);
    const Vec3 minus(cyl[p.node].x, p.y, -p.zabs);
    double err_plus = 0.0, err_minus = 0.0;
    for (int u : references) {
      err_plus = std::max(err_plus, std::abs((plus - coords[u]).norm() - d(p.node, u)));
      err_minus = std::max(err_minus, std::abs((minus - coords[u]).norm() - d(p.node, u)));
    }
    coords[p.node] = err_plus <= err_minus ? plus : minus;
    if (p.zabs > kRefTol) references.push_back(p.node);
  }

  return finish(std::move(coords), enc, d, group, tol);
}

std::vector<Vec3> canonical_sorted(std::vector<Vec3> pts, const Quantizer& q) {
  std::sort(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
    const double ax = quantize(a.x(), q), bx = quantize(b.x(), q);
    if (ax != bx) return ax < bx;
    const double ay = quantize(a.y(), q), by = quantize(b.y(), q);
    if (ay != by) return ay < by;
    const double az = quantize(a.z(), q), bz = quantize(b.z(), q);
    if (az != bz) return az < bz;
    return false;
  });
  return pts;
}

bool lex_less(const std::vector<Vec3>& a, const std::vector<Vec3>& b, const Quantizer& q) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int c = 0; c < 3; ++c) {
      const double av = quantize(a[i][c], q);
      const double bv = quantize(b[i][c], q);
      if (av != bv) return av < bv;
    }
  }
  return false;
}

}  // namespace

TriangularEncoding triangular_encoding(const PointCloud& cloud, const Vec3& c1,
                                       const Vec3& c2) {
  const double gap = (c1 - c2).norm();
  if (gap <= 1e-9) throw CoincidentAnchors("anchors coincide");
  TriangularEncoding enc;
  enc.anchor_c1 = c1;
  enc.anchor_c2 = c2;
  enc.anchor_gap = gap;
  enc.per_node.reserve(cloud.coords.size());
  for (const auto& p : cloud.coords) {
    enc.per_node.emplace_back((p - c1).norm(), (p - c2).norm());
  }
  return enc;
}

ReconstructionResult reconstruct_e3(const TriangularEncoding& enc, const Eigen::MatrixXd& d,
                                    double tol) {
  return reconstruct_impl(enc, d, nullptr, tol);
}

OrientationSignFn orientation_signs_from_cloud(const PointCloud& cloud, const Vec3& c1,
                                               const Vec3& c2) {
  const Vec3 axis = c2 - c1;
  std::vector<Vec3> rel;
  rel.reserve(cloud.coords.size());
  for (const auto& p : cloud.coords) rel.push_back(p - c1);
  return [axis, rel](int j, int k) -> int {
    const double det = axis.cross(rel[j]).dot(rel[k]);
    if (std::abs(det) < 1e-9) return 0;
    return det > 0.0 ? 1 : -1;
  };
}

ReconstructionResult reconstruct_se3(const TriangularEncoding& enc, const Eigen::MatrixXd& d,
                                     const OrientationSignFn& signs, double tol) {
  return reconstruct_impl(enc, d, &signs, tol);
}

std::optional<std::vector<Vec3>> complete_invariant(const PointCloud& cloud,
                                                    const Quantizer& quantizer, double eps) {
  const Coloring coloring = c_encode(cloud, quantizer);
  if (a_symmetry_test(cloud, coloring, eps).first) return std::nullopt;

  const Vec3 c1 = centroid(cloud);

  // Classes ordered by their defining key (label, quantized center
  // distance); the order is permutation-invariant.
  struct ClassInfo {
    long long label = 0;
    bool labeled = false;
    double qdist = 0.0;
    Vec3 center = Vec3::Zero();
  };
  const auto classes = color_classes(coloring.colors);
  std::vector<ClassInfo> infos;
  infos.reserve(classes.size());
  for (const auto& cls : classes) {
    ClassInfo info;
    const int rep = cls.front();
    info.labeled = cloud.labeled();
    info.label = cloud.labeled() ? cloud.label(rep) : 0;
    info.qdist = quantize((cloud.coords[rep] - c1).norm(), quantizer);
    Vec3 sum = Vec3::Zero();
    for (int i : cls) sum += cloud.coords[i];
    info.center = sum / static_cast<double>(cls.size());
    infos.push_back(info);
  }
  std::sort(infos.begin(), infos.end(), [](const ClassInfo& a, const ClassInfo& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.qdist < b.qdist;
  });

  const ClassInfo* pick = nullptr;
  for (const auto& info : infos) {
    if ((info.center - c1).norm() > eps) {
      pick = &info;
      break;
    }
  }
  if (pick == nullptr) return std::nullopt;

  const TriangularEncoding enc = triangular_encoding(cloud, c1, pick->center);
  const Eigen::MatrixXd d = distance_matrix(cloud);
  ReconstructionResult rec = reconstruct_e3(enc, d);

  std::vector<Vec3> mirror = rec.coords;
  for (auto& p : mirror) p.z() = -p.z();
  std::vector<Vec3> a = canonical_sorted(std::move(rec.coords), quantizer);
  std::vector<Vec3> b = canonical_sorted(std::move(mirror), quantizer);
  return lex_less(b, a, quantizer) ? b : a;
}

}  // namespace geowl
