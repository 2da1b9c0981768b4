#include "geowl/align.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "geowl/geometry.hpp"

namespace geowl {

namespace {

struct Frame {
  std::vector<Vec3> pts;   // centered coordinates
  std::vector<double> r;   // distance to centroid
};

Frame centered(const PointCloud& cloud) {
  Frame f;
  const Vec3 c = centroid(cloud);
  f.pts.reserve(cloud.coords.size());
  for (const auto& p : cloud.coords) f.pts.push_back(p - c);
  f.r.reserve(f.pts.size());
  for (const auto& p : f.pts) f.r.push_back(p.norm());
  return f;
}

// Optimal orthogonal map R minimizing sum |R x_i - y_i|^2. For SE(3) the
// determinant is forced to +1.
struct Procrustes {
  Eigen::Matrix3d rotation;
  double rmsd;
  bool improper;
};

Procrustes solve_procrustes(const std::vector<Vec3>& x, const std::vector<Vec3>& y,
                            SymmetryGroup group) {
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < x.size(); ++i) cov += y[i] * x[i].transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (group == SymmetryGroup::SE3 && r.determinant() < 0.0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sq += (r * x[i] - y[i]).squaredNorm();
  return {r, std::sqrt(sq / static_cast<double>(x.size())), r.determinant() < 0.0};
}

struct Search {
  const Frame& a;
  const Frame& b;
  const PointCloud& ca;
  const PointCloud& cb;
  SymmetryGroup group;
  double tol;
  double pair_tol;
  std::uint64_t budget;
  std::uint64_t steps = 0;

  int n = 0;
  std::vector<int> order{};                 // order in which cloud-a nodes are assigned
  std::vector<std::vector<int>> cand{};     // candidate b-nodes per a-node
  std::vector<int> assign{};                // a-node -> b-node
  std::vector<char> used{};                 // b-node taken
  std::optional<AlignmentResult> found{};

  bool labels_match(int i, int j) const {
    const bool la = ca.labeled(), lb = cb.labeled();
    if (la != lb) return false;
    return !la || ca.label(i) == cb.label(j);
  }

  bool run() {
    n = static_cast<int>(a.pts.size());
    cand.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (std::abs(a.r[i] - b.r[j]) <= pair_tol && labels_match(i, j)) cand[i].push_back(j);
      }
      if (cand[i].empty()) return false;
    }
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      if (cand[i].size() != cand[j].size()) return cand[i].size() < cand[j].size();
      return a.r[i] > a.r[j];
    });
    assign.assign(n, -1);
    used.assign(n, 0);
    extend(0);
    return found.has_value();
  }

  void extend(int depth) {
    if (found) return;
    if (++steps > budget) throw TooLarge("isomorphism search exceeded its step budget");
    if (depth == n) {
      finish();
      return;
    }
    const int i = order[depth];
    for (int j : cand[i]) {
      if (used[j]) continue;
      bool ok = true;
      for (int d = 0; d < depth; ++d) {
        const int i2 = order[d];
        const double d1 = (a.pts[i] - a.pts[i2]).norm();
        const double d2 = (b.pts[j] - b.pts[assign[i2]]).norm();
        if (std::abs(d1 - d2) > pair_tol) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      assign[i] = j;
      used[j] = 1;
      extend(depth + 1);
      used[j] = 0;
      assign[i] = -1;
      if (found) return;
    }
  }

  void finish() {
    std::vector<Vec3> y(n);
    for (int i = 0; i < n; ++i) y[i] = b.pts[assign[i]];
    const Procrustes p = solve_procrustes(a.pts, y, group);
    if (p.rmsd <= tol) {
      AlignmentResult res;
      res.rmsd = p.rmsd;
      res.permutation.assign(assign.begin(), assign.end());
      res.used_reflection = group == SymmetryGroup::E3 && p.improper;
      found = res;
    }
  }
};

}  // namespace

SuperpositionResult superpose(const std::vector<Vec3>& x, const std::vector<Vec3>& y,
                              SymmetryGroup group) {
  Vec3 cx = Vec3::Zero(), cy = Vec3::Zero();
  for (const auto& p : x) cx += p;
  for (const auto& p : y) cy += p;
  cx /= static_cast<double>(x.size());
  cy /= static_cast<double>(y.size());
  std::vector<Vec3> xs(x.size()), ys(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) xs[i] = x[i] - cx;
  for (std::size_t i = 0; i < y.size(); ++i) ys[i] = y[i] - cy;
  const Procrustes p = solve_procrustes(xs, ys, group);
  return {p.rotation, p.rmsd, p.improper};
}

std::optional<AlignmentResult> align_isomorphic(const PointCloud& a, const PointCloud& b,
                                                SymmetryGroup group, double tol,
                                                std::uint64_t budget) {
  if (a.size() != b.size()) return std::nullopt;
  if (a.labeled() != b.labeled()) return std::nullopt;
  if (a.labeled()) {
    std::map<int, int> ha, hb;
    for (int i = 0; i < a.size(); ++i) ++ha[a.label(i)];
    for (int j = 0; j < b.size(); ++j) ++hb[b.label(j)];
    if (ha != hb) return std::nullopt;
  }

  const Frame fa = centered(a);
  const Frame fb = centered(b);
  // An alignment with rmsd <= tol perturbs any single pairwise distance by
  // at most 2*tol*sqrt(n); the factor below keeps pruning sound for n <= 12
  // while still rejecting almost all junk assignments immediately.
  const double pair_tol = std::max(20.0 * tol, 1e-9);
  Search search{.a = fa,
                .b = fb,
                .ca = a,
                .cb = b,
                .group = group,
                .tol = tol,
                .pair_tol = pair_tol,
                .budget = budget};
  if (search.run()) return search.found;
  return std::nullopt;
}

}  // namespace geowl
