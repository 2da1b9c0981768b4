#include "geowl/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <unordered_set>

#include "geowl/align.hpp"
#include "geowl/geometry.hpp"

namespace geowl {

namespace {

constexpr double kGolden = 1.6180339887498948482;

std::vector<Vec3> raw_vertices(PolyhedronKind kind) {
  std::vector<Vec3> v;
  switch (kind) {
    case PolyhedronKind::Tetrahedron:
      v = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
      break;
    case PolyhedronKind::Cube:
      for (int sx : {-1, 1})
        for (int sy : {-1, 1})
          for (int sz : {-1, 1}) v.push_back(Vec3(sx, sy, sz));
      break;
    case PolyhedronKind::Octahedron:
      v = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      break;
    case PolyhedronKind::Dodecahedron: {
      const double a = 1.0, b = 1.0 / kGolden, c = kGolden;
      for (int sx : {-1, 1})
        for (int sy : {-1, 1})
          for (int sz : {-1, 1}) v.push_back(Vec3(sx * a, sy * a, sz * a));
      for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
          v.push_back(Vec3(0, s1 * b, s2 * c));
          v.push_back(Vec3(s1 * b, s2 * c, 0));
          v.push_back(Vec3(s1 * c, 0, s2 * b));
        }
      break;
    }
    case PolyhedronKind::Icosahedron:
      for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
          v.push_back(Vec3(0, s1 * 1.0, s2 * kGolden));
          v.push_back(Vec3(s1 * 1.0, s2 * kGolden, 0));
          v.push_back(Vec3(s1 * kGolden, 0, s2 * 1.0));
        }
      break;
  }
  return v;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

std::uint32_t permute_mask(std::uint32_t mask, const std::vector<int>& perm) {
  std::uint32_t out = 0;
  for (int v = 0; v < static_cast<int>(perm.size()); ++v) {
    if (mask & (1u << v)) out |= 1u << perm[v];
  }
  return out;
}

std::uint32_t canonical_mask(std::uint32_t mask, const std::vector<std::vector<int>>& group) {
  std::uint32_t best = mask;
  for (const auto& perm : group) best = std::min(best, permute_mask(mask, perm));
  return best;
}

std::vector<int> mask_indices(std::uint32_t mask, int n) {
  std::vector<int> idx;
  for (int v = 0; v < n; ++v)
    if (mask & (1u << v)) idx.push_back(v);
  return idx;
}

PointCloud subset_cloud(const PointCloud& vertices, const std::vector<int>& idx) {
  PointCloud cloud;
  cloud.coords.reserve(idx.size());
  for (int v : idx) cloud.coords.push_back(vertices.coords[v]);
  return cloud;
}

}  // namespace

std::string polyhedron_name(PolyhedronKind kind) {
  switch (kind) {
    case PolyhedronKind::Tetrahedron: return "tetrahedron";
    case PolyhedronKind::Cube: return "cube";
    case PolyhedronKind::Octahedron: return "octahedron";
    case PolyhedronKind::Dodecahedron: return "dodecahedron";
    case PolyhedronKind::Icosahedron: return "icosahedron";
  }
  return "?";
}

std::optional<PolyhedronKind> polyhedron_from_name(const std::string& name) {
  for (PolyhedronKind k :
       {PolyhedronKind::Tetrahedron, PolyhedronKind::Cube, PolyhedronKind::Octahedron,
        PolyhedronKind::Dodecahedron, PolyhedronKind::Icosahedron}) {
    if (polyhedron_name(k) == name) return k;
  }
  return std::nullopt;
}

PointCloud polyhedron_vertices(PolyhedronKind kind, double scale) {
  if (!(scale > 0.0)) throw ConfigError("polyhedron scale must be positive");
  std::vector<Vec3> v = raw_vertices(kind);
  const double norm = v.front().norm();
  for (auto& p : v) p *= scale / norm;
  return PointCloud{std::move(v), std::nullopt};
}

std::vector<std::vector<int>> proper_isometry_permutations(const PointCloud& vertices) {
  const int n = vertices.size();
  const Eigen::MatrixXd d = distance_matrix(vertices);
  constexpr double tol = 1e-9;

  std::vector<std::vector<int>> result;
  std::vector<int> perm(n, -1);
  std::vector<char> used(n, 0);

  auto complete = [&]() {
    std::vector<Vec3> image(n);
    for (int i = 0; i < n; ++i) image[i] = vertices.coords[perm[i]];
    const SuperpositionResult s = superpose(vertices.coords, image, SymmetryGroup::E3);
    if (s.rmsd < tol && !s.improper) result.push_back(perm);
  };

  auto extend = [&](auto&& self, int depth) -> void {
    if (depth == n) {
      complete();
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      bool ok = true;
      for (int i = 0; i < depth; ++i) {
        if (std::abs(d(depth, i) - d(j, perm[i])) > tol) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      perm[depth] = j;
      used[j] = 1;
      self(self, depth + 1);
      used[j] = 0;
      perm[depth] = -1;
    }
  };
  extend(extend, 0);
  return result;
}

std::vector<std::vector<int>> rotation_group(PolyhedronKind kind) {
  return proper_isometry_permutations(polyhedron_vertices(kind, 1.0));
}

PointCloud combine_clouds(const PointCloud& outer, const PointCloud& inner, double ratio,
                          bool label_shells) {
  if (!(ratio > 0.0)) throw ConfigError("shell ratio must be positive");
  if (centroid(outer).norm() > 1e-9) throw NotCentered("outer cloud is not centered");
  if (centroid(inner).norm() > 1e-9) throw NotCentered("inner cloud is not centered");
  if (!label_shells && outer.labeled() != inner.labeled()) {
    throw InvalidCloud("cannot combine a labeled cloud with an unlabeled one");
  }
  PointCloud out;
  out.coords = outer.coords;
  for (const auto& p : inner.coords) out.coords.push_back(p * ratio);
  if (label_shells) {
    std::vector<int> labels(outer.size(), 0);
    labels.insert(labels.end(), inner.size(), 1);
    out.labels = std::move(labels);
  } else if (outer.labeled()) {
    std::vector<int> labels = *outer.labels;
    labels.insert(labels.end(), inner.labels->begin(), inner.labels->end());
    out.labels = std::move(labels);
  }
  return out;
}

CounterexamplePair verify_counterexample(CounterexamplePair pair,
                                         const std::vector<Model>& models,
                                         const RefineConfig& cfg) {
  pair.verified_noniso = !align_isomorphic(pair.p1, pair.p2, SymmetryGroup::E3).has_value();
  for (Model m : models) {
    pair.verified_blind[m] = distinguish(pair.p1, pair.p2, m, cfg) == Verdict::NotDistinguished;
  }
  return pair;
}

SearchResult search_blind_subsets(const PointCloud& vertices,
                                  const std::vector<std::vector<int>>& group, int subset_size,
                                  const RefineConfig& cfg, std::uint64_t budget,
                                  std::uint64_t seed, PairProvenance base_provenance) {
  cfg.validate();
  const int nv = vertices.size();
  if (nv > 32) throw TooLarge("subset search supports at most 32 base vertices");
  if (subset_size < 2 || subset_size > nv) {
    throw ConfigError("subset size must be in [2, vertex count]");
  }

  SearchResult result;
  std::vector<std::uint32_t> canonical;

  const std::uint64_t space = choose(nv, subset_size);
  if (space <= budget) {
    // Full enumeration in lexicographic order; a subset is kept iff it is
    // the minimum of its orbit under the group.
    std::vector<int> idx(subset_size);
    for (int i = 0; i < subset_size; ++i) idx[i] = i;
    while (true) {
      ++result.subsets_enumerated;
      std::uint32_t mask = 0;
      for (int v : idx) mask |= 1u << v;
      if (canonical_mask(mask, group) == mask) canonical.push_back(mask);
      int pos = subset_size - 1;
      while (pos >= 0 && idx[pos] == nv - subset_size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < subset_size; ++i) idx[i] = idx[i - 1] + 1;
    }
  } else {
    result.budget_exhausted = true;
    std::mt19937_64 rng(seed);
    std::unordered_set<std::uint32_t> seen;
    std::vector<int> pool(nv);
    for (std::uint64_t t = 0; t < budget; ++t) {
      ++result.subsets_enumerated;
      for (int i = 0; i < nv; ++i) pool[i] = i;
      std::uint32_t mask = 0;
      for (int i = 0; i < subset_size; ++i) {
        const int pick = i + static_cast<int>(rng() % static_cast<std::uint64_t>(nv - i));
        std::swap(pool[i], pool[pick]);
        mask |= 1u << pool[i];
      }
      const std::uint32_t canon = canonical_mask(mask, group);
      if (seen.insert(canon).second) canonical.push_back(canon);
    }
    std::sort(canonical.begin(), canonical.end());
  }

  result.candidates_tested = canonical.size();

  std::map<Digest128, std::vector<std::uint32_t>> buckets;
  for (std::uint32_t mask : canonical) {
    const PointCloud cloud = subset_cloud(vertices, mask_indices(mask, nv));
    const Fingerprint fp = fingerprint_of(cloud, Model::D, cfg);
    buckets[fp.digest].push_back(mask);
  }

  for (const auto& [digest, masks] : buckets) {
    if (masks.size() < 2) continue;
    for (std::size_t a = 0; a < masks.size(); ++a) {
      for (std::size_t b = a + 1; b < masks.size(); ++b) {
        const std::vector<int> idx1 = mask_indices(masks[a], nv);
        const std::vector<int> idx2 = mask_indices(masks[b], nv);
        const PointCloud c1 = subset_cloud(vertices, idx1);
        const PointCloud c2 = subset_cloud(vertices, idx2);
        try {
          if (align_isomorphic(c1, c2, SymmetryGroup::E3).has_value()) continue;
        } catch (const TooLarge&) {
          ++result.oracle_overflows;
          continue;
        }
        CounterexamplePair pair;
        pair.p1 = c1;
        pair.p2 = c2;
        pair.provenance = base_provenance;
        pair.provenance.subset1 = idx1;
        pair.provenance.subset2 = idx2;
        result.pairs.push_back(verify_counterexample(std::move(pair), {Model::D}, cfg));
      }
    }
  }

  std::sort(result.pairs.begin(), result.pairs.end(),
            [](const CounterexamplePair& x, const CounterexamplePair& y) {
              if (x.provenance.subset1 != y.provenance.subset1)
                return x.provenance.subset1 < y.provenance.subset1;
              return x.provenance.subset2 < y.provenance.subset2;
            });
  return result;
}

SearchResult search_disgnn_blind_pairs(PolyhedronKind kind, int subset_size,
                                       const RefineConfig& cfg, std::uint64_t budget,
                                       std::uint64_t seed) {
  const PointCloud vertices = polyhedron_vertices(kind, 1.0);
  PairProvenance prov;
  prov.source = "search";
  prov.kind = polyhedron_name(kind);
  prov.scale = 1.0;
  return search_blind_subsets(vertices, rotation_group(kind), subset_size, cfg, budget, seed,
                              prov);
}

std::string augment_mode_name(AugmentMode mode) {
  switch (mode) {
    case AugmentMode::Origin: return "origin";
    case AugmentMode::Complementary: return "complementary";
    case AugmentMode::All: return "all";
  }
  return "?";
}

AugmentOutcome augment_combinatorial(const CounterexamplePair& base, AugmentMode mode,
                                     int copies, const RefineConfig& cfg, double shell_ratio) {
  if (copies < 2) throw ConfigError("augmentation needs at least 2 copies");
  if (!(shell_ratio > 0.0) || shell_ratio >= 1.0) {
    throw ConfigError("shell ratio must be in (0, 1)");
  }
  if (!base.valid()) return {std::nullopt, "base pair lacks verification certificates"};
  const auto kind = polyhedron_from_name(base.provenance.kind);
  if (!kind || base.provenance.subset1.empty() || base.provenance.subset2.empty()) {
    return {std::nullopt, "base pair provenance does not name a polyhedron selection"};
  }

  const PointCloud vertices = polyhedron_vertices(*kind, base.provenance.scale);
  const int nv = vertices.size();
  const auto complement = [&](const std::vector<int>& sel) {
    std::vector<char> in(nv, 0);
    for (int v : sel) in[v] = 1;
    std::vector<int> out;
    for (int v = 0; v < nv; ++v)
      if (!in[v]) out.push_back(v);
    return out;
  };
  std::vector<int> all(nv);
  for (int v = 0; v < nv; ++v) all[v] = v;

  const auto build = [&](const std::vector<int>& sel) {
    PointCloud cloud;
    double factor = 1.0;
    for (int shell = 0; shell < copies; ++shell) {
      const std::vector<int>* use = &sel;
      std::vector<int> derived;
      if (shell > 0) {
        switch (mode) {
          case AugmentMode::Origin: break;
          case AugmentMode::Complementary:
            derived = complement(sel);
            use = &derived;
            break;
          case AugmentMode::All:
            use = &all;
            break;
        }
      }
      for (int v : *use) cloud.coords.push_back(vertices.coords[v] * factor);
      factor *= shell_ratio;
    }
    return cloud;
  };

  CounterexamplePair out;
  out.p1 = build(base.provenance.subset1);
  out.p2 = build(base.provenance.subset2);
  out.provenance = base.provenance;
  out.provenance.source = "augment";
  out.provenance.augmentation =
      augment_mode_name(mode) + " x" + std::to_string(copies);
  out.provenance.shell_ratio = shell_ratio;
  out.verified_noniso = false;
  out.verified_blind.clear();

  out = verify_counterexample(std::move(out), {Model::D}, cfg);
  if (!out.verified_noniso) {
    return {std::nullopt, "augmented pair is isomorphic"};
  }
  if (!out.verified_blind[Model::D]) {
    return {std::nullopt, "augmented pair is not blind to distance refinement"};
  }
  return {std::move(out), ""};
}

}  // namespace geowl
