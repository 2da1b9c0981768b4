#include "geowl/refine.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

#include "geowl/geometry.hpp"
#include "geowl/parallel.hpp"

namespace geowl {

namespace {

enum Tag : std::uint8_t {
  kTagNodeInit = 1,
  kTagCEncode = 2,
  kTagNodeRefine = 3,
  kTagInnerInit = 4,
  kTagInnerRefine = 5,
  kTagInnerRefineChiral = 6,
  kTagSubgraphPool = 7,
  kTagOuterInit = 8,
  kTagEdgeInit = 9,
  kTagEdgeDimeNet = 10,
  kTagEdgeTwoFWL = 11,
  kTagEdgePool = 12,
  kTagFingerprint = 13,
};

void put_label(ByteBuffer& buf, const PointCloud& cloud, int i) {
  if (cloud.labeled()) {
    buf.put_u8(1);
    buf.put_i64(cloud.label(i));
  } else {
    buf.put_u8(0);
  }
}

Digest128 multiset_digest(std::uint8_t tag, std::vector<Digest128> elems) {
  std::sort(elems.begin(), elems.end());
  ByteBuffer buf;
  buf.put_u8(tag);
  buf.put_u64(elems.size());
  for (const auto& d : elems) buf.put_digest(d);
  return buf.digest();
}

Digest128 fingerprint_digest(Model model, const Quantizer& q, int n,
                             std::vector<Digest128> elems) {
  std::sort(elems.begin(), elems.end());
  ByteBuffer buf;
  buf.put_u8(kTagFingerprint);
  buf.put_u8(static_cast<std::uint8_t>(model));
  buf.put_u8(static_cast<std::uint8_t>(q.decimals));
  buf.put_u64(static_cast<std::uint64_t>(n));
  buf.put_u64(elems.size());
  for (const auto& d : elems) buf.put_digest(d);
  return buf.digest();
}

// Quantized distance matrix under the config's quantizer.
Eigen::MatrixXd quantized_distances(const PointCloud& cloud, const Quantizer& q) {
  Eigen::MatrixXd d = distance_matrix(cloud);
  for (int i = 0; i < d.rows(); ++i)
    for (int j = 0; j < d.cols(); ++j) d(i, j) = quantize(d(i, j), q);
  return d;
}

struct PairElem {
  Digest128 digest;
  std::uint64_t aux = 0;
  std::int8_t sign = 0;

  friend bool operator<(const PairElem& a, const PairElem& b) {
    if (a.digest != b.digest) return a.digest < b.digest;
    if (a.aux != b.aux) return a.aux < b.aux;
    return a.sign < b.sign;
  }
};

Digest128 refine_step_digest(std::uint8_t tag, const Digest128& self,
                             std::vector<PairElem> elems, bool with_sign) {
  std::sort(elems.begin(), elems.end());
  ByteBuffer buf;
  buf.put_u8(tag);
  buf.put_digest(self);
  buf.put_u64(elems.size());
  for (const auto& e : elems) {
    buf.put_digest(e.digest);
    buf.put_u64(e.aux);
    if (with_sign) buf.put_u8(static_cast<std::uint8_t>(e.sign));
  }
  return buf.digest();
}

Fingerprint make_fingerprint(Model model, const RefineConfig& cfg, int n,
                             const std::vector<Digest128>& finals,
                             const std::vector<ColorId>& final_ids, int rounds) {
  Fingerprint fp;
  fp.model = model;
  fp.quantizer = cfg.quantizer;
  fp.rounds_to_stable = rounds;
  fp.class_histogram = class_histogram(final_ids);
  fp.digest = fingerprint_digest(model, cfg.quantizer, n, finals);
  return fp;
}

int node_cap(const RefineConfig& cfg, int n) {
  return cfg.max_iters > 0 ? cfg.max_iters : 2 * n + 4;
}

int edge_cap(const RefineConfig& cfg, int n) {
  return cfg.max_iters > 0 ? cfg.max_iters : 2 * n + 6;
}

// Triple-product orientation sign with a zero band so coplanar
// configurations hash identically to their mirrors.
std::int8_t orientation_sign(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double det = a.cross(b).dot(c);
  if (std::abs(det) < 1e-9) return 0;
  return det > 0.0 ? 1 : -1;
}

Fingerprint geongnn_impl(const PointCloud& cloud, const RefineConfig& cfg, bool chiral) {
  cfg.validate();
  const int n = cloud.size();
  const Eigen::MatrixXd qd = quantized_distances(cloud, cfg.quantizer);
  const bool sub_all = std::isinf(cfg.r_sub);
  const bool cut_all = std::isinf(cfg.r_cutoff);
  const Vec3 center = centroid(cloud);

  std::vector<Digest128> subgraph(n);
  parallel_for(n, [&](int i) {
    std::vector<int> members;
    for (int j = 0; j < n; ++j) {
      if (sub_all || qd(i, j) <= cfg.r_sub) members.push_back(j);
    }
    std::vector<Digest128> color(members.size());
    for (std::size_t mj = 0; mj < members.size(); ++mj) {
      const int j = members[mj];
      ByteBuffer buf;
      buf.put_u8(kTagInnerInit);
      put_label(buf, cloud, j);
      buf.put_double(qd(i, j));
      buf.put_u8(j == i ? 1 : 0);
      color[mj] = buf.digest();
    }
    std::vector<Digest128> next(members.size());
    std::vector<PairElem> elems;
    for (int round = 0; round < cfg.n_in; ++round) {
      for (std::size_t mj = 0; mj < members.size(); ++mj) {
        const int j = members[mj];
        elems.clear();
        for (std::size_t mk = 0; mk < members.size(); ++mk) {
          const int k = members[mk];
          if (k == j) continue;
          if (!cut_all && qd(k, j) > cfg.r_cutoff) continue;
          PairElem e{color[mk], ByteBuffer::double_bits(qd(k, j)), 0};
          if (chiral) {
            e.sign = orientation_sign(cloud.coords[j] - center, cloud.coords[k] - center,
                                      cloud.coords[i] - center);
          }
          elems.push_back(e);
        }
        next[mj] = refine_step_digest(chiral ? kTagInnerRefineChiral : kTagInnerRefine,
                                      color[mj], elems, chiral);
      }
      color.swap(next);
    }
    subgraph[i] = multiset_digest(kTagSubgraphPool, color);
  });

  std::vector<Digest128> outer(n);
  for (int i = 0; i < n; ++i) {
    ByteBuffer buf;
    buf.put_u8(kTagOuterInit);
    buf.put_digest(subgraph[i]);
    outer[i] = buf.digest();
  }
  std::vector<Digest128> next(n);
  for (int round = 0; round < cfg.n_out; ++round) {
    for (int i = 0; i < n; ++i) {
      std::vector<PairElem> elems;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (!cut_all && qd(i, j) > cfg.r_cutoff) continue;
        elems.push_back({outer[j], ByteBuffer::double_bits(qd(i, j)), 0});
      }
      next[i] = refine_step_digest(kTagNodeRefine, outer[i], elems, false);
    }
    outer.swap(next);
  }

  Interner interner;
  std::vector<ColorId> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = interner.intern(outer[i]);
  return make_fingerprint(chiral ? Model::GeoNGNNC : Model::GeoNGNN, cfg, n, outer, ids,
                          cfg.n_in + cfg.n_out);
}

EdgeRefineResult edge_impl(const PointCloud& cloud, const RefineConfig& cfg, bool two_fwl) {
  cfg.validate();
  const int n = cloud.size();
  const Eigen::MatrixXd qd = quantized_distances(cloud, cfg.quantizer);
  const int cap = edge_cap(cfg, n);
  const auto at = [n](int i, int j) { return i * n + j; };

  std::vector<Digest128> color(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ByteBuffer buf;
      buf.put_u8(kTagEdgeInit);
      put_label(buf, cloud, i);
      put_label(buf, cloud, j);
      buf.put_double(qd(i, j));
      color[at(i, j)] = buf.digest();
    }
  }

  Interner interner;
  std::vector<ColorId> ids(color.size());
  for (std::size_t e = 0; e < color.size(); ++e) ids[e] = interner.intern(color[e]);

  std::vector<Digest128> next(color.size());
  std::vector<ColorId> next_ids(color.size());
  int rounds = 0;
  bool stable = false;
  for (int round = 1; round <= cap && !stable; ++round) {
    parallel_for(n, [&](int i) {
      std::vector<PairElem> elems;
      for (int j = 0; j < n; ++j) {
        elems.clear();
        elems.reserve(n);
        for (int k = 0; k < n; ++k) {
          if (two_fwl) {
            ByteBuffer pairbuf;
            pairbuf.put_digest(color[at(i, k)]);
            pairbuf.put_digest(color[at(k, j)]);
            elems.push_back({pairbuf.digest(), 0, 0});
          } else {
            elems.push_back({color[at(k, i)], ByteBuffer::double_bits(qd(k, j)), 0});
          }
        }
        next[at(i, j)] = refine_step_digest(two_fwl ? kTagEdgeTwoFWL : kTagEdgeDimeNet,
                                            color[at(i, j)], elems, false);
      }
    });
    for (std::size_t e = 0; e < next.size(); ++e) next_ids[e] = interner.intern(next[e]);
    rounds = round;
    stable = same_partition(next_ids, ids);
    color.swap(next);
    ids.swap(next_ids);
  }
  if (!stable) throw NoStabilization("edge refinement failed to stabilize within its cap");

  std::vector<Digest128> pooled(n);
  for (int j = 0; j < n; ++j) {
    std::vector<Digest128> column(n);
    for (int i = 0; i < n; ++i) column[i] = color[at(i, j)];
    pooled[j] = multiset_digest(kTagEdgePool, std::move(column));
  }

  EdgeRefineResult result;
  result.rounds = rounds;
  result.edge_colors = ids;
  result.fingerprint = make_fingerprint(two_fwl ? Model::TwoFWLGeo : Model::DimeNetEdge, cfg,
                                        n, pooled, ids, rounds);
  return result;
}

}  // namespace

void RefineConfig::validate() const {
  if (n_in < 1) throw ConfigError("n_in must be >= 1");
  if (n_out < 0) throw ConfigError("n_out must be >= 0");
  if (!(r_sub > 0.0)) throw ConfigError("r_sub must be positive or infinite");
  if (!(r_cutoff > 0.0)) throw ConfigError("r_cutoff must be positive or infinite");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
}

std::string model_name(Model model) {
  switch (model) {
    case Model::C: return "c";
    case Model::D: return "d";
    case Model::GeoNGNN: return "geongnn";
    case Model::GeoNGNNC: return "geongnn-c";
    case Model::DimeNetEdge: return "dimenet-edge";
    case Model::TwoFWLGeo: return "2fwl";
  }
  return "?";
}

std::optional<Model> model_from_name(const std::string& name) {
  for (Model m : {Model::C, Model::D, Model::GeoNGNN, Model::GeoNGNNC, Model::DimeNetEdge,
                  Model::TwoFWLGeo}) {
    if (model_name(m) == name) return m;
  }
  return std::nullopt;
}

Coloring c_encode(const PointCloud& cloud, const Quantizer& quantizer) {
  const Vec3 c = centroid(cloud);
  Interner interner;
  Coloring coloring;
  coloring.round = 0;
  for (int i = 0; i < cloud.size(); ++i) {
    ByteBuffer buf;
    buf.put_u8(kTagCEncode);
    put_label(buf, cloud, i);
    buf.put_double(quantize((cloud.coords[i] - c).norm(), quantizer));
    const Digest128 d = buf.digest();
    coloring.digests.push_back(d);
    coloring.colors.push_back(interner.intern(d));
  }
  return coloring;
}

Coloring disgnn_default_init(const PointCloud& cloud) {
  Interner interner;
  Coloring coloring;
  coloring.round = 0;
  for (int i = 0; i < cloud.size(); ++i) {
    ByteBuffer buf;
    buf.put_u8(kTagNodeInit);
    put_label(buf, cloud, i);
    const Digest128 d = buf.digest();
    coloring.digests.push_back(d);
    coloring.colors.push_back(interner.intern(d));
  }
  return coloring;
}

DisgnnResult disgnn_refine(const PointCloud& cloud, const Coloring& init,
                           const RefineConfig& cfg) {
  cfg.validate();
  const int n = cloud.size();
  if (init.size() != n) throw ConfigError("initial coloring size does not match cloud");
  const Eigen::MatrixXd qd = quantized_distances(cloud, cfg.quantizer);
  const bool cut_all = std::isinf(cfg.r_cutoff);
  const int cap = node_cap(cfg, n);

  Interner interner;
  Coloring cur;
  cur.round = 0;
  cur.digests = init.digests;
  for (const auto& d : cur.digests) cur.colors.push_back(interner.intern(d));

  DisgnnResult result;
  result.history.push_back(cur);
  for (int round = 1; round <= cap; ++round) {
    Coloring next;
    next.round = round;
    next.digests.resize(n);
    next.colors.resize(n);
    for (int i = 0; i < n; ++i) {
      std::vector<PairElem> elems;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        if (!cut_all && qd(i, j) > cfg.r_cutoff) continue;
        elems.push_back({cur.digests[j], ByteBuffer::double_bits(qd(i, j)), 0});
      }
      next.digests[i] = refine_step_digest(kTagNodeRefine, cur.digests[i], elems, false);
      next.colors[i] = interner.intern(next.digests[i]);
    }
    result.history.push_back(next);
    const bool stable = same_partition(next.colors, cur.colors);
    cur = std::move(next);
    if (stable) {
      result.stable = cur;
      result.fingerprint = make_fingerprint(Model::D, cfg, n, cur.digests, cur.colors, round);
      return result;
    }
  }
  throw NoStabilization("distance refinement failed to stabilize within its cap");
}

Fingerprint geongnn_fingerprint(const PointCloud& cloud, const RefineConfig& cfg) {
  return geongnn_impl(cloud, cfg, false);
}

Fingerprint geongnn_c_fingerprint(const PointCloud& cloud, const RefineConfig& cfg) {
  return geongnn_impl(cloud, cfg, true);
}

EdgeRefineResult edge_refine_dimenet_result(const PointCloud& cloud, const RefineConfig& cfg) {
  return edge_impl(cloud, cfg, false);
}

Fingerprint edge_refine_dimenet(const PointCloud& cloud, const RefineConfig& cfg) {
  return edge_impl(cloud, cfg, false).fingerprint;
}

EdgeRefineResult twofwl_geo_result(const PointCloud& cloud, const RefineConfig& cfg) {
  return edge_impl(cloud, cfg, true);
}

Fingerprint twofwl_geo_fingerprint(const PointCloud& cloud, const RefineConfig& cfg) {
  return edge_impl(cloud, cfg, true).fingerprint;
}

Fingerprint fingerprint_of(const PointCloud& cloud, Model model, const RefineConfig& cfg) {
  switch (model) {
    case Model::C: {
      const Coloring coloring = c_encode(cloud, cfg.quantizer);
      Fingerprint fp;
      fp.model = Model::C;
      fp.quantizer = cfg.quantizer;
      fp.rounds_to_stable = 0;
      fp.class_histogram = class_histogram(coloring.colors);
      fp.digest = fingerprint_digest(Model::C, cfg.quantizer, cloud.size(), coloring.digests);
      return fp;
    }
    case Model::D:
      return disgnn_refine(cloud, disgnn_default_init(cloud), cfg).fingerprint;
    case Model::GeoNGNN:
      return geongnn_fingerprint(cloud, cfg);
    case Model::GeoNGNNC:
      return geongnn_c_fingerprint(cloud, cfg);
    case Model::DimeNetEdge:
      return edge_refine_dimenet(cloud, cfg);
    case Model::TwoFWLGeo:
      return twofwl_geo_fingerprint(cloud, cfg);
  }
  throw ConfigError("unknown model");
}

Verdict distinguish(const PointCloud& a, const PointCloud& b, Model model,
                    const RefineConfig& cfg) {
  if (a.size() != b.size()) return Verdict::Distinguished;
  const Fingerprint fa = fingerprint_of(a, model, cfg);
  const Fingerprint fb = fingerprint_of(b, model, cfg);
  return fa.digest == fb.digest ? Verdict::NotDistinguished : Verdict::Distinguished;
}

}  // namespace geowl
