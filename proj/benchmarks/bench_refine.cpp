#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "geowl/counterexamples.hpp"
#include "geowl/geometry.hpp"
#include "geowl/refine.hpp"

namespace {

using geowl::PointCloud;
using geowl::Vec3;

// splitmix64-based gaussian sampler (Box-Muller); keeps benchmark inputs
// identical across standard libraries.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed ^ 0x9e3779b97f4a7c15ULL) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double gaussian() {
    const double u1 = std::max(uniform(), 1e-300);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * uniform());
  }
};

PointCloud random_cloud(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec3> coords;
  coords.reserve(n);
  for (int i = 0; i < n; ++i) coords.push_back(Vec3(rng.gaussian(), rng.gaussian(), rng.gaussian()));
  return geowl::make_cloud(std::move(coords));
}

void BM_disgnn_refine(benchmark::State& state) {
  const PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 17);
  const geowl::RefineConfig cfg;
  const geowl::Coloring init = geowl::disgnn_default_init(cloud);
  for (auto _ : state) {
    benchmark::DoNotOptimize(geowl::disgnn_refine(cloud, init, cfg).fingerprint.digest.lo);
  }
}
BENCHMARK(BM_disgnn_refine)->Arg(25)->Arg(50)->Arg(100);

void BM_geongnn_fingerprint(benchmark::State& state) {
  const PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 23);
  const geowl::RefineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geowl::geongnn_fingerprint(cloud, cfg).digest.lo);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_geongnn_fingerprint)->Arg(25)->Arg(50)->Arg(100)->Complexity();

void BM_edge_refine_dimenet(benchmark::State& state) {
  const PointCloud cloud = random_cloud(static_cast<int>(state.range(0)), 29);
  const geowl::RefineConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(geowl::edge_refine_dimenet(cloud, cfg).digest.lo);
  }
}
BENCHMARK(BM_edge_refine_dimenet)->Arg(10)->Arg(20)->Arg(30);

void BM_dodecahedron_search(benchmark::State& state) {
  const geowl::RefineConfig cfg;
  for (auto _ : state) {
    const auto res = geowl::search_disgnn_blind_pairs(geowl::PolyhedronKind::Dodecahedron,
                                                      static_cast<int>(state.range(0)), cfg,
                                                      1'000'000, 1);
    benchmark::DoNotOptimize(res.pairs.size());
  }
}
BENCHMARK(BM_dodecahedron_search)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
