#pragma once

#include <vector>

#include "geowl/hash.hpp"

namespace geowl {

/// Node coloring produced by an encoding or refinement round. `colors`
/// are run-local interned ids (equality-comparable only); `digests` carry
/// the canonical 128-bit encodings that stay comparable across runs,
/// permutations, and clouds.
struct Coloring {
  std::vector<ColorId> colors;
  std::vector<Digest128> digests;
  int round = 0;

  int size() const { return static_cast<int>(colors.size()); }
};

/// First-occurrence normalization of a color vector; two vectors induce
/// the same partition of [n] iff their normalizations are equal.
std::vector<int> partition_signature(const std::vector<ColorId>& colors);

bool same_partition(const std::vector<ColorId>& a, const std::vector<ColorId>& b);

/// True iff partition induced by `fine` refines the one induced by
/// `coarse` (every fine class is contained in a coarse class).
bool partition_refines(const std::vector<ColorId>& fine, const std::vector<ColorId>& coarse);

/// Node index lists of the color classes, ordered by first occurrence.
std::vector<std::vector<int>> color_classes(const std::vector<ColorId>& colors);

/// Multiset of class sizes, ascending.
std::vector<int> class_histogram(const std::vector<ColorId>& colors);

}  // namespace geowl
