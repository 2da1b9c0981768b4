#include "geowl/coloring.hpp"

#include <algorithm>
#include <unordered_map>

namespace geowl {

std::vector<int> partition_signature(const std::vector<ColorId>& colors) {
  std::unordered_map<ColorId, int> first;
  std::vector<int> sig(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) {
    auto [it, inserted] = first.try_emplace(colors[i], static_cast<int>(i));
    sig[i] = it->second;
  }
  return sig;
}

bool same_partition(const std::vector<ColorId>& a, const std::vector<ColorId>& b) {
  return partition_signature(a) == partition_signature(b);
}

bool partition_refines(const std::vector<ColorId>& fine, const std::vector<ColorId>& coarse) {
  std::unordered_map<ColorId, ColorId> image;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    auto [it, inserted] = image.try_emplace(fine[i], coarse[i]);
    if (!inserted && it->second != coarse[i]) return false;
  }
  return true;
}

std::vector<std::vector<int>> color_classes(const std::vector<ColorId>& colors) {
  std::unordered_map<ColorId, int> index;
  std::vector<std::vector<int>> classes;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    auto [it, inserted] = index.try_emplace(colors[i], static_cast<int>(classes.size()));
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(static_cast<int>(i));
  }
  return classes;
}

std::vector<int> class_histogram(const std::vector<ColorId>& colors) {
  std::vector<int> sizes;
  for (const auto& cls : color_classes(colors)) sizes.push_back(static_cast<int>(cls.size()));
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

}  // namespace geowl
