#pragma once

#include <string>
#include <vector>

#include "geowl/counterexamples.hpp"
#include "geowl/point_cloud.hpp"

namespace geowl {

/// Parses concatenated XYZ frames: a count line, a free comment line, then
/// `label x y z` body lines (label alphanumeric, whitespace separated, LF
/// or CRLF). Labels are interned to integers per text, by position in the
/// sorted set of distinct labels. Empty input yields an empty list.
/// Throws ParseError with the offending line number.
std::vector<PointCloud> parse_xyz(const std::string& text);

/// Parses several XYZ texts against one shared label alphabet, so equal
/// label strings map to equal integers across all of them.
std::vector<std::vector<PointCloud>> parse_xyz_shared(const std::vector<std::string>& texts);

/// JSON cloud format: {"coords": [[x,y,z], ...], "labels": [ints]?}.
/// Serialization round-trips coordinates at full double precision.
std::string cloud_to_json_text(const PointCloud& cloud, int indent = -1);
PointCloud cloud_from_json_text(const std::string& text);

/// Accepts a single cloud object, {"clouds": [...]}, a bare array of
/// clouds, or a counterexample pair object (yielding its two sides).
std::vector<PointCloud> clouds_from_json_text(const std::string& text);

/// Counterexample pair with embedded verification certificates.
std::string pair_to_json_text(const CounterexamplePair& pair, int indent = -1);
CounterexamplePair pair_from_json_text(const std::string& text);
bool json_text_is_pair(const std::string& text);

/// Loads clouds from a path, dispatching on the .xyz / .json extension.
std::vector<PointCloud> load_clouds(const std::string& path);
CounterexamplePair load_pair(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace geowl
