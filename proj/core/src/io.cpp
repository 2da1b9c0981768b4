#include "geowl/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace geowl {

namespace {

using nlohmann::json;

struct RawFrame {
  std::vector<Vec3> coords;
  std::vector<std::string> labels;
};

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
  }
  return lines;
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(std::move(tok));
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + tok.size() && std::isfinite(out);
}

bool alphanumeric(const std::string& tok) {
  return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
    return std::isalnum(c);
  });
}

std::vector<RawFrame> parse_xyz_raw(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  std::vector<RawFrame> frames;
  std::size_t at = 0;
  while (at < lines.size()) {
    if (blank(lines[at])) {
      ++at;
      continue;
    }
    const int header_line = static_cast<int>(at) + 1;
    const auto head = tokens(lines[at]);
    long n = 0;
    char* end = nullptr;
    if (head.size() == 1) n = std::strtol(head[0].c_str(), &end, 10);
    if (head.size() != 1 || end != head[0].c_str() + head[0].size()) {
      throw ParseError("expected a node count", header_line);
    }
    if (n < 2) throw ParseError("frame must contain at least 2 nodes", header_line);
    if (n > 1'000'000) throw ParseError("node count too large", header_line);
    ++at;
    if (at >= lines.size()) {
      throw ParseError("missing comment line", static_cast<int>(lines.size()) + 1);
    }
    ++at;  // comment line, content ignored
    RawFrame frame;
    for (long i = 0; i < n; ++i, ++at) {
      const int body_line = static_cast<int>(at) + 1;
      if (at >= lines.size()) {
        throw ParseError("frame body ended before " + std::to_string(n) + " nodes", body_line);
      }
      const auto t = tokens(lines[at]);
      double x = 0, y = 0, z = 0;
      if (t.size() != 4 || !alphanumeric(t[0]) || !parse_double(t[1], x) ||
          !parse_double(t[2], y) || !parse_double(t[3], z)) {
        throw ParseError("expected 'label x y z'", body_line);
      }
      frame.labels.push_back(t[0]);
      frame.coords.push_back(Vec3(x, y, z));
    }
    frames.push_back(std::move(frame));
  }
  return frames;
}

std::vector<PointCloud> intern_frames(const std::vector<RawFrame>& frames,
                                      const std::map<std::string, int>& alphabet) {
  std::vector<PointCloud> clouds;
  clouds.reserve(frames.size());
  for (const auto& frame : frames) {
    std::vector<int> labels;
    labels.reserve(frame.labels.size());
    for (const auto& s : frame.labels) labels.push_back(alphabet.at(s));
    clouds.push_back(make_cloud(frame.coords, std::move(labels)));
  }
  return clouds;
}

std::map<std::string, int> build_alphabet(const std::vector<const RawFrame*>& frames) {
  std::map<std::string, int> alphabet;
  for (const RawFrame* f : frames)
    for (const auto& s : f->labels) alphabet.emplace(s, 0);
  int next = 0;
  for (auto& [key, value] : alphabet) value = next++;
  return alphabet;
}

json cloud_to_json(const PointCloud& cloud) {
  json j;
  j["coords"] = json::array();
  for (const auto& p : cloud.coords) j["coords"].push_back({p.x(), p.y(), p.z()});
  if (cloud.labeled()) j["labels"] = *cloud.labels;
  return j;
}

PointCloud cloud_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coords")) throw ParseError("expected a cloud object", 1);
  std::vector<Vec3> coords;
  for (const auto& row : j.at("coords")) {
    if (!row.is_array() || row.size() != 3) throw ParseError("coordinate rows need 3 entries", 1);
    coords.push_back(Vec3(row[0].get<double>(), row[1].get<double>(), row[2].get<double>()));
  }
  std::optional<std::vector<int>> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<int>>();
  return make_cloud(std::move(coords), std::move(labels));
}

json pair_to_json(const CounterexamplePair& pair) {
  json j;
  j["p1"] = cloud_to_json(pair.p1);
  j["p2"] = cloud_to_json(pair.p2);
  json prov;
  prov["source"] = pair.provenance.source;
  prov["kind"] = pair.provenance.kind;
  prov["scale"] = pair.provenance.scale;
  prov["subset1"] = pair.provenance.subset1;
  prov["subset2"] = pair.provenance.subset2;
  prov["augmentation"] = pair.provenance.augmentation;
  prov["shell_ratio"] = pair.provenance.shell_ratio;
  j["provenance"] = prov;
  j["verified_noniso"] = pair.verified_noniso;
  json blind;
  for (const auto& [model, flag] : pair.verified_blind) blind[model_name(model)] = flag;
  j["verified_blind"] = blind;
  return j;
}

CounterexamplePair pair_from_json(const json& j) {
  CounterexamplePair pair;
  pair.p1 = cloud_from_json(j.at("p1"));
  pair.p2 = cloud_from_json(j.at("p2"));
  if (j.contains("provenance")) {
    const json& prov = j.at("provenance");
    pair.provenance.source = prov.value("source", "");
    pair.provenance.kind = prov.value("kind", "");
    pair.provenance.scale = prov.value("scale", 1.0);
    pair.provenance.subset1 = prov.value("subset1", std::vector<int>{});
    pair.provenance.subset2 = prov.value("subset2", std::vector<int>{});
    pair.provenance.augmentation = prov.value("augmentation", "");
    pair.provenance.shell_ratio = prov.value("shell_ratio", 0.5);
  }
  pair.verified_noniso = j.value("verified_noniso", false);
  if (j.contains("verified_blind")) {
    for (const auto& [key, value] : j.at("verified_blind").items()) {
      if (const auto model = model_from_name(key)) {
        pair.verified_blind[*model] = value.get<bool>();
      }
    }
  }
  return pair;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("invalid JSON", 1);
  return j;
}

bool has_extension(const std::string& path, const std::string& ext) {
  if (path.size() < ext.size()) return false;
  return std::equal(ext.rbegin(), ext.rend(), path.rbegin(), [](char a, char b) {
    return std::tolower(static_cast<unsigned char>(a)) ==
           std::tolower(static_cast<unsigned char>(b));
  });
}

}  // namespace

std::vector<PointCloud> parse_xyz(const std::string& text) {
  const auto frames = parse_xyz_raw(text);
  std::vector<const RawFrame*> refs;
  for (const auto& f : frames) refs.push_back(&f);
  return intern_frames(frames, build_alphabet(refs));
}

std::vector<std::vector<PointCloud>> parse_xyz_shared(const std::vector<std::string>& texts) {
  std::vector<std::vector<RawFrame>> all;
  std::vector<const RawFrame*> refs;
  for (const auto& text : texts) {
    all.push_back(parse_xyz_raw(text));
    for (const auto& f : all.back()) refs.push_back(&f);
  }
  const auto alphabet = build_alphabet(refs);
  std::vector<std::vector<PointCloud>> out;
  for (const auto& frames : all) out.push_back(intern_frames(frames, alphabet));
  return out;
}

std::string cloud_to_json_text(const PointCloud& cloud, int indent) {
  return cloud_to_json(cloud).dump(indent);
}

PointCloud cloud_from_json_text(const std::string& text) {
  return cloud_from_json(parse_json(text));
}

std::vector<PointCloud> clouds_from_json_text(const std::string& text) {
  const json j = parse_json(text);
  std::vector<PointCloud> clouds;
  if (j.is_array()) {
    for (const auto& item : j) clouds.push_back(cloud_from_json(item));
  } else if (j.contains("clouds")) {
    for (const auto& item : j.at("clouds")) clouds.push_back(cloud_from_json(item));
  } else if (j.contains("p1") && j.contains("p2")) {
    clouds.push_back(cloud_from_json(j.at("p1")));
    clouds.push_back(cloud_from_json(j.at("p2")));
  } else {
    clouds.push_back(cloud_from_json(j));
  }
  return clouds;
}

std::string pair_to_json_text(const CounterexamplePair& pair, int indent) {
  return pair_to_json(pair).dump(indent);
}

CounterexamplePair pair_from_json_text(const std::string& text) {
  return pair_from_json(parse_json(text));
}

bool json_text_is_pair(const std::string& text) {
  const json j = json::parse(text, nullptr, false);
  return j.is_object() && j.contains("p1") && j.contains("p2");
}

std::vector<PointCloud> load_clouds(const std::string& path) {
  const std::string text = read_text_file(path);
  if (has_extension(path, ".xyz")) return parse_xyz(text);
  if (has_extension(path, ".json")) return clouds_from_json_text(text);
  throw ParseError("unsupported file extension for " + path, 1);
}

CounterexamplePair load_pair(const std::string& path) {
  return pair_from_json_text(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

}  // namespace geowl
