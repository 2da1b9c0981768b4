// geowl: refinement fingerprints, symmetry reports, reconstruction, and
// counterexample search for 3D point clouds.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "geowl/align.hpp"
#include "geowl/counterexamples.hpp"
#include "geowl/geometry.hpp"
#include "geowl/io.hpp"
#include "geowl/parallel.hpp"
#include "geowl/reconstruct.hpp"
#include "geowl/refine.hpp"
#include "geowl/symmetry.hpp"

namespace {

using geowl::Model;
using geowl::PointCloud;
using geowl::RefineConfig;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;
constexpr int kExitNotDistinguished = 3;

struct CommonOpts {
  std::string model = "d";
  int decimals = 9;
  int n_in = 5;
  int n_out = 1;
  double r_sub = geowl::kInfiniteRadius;
  double r_cutoff = geowl::kInfiniteRadius;
  int max_iters = 0;
  double eps = 1e-6;
  std::int64_t seed = 0;
  int threads = 0;
  std::string out;
};

RefineConfig make_config(const CommonOpts& opts) {
  RefineConfig cfg;
  cfg.n_in = opts.n_in;
  cfg.n_out = opts.n_out;
  cfg.r_sub = opts.r_sub;
  cfg.r_cutoff = opts.r_cutoff;
  cfg.max_iters = opts.max_iters;
  cfg.quantizer = geowl::Quantizer(opts.decimals);
  cfg.validate();
  return cfg;
}

json radius_json(double r) {
  if (std::isinf(r)) return nullptr;
  return r;
}

json config_json(const CommonOpts& opts, const std::vector<std::string>& inputs) {
  json j;
  j["model"] = opts.model;
  j["decimals"] = opts.decimals;
  j["n_in"] = opts.n_in;
  j["n_out"] = opts.n_out;
  j["r_sub"] = radius_json(opts.r_sub);
  j["r_cutoff"] = radius_json(opts.r_cutoff);
  j["max_iters"] = opts.max_iters;
  j["eps"] = opts.eps;
  j["seed"] = opts.seed;
  j["threads"] = opts.threads == 0 ? geowl::max_threads() : opts.threads;
  j["inputs"] = inputs;
  return j;
}

void apply_thread_cap(int requested) {
  if (requested <= 0) return;
  const int capped = std::min(requested, geowl::max_threads());
  setenv("GEOWL_THREADS", std::to_string(capped).c_str(), 1);
}

void emit(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    geowl::write_text_file(out_path, text);
  }
}

Model parse_model(const std::string& name) {
  const auto model = geowl::model_from_name(name);
  if (!model) throw geowl::ConfigError("unknown model '" + name + "'");
  return *model;
}

std::vector<PointCloud> load_input(const std::string& path) {
  const auto clouds = geowl::load_clouds(path);
  if (clouds.empty()) throw geowl::ParseError("no clouds in " + path, 1);
  return clouds;
}

json fingerprint_json(const geowl::Fingerprint& fp) {
  json j;
  j["digest"] = fp.digest.hex();
  j["model"] = geowl::model_name(fp.model);
  j["rounds_to_stable"] = fp.rounds_to_stable;
  j["class_histogram"] = fp.class_histogram;
  j["quantizer_decimals"] = fp.quantizer.decimals;
  return j;
}

int cmd_fingerprint(const CommonOpts& opts, const std::string& file) {
  const RefineConfig cfg = make_config(opts);
  const Model model = parse_model(opts.model);
  json report;
  report["command"] = "fingerprint";
  report["config"] = config_json(opts, {file});
  report["results"] = json::array();
  int index = 0;
  for (const auto& cloud : load_input(file)) {
    json entry = fingerprint_json(geowl::fingerprint_of(cloud, model, cfg));
    entry["cloud"] = index++;
    entry["n"] = cloud.size();
    report["results"].push_back(entry);
  }
  emit(report, opts.out);
  return kExitOk;
}

int cmd_distinguish(const CommonOpts& opts, const std::vector<std::string>& files) {
  const RefineConfig cfg = make_config(opts);
  const Model model = parse_model(opts.model);

  PointCloud a, b;
  if (files.size() == 1) {
    const geowl::CounterexamplePair pair = geowl::load_pair(files[0]);
    a = pair.p1;
    b = pair.p2;
  } else {
    const bool xyz_a = files[0].ends_with(".xyz");
    const bool xyz_b = files[1].ends_with(".xyz");
    if (xyz_a && xyz_b) {
      // One shared label alphabet so equal labels compare equal across files.
      const auto groups = geowl::parse_xyz_shared(
          {geowl::read_text_file(files[0]), geowl::read_text_file(files[1])});
      if (groups[0].empty() || groups[1].empty()) {
        throw geowl::ParseError("input file has no clouds", 1);
      }
      a = groups[0].front();
      b = groups[1].front();
    } else {
      a = load_input(files[0]).front();
      b = load_input(files[1]).front();
    }
  }

  const geowl::Fingerprint fa = geowl::fingerprint_of(a, model, cfg);
  const geowl::Fingerprint fb = geowl::fingerprint_of(b, model, cfg);
  const geowl::Verdict verdict = geowl::distinguish(a, b, model, cfg);

  json report;
  report["command"] = "distinguish";
  report["config"] = config_json(opts, files);
  report["n1"] = a.size();
  report["n2"] = b.size();
  report["fingerprint1"] = fingerprint_json(fa);
  report["fingerprint2"] = fingerprint_json(fb);
  report["verdict"] =
      verdict == geowl::Verdict::Distinguished ? "distinguished" : "not_distinguished";
  emit(report, opts.out);
  return verdict == geowl::Verdict::Distinguished ? kExitOk : kExitNotDistinguished;
}

int cmd_symmetry(const CommonOpts& opts, const std::string& file) {
  const geowl::Quantizer q(opts.decimals);
  json report;
  report["command"] = "symmetry";
  report["config"] = config_json(opts, {file});
  report["results"] = json::array();
  int index = 0;
  for (const auto& cloud : load_input(file)) {
    const geowl::SymmetryReport rep = geowl::classify_symmetry(cloud, q, opts.eps);
    json entry;
    entry["cloud"] = index++;
    entry["n"] = cloud.size();
    entry["c_symmetric"] = rep.c_symmetric;
    entry["d_symmetric"] = rep.d_symmetric;
    entry["k_classes_c"] = rep.k_classes_c;
    entry["k_classes_d"] = rep.k_classes_d;
    entry["max_center_deviation"] = rep.max_center_deviation;
    report["results"].push_back(entry);
  }
  emit(report, opts.out);
  return kExitOk;
}

std::vector<PointCloud> load_dataset(const std::string& path) {
  namespace fs = std::filesystem;
  std::vector<PointCloud> dataset;
  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(path)) {
      const std::string p = entry.path().string();
      if (p.ends_with(".xyz") || p.ends_with(".json")) files.push_back(p);
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      for (auto& cloud : geowl::load_clouds(f)) dataset.push_back(std::move(cloud));
    }
  } else {
    dataset = load_input(path);
  }
  if (dataset.empty()) throw geowl::ParseError("dataset is empty: " + path, 1);
  return dataset;
}

int cmd_scan(const CommonOpts& opts, const std::string& path,
             const std::vector<double>& eps_grid, const std::string& csv_path) {
  const geowl::Quantizer q(opts.decimals);
  std::vector<double> grid = eps_grid;
  if (grid.empty()) grid = {1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  std::sort(grid.begin(), grid.end());

  const geowl::ScanResult scan = geowl::symmetry_scan(load_dataset(path), q, grid);

  json report;
  report["command"] = "scan";
  report["config"] = config_json(opts, {path});
  report["config"]["eps_grid"] = grid;
  report["counted"] = scan.counted;
  report["skipped_degenerate"] = scan.skipped_degenerate;
  report["rows"] = json::array();
  std::string csv = "eps,proportion_c,proportion_d\n";
  for (const auto& row : scan.rows) {
    json r;
    r["eps"] = row.eps;
    r["proportion_c"] = row.proportion_c;
    r["proportion_d"] = row.proportion_d;
    report["rows"].push_back(r);
    char line[96];
    std::snprintf(line, sizeof(line), "%.9g,%.9g,%.9g\n", row.eps, row.proportion_c,
                  row.proportion_d);
    csv += line;
  }
  if (!csv_path.empty()) geowl::write_text_file(csv_path, csv);
  emit(report, opts.out);
  return kExitOk;
}

int cmd_gen_counterexamples(const CommonOpts& opts, const std::string& kind_name,
                            int subset_size, std::uint64_t budget, const std::string& augment,
                            int copies, const std::string& fixture_dir) {
  const RefineConfig cfg = make_config(opts);
  const auto kind = geowl::polyhedron_from_name(kind_name);
  if (!kind) throw geowl::ConfigError("unknown polyhedron '" + kind_name + "'");

  geowl::SearchResult res = geowl::search_disgnn_blind_pairs(
      *kind, subset_size, cfg, budget, static_cast<std::uint64_t>(opts.seed));

  const std::vector<Model> all_models = {Model::D, Model::GeoNGNN, Model::DimeNetEdge,
                                         Model::TwoFWLGeo};
  for (auto& pair : res.pairs) pair = geowl::verify_counterexample(pair, all_models, cfg);

  json report;
  report["command"] = "gen-counterexamples";
  report["config"] = config_json(opts, {});
  report["config"]["kind"] = kind_name;
  report["config"]["subset_size"] = subset_size;
  report["config"]["budget"] = budget;
  report["subsets_enumerated"] = res.subsets_enumerated;
  report["candidates_tested"] = res.candidates_tested;
  report["budget_exhausted"] = res.budget_exhausted;
  report["oracle_overflows"] = res.oracle_overflows;
  report["pairs"] = json::array();
  for (const auto& pair : res.pairs) {
    report["pairs"].push_back(json::parse(geowl::pair_to_json_text(pair)));
  }

  if (!augment.empty()) {
    geowl::AugmentMode mode;
    if (augment == "origin") mode = geowl::AugmentMode::Origin;
    else if (augment == "complementary") mode = geowl::AugmentMode::Complementary;
    else if (augment == "all") mode = geowl::AugmentMode::All;
    else throw geowl::ConfigError("unknown augmentation mode '" + augment + "'");
    report["augmented"] = json::array();
    for (const auto& pair : res.pairs) {
      const geowl::AugmentOutcome out = geowl::augment_combinatorial(pair, mode, copies, cfg);
      json entry;
      if (out.pair) {
        const auto verified = geowl::verify_counterexample(*out.pair, all_models, cfg);
        entry["pair"] = json::parse(geowl::pair_to_json_text(verified));
      } else {
        entry["failure"] = out.failure;
      }
      report["augmented"].push_back(entry);
    }
  }

  if (!fixture_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(fixture_dir);
    int index = 0;
    for (const auto& pair : report["pairs"]) {
      const std::string name = "pair_" + kind_name + "_s" + std::to_string(subset_size) + "_" +
                               std::to_string(index++) + ".json";
      geowl::write_text_file((fs::path(fixture_dir) / name).string(), pair.dump(2) + "\n");
    }
    index = 0;
    if (report.contains("augmented")) {
      for (const auto& entry : report["augmented"]) {
        if (!entry.contains("pair")) continue;
        const std::string name = "pair_" + kind_name + "_s" + std::to_string(subset_size) +
                                 "_" + augment + std::to_string(copies) + "_" +
                                 std::to_string(index++) + ".json";
        geowl::write_text_file((fs::path(fixture_dir) / name).string(),
                               entry["pair"].dump(2) + "\n");
      }
    }
  }

  emit(report, opts.out);
  return kExitOk;
}

int cmd_reconstruct(const CommonOpts& opts, const std::string& file,
                    const std::string& group_name) {
  const geowl::Quantizer q(opts.decimals);
  json report;
  report["command"] = "reconstruct";
  report["config"] = config_json(opts, {file});
  report["config"]["group"] = group_name;
  report["results"] = json::array();
  int index = 0;
  for (const auto& cloud : load_input(file)) {
    const geowl::Vec3 c1 = geowl::centroid(cloud);
    int far = 0;
    double best = -1.0;
    for (int i = 0; i < cloud.size(); ++i) {
      const double r = (cloud.coords[i] - c1).norm();
      if (r > best) {
        best = r;
        far = i;
      }
    }
    const geowl::Vec3 c2 = cloud.coords[far];
    const geowl::TriangularEncoding enc = geowl::triangular_encoding(cloud, c1, c2);
    const Eigen::MatrixXd d = geowl::distance_matrix(cloud);
    geowl::ReconstructionResult rec =
        group_name == "se3"
            ? geowl::reconstruct_se3(enc, d, geowl::orientation_signs_from_cloud(cloud, c1, c2))
            : geowl::reconstruct_e3(enc, d);

    json entry;
    entry["cloud"] = index++;
    entry["n"] = cloud.size();
    entry["group"] = group_name;
    entry["residual_rmsd"] = rec.residual_rmsd;
    entry["coords"] = json::array();
    for (const auto& p : rec.coords) entry["coords"].push_back({p.x(), p.y(), p.z()});
    // The encoding reconstructs geometry only, so compare label-free.
    const geowl::PointCloud plain{cloud.coords, std::nullopt};
    const auto alignment =
        geowl::align_isomorphic(plain, geowl::PointCloud{rec.coords, std::nullopt},
                                group_name == "se3" ? geowl::SymmetryGroup::SE3
                                                    : geowl::SymmetryGroup::E3);
    entry["round_trip_rmsd"] = alignment ? json(alignment->rmsd) : json(nullptr);
    if (group_name == "e3") {
      const auto canon = geowl::complete_invariant(cloud, q, opts.eps);
      if (canon) {
        json form = json::array();
        for (const auto& p : *canon) form.push_back({p.x(), p.y(), p.z()});
        entry["canonical"] = form;
      } else {
        entry["canonical"] = nullptr;
      }
    }
    report["results"].push_back(entry);
  }
  emit(report, opts.out);
  return kExitOk;
}

json error_json(const std::string& type, const std::string& message, int line = -1) {
  json j;
  j["error"]["type"] = type;
  j["error"]["message"] = message;
  if (line >= 0) j["error"]["line"] = line;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometric refinement fingerprints and symmetry analysis"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);
  app.allow_config_extras(CLI::config_extras_mode::error);

  CommonOpts opts;
  // Options shared by the subcommands; registered per subcommand so they
  // show up in the right --help and in [subcommand] config sections.
  auto add_common = [&](CLI::App* sub, bool with_model) {
    if (with_model) {
      sub->add_option("--model", opts.model,
                      "model: c, d, geongnn, geongnn-c, dimenet-edge, 2fwl");
    }
    sub->add_option("--decimals", opts.decimals, "quantizer decimal places (0-12)");
    sub->add_option("--n-in", opts.n_in, "inner refinement rounds");
    sub->add_option("--n-out", opts.n_out, "outer refinement rounds");
    sub->add_option("--r-sub", opts.r_sub, "subgraph radius (inf for full)");
    sub->add_option("--r-cutoff", opts.r_cutoff, "interaction cutoff (inf for full)");
    sub->add_option("--max-iters", opts.max_iters, "stabilization cap (0 = automatic)");
    sub->add_option("--eps", opts.eps, "symmetry deviation tolerance");
    sub->add_option("--threads", opts.threads, "worker cap (also capped by GEOWL_THREADS)");
    sub->add_option("--out", opts.out, "write the JSON report here instead of stdout");
  };

  std::string file_a, file_b, group = "e3", kind = "dodecahedron";
  std::vector<std::string> distinguish_files;
  std::vector<double> eps_grid;
  std::string csv_path, augment_mode, fixture_dir;
  int subset_size = 10, copies = 2;
  std::uint64_t budget = 1'000'000;

  CLI::App* fingerprint = app.add_subcommand("fingerprint", "canonical digest per cloud");
  add_common(fingerprint, true);
  fingerprint->add_option("file", file_a, "input cloud file (.xyz or .json)")->required();

  CLI::App* distinguish = app.add_subcommand(
      "distinguish", "compare two clouds (exit 0 distinguished, 3 not)");
  add_common(distinguish, true);
  distinguish->add_option("files", distinguish_files, "two cloud files, or one pair fixture")
      ->expected(1, 2)
      ->required();

  CLI::App* symmetry = app.add_subcommand("symmetry", "center/refinement symmetry report");
  add_common(symmetry, false);
  symmetry->add_option("file", file_a, "input cloud file")->required();

  CLI::App* scan = app.add_subcommand("scan", "symmetry proportions over a dataset");
  add_common(scan, false);
  scan->add_option("--eps-grid", eps_grid, "tolerance grid")->delimiter(',');
  scan->add_option("--csv", csv_path, "also write the table as CSV");
  scan->add_option("path", file_a, "dataset file or directory")->required();
  // Scans default to --decimals 2 (coarse preset for unit-rescaled data).
  CLI::Option* scan_decimals = scan->get_option("--decimals");

  CLI::App* gen = app.add_subcommand("gen-counterexamples",
                                     "search polyhedron subsets for blind pairs");
  add_common(gen, false);
  gen->add_option("--kind", kind, "tetrahedron|cube|octahedron|dodecahedron|icosahedron");
  gen->add_option("--subset-size", subset_size, "vertex subset size")->required();
  gen->add_option("--budget", budget, "maximum enumerated subsets");
  gen->add_option("--seed", opts.seed, "sampling seed (mandatory)")->required();
  gen->add_option("--augment", augment_mode, "also augment found pairs: origin|complementary|all");
  gen->add_option("--copies", copies, "shells for augmentation");
  gen->add_option("--fixture-dir", fixture_dir, "write each verified pair as a fixture file");

  CLI::App* reconstruct = app.add_subcommand("reconstruct", "coordinate reconstruction");
  add_common(reconstruct, false);
  reconstruct->add_option("--group", group, "e3 or se3")
      ->check(CLI::IsMember({"e3", "se3"}));
  reconstruct->add_option("file", file_a, "input cloud file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cout << error_json("UsageError", e.what()).dump(2) << "\n";
    return kExitUsage;
  }

  try {
    apply_thread_cap(opts.threads);
    if (fingerprint->parsed()) return cmd_fingerprint(opts, file_a);
    if (distinguish->parsed()) return cmd_distinguish(opts, distinguish_files);
    if (symmetry->parsed()) return cmd_symmetry(opts, file_a);
    if (scan->parsed()) {
      if (scan_decimals->count() == 0) opts.decimals = 2;
      return cmd_scan(opts, file_a, eps_grid, csv_path);
    }
    if (gen->parsed()) {
      return cmd_gen_counterexamples(opts, kind, subset_size, budget, augment_mode, copies,
                                     fixture_dir);
    }
    if (reconstruct->parsed()) return cmd_reconstruct(opts, file_a, group);
  } catch (const geowl::ParseError& e) {
    std::cout << error_json("ParseError", e.what(), e.line()).dump(2) << "\n";
    return kExitUsage;
  } catch (const geowl::ConfigError& e) {
    std::cout << error_json("ConfigError", e.what()).dump(2) << "\n";
    return kExitUsage;
  } catch (const geowl::Error& e) {
    std::cout << error_json("InternalError", e.what()).dump(2) << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
