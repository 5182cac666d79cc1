#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "mtt/analytics.hpp"
#include "mtt/frame.hpp"
#include "mtt/orchestrator.hpp"
#include "mtt/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct InputSpec {
  std::string path;       // empty for synthetic inputs
  std::string format = "pgm";
  std::string synth;      // flat/hgrad/checker/noise
};

struct RunConfig {
  std::vector<InputSpec> inputs;
  int width = 256, height = 256;  // raw8 and synth dimensions
  int ctu = 64;
  int min_qt = 8;
  int max_mtt_depth = 3;
  int max_bt = 64;
  int max_tt = 32;
  int qt_disable_below = 0;  // 0 = unset
  std::vector<int> qps = {22, 27, 32, 37};
  int ref_qp = 37;
  std::string guide_mode = "scalar";
  int workers = 0;
  uint32_t seed = 1;
  std::string out_dir = "out";

  mtt::PartitionConstraints constraints() const {
    mtt::PartitionConstraints c;
    c.ctu_size = ctu;
    c.min_qt_size = min_qt;
    c.max_mtt_depth = max_mtt_depth;
    c.max_bt_size = max_bt;
    c.max_tt_size = max_tt;
    if (qt_disable_below > 0) c.qt_disabled_below = qt_disable_below;
    return c;
  }

  std::string canonical() const {
    std::ostringstream s;
    for (const auto& in : inputs)
      s << "input=" << in.path << ":" << in.format << ":" << in.synth << ";";
    s << "w=" << width << ";h=" << height << ";ctu=" << ctu << ";min_qt=" << min_qt
      << ";mtt=" << max_mtt_depth << ";bt=" << max_bt << ";tt=" << max_tt
      << ";qtd=" << qt_disable_below << ";qps=";
    for (int q : qps) s << q << ",";
    s << ";ref=" << ref_qp << ";mode=" << guide_mode << ";seed=" << seed;
    return s.str();
  }
};

mtt::LumaFrame load_input(const InputSpec& in, const RunConfig& cfg) {
  if (!in.synth.empty())
    return mtt::synth_frame(mtt::synth_kind_from_name(in.synth), cfg.width,
                            cfg.height, cfg.seed);
  if (in.format == "raw8") return mtt::load_raw8(in.path, cfg.width, cfg.height);
  return mtt::load_pgm(in.path);
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), std::streamsize(data.size()));
  if (!out) throw std::runtime_error("write failed on " + path.string());
}

void write_file(const fs::path& path, const std::vector<uint8_t>& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
}

void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--ctu", cfg.ctu, "CTU size")->envname("MTT_CTU");
  cmd->add_option("--min-qt", cfg.min_qt, "minimum QT leaf size");
  cmd->add_option("--max-mtt-depth", cfg.max_mtt_depth, "BT/TT depth budget");
  cmd->add_option("--max-bt", cfg.max_bt, "maximum binary split size");
  cmd->add_option("--max-tt", cfg.max_tt, "maximum ternary split size");
  cmd->add_option("--qt-disable-below", cfg.qt_disable_below,
                  "disable QT for CUs at or below this width (0 = off)");
  cmd->add_option("--workers", cfg.workers, "concurrent CTU encodes (0 = auto)")
      ->envname("MTT_WORKERS");
  cmd->add_option("--seed", cfg.seed, "seed for synthetic inputs")
      ->envname("MTT_SEED");
  cmd->add_option("--out-dir", cfg.out_dir, "output directory")
      ->envname("MTT_OUT_DIR");
}

void add_input_flags(CLI::App* cmd, RunConfig& cfg, std::vector<std::string>& inputs,
                     std::vector<std::string>& synths, std::string& format) {
  cmd->add_option("--input", inputs, "input file(s)")->envname("MTT_INPUT");
  cmd->add_option("--synth", synths, "synthetic input kind(s)");
  cmd->add_option("--format", format, "input format: pgm or raw8");
  cmd->add_option("--width", cfg.width, "frame width (raw8/synth)");
  cmd->add_option("--height", cfg.height, "frame height (raw8/synth)");
}

void collect_inputs(RunConfig& cfg, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& synths,
                    const std::string& format) {
  for (const auto& p : inputs) cfg.inputs.push_back({p, format, ""});
  for (const auto& s : synths) cfg.inputs.push_back({"", "", s});
  if (cfg.inputs.empty()) throw CLI::ValidationError("no --input or --synth given");
}

std::string hash_hex(const RunConfig& cfg) {
  std::ostringstream s;
  s << std::hex << mtt::config_hash(cfg.canonical());
  return s.str();
}

int cmd_encode(RunConfig& cfg, int qp) {
  fs::create_directories(cfg.out_dir);
  mtt::LumaFrame frame =
      mtt::pad_to_ctu_grid(load_input(cfg.inputs.at(0), cfg), cfg.ctu);
  auto cons = cfg.constraints();
  mtt::RepresentationResult r =
      mtt::encode_representation(frame, qp, cons, nullptr, cfg.workers);

  std::ostringstream trees;
  for (const auto& t : r.trees) trees << mtt::tree_to_text(t);
  write_file(fs::path(cfg.out_dir) / "trees.txt", trees.str());

  std::vector<uint8_t> maps;
  for (const auto& t : r.trees) {
    auto bytes = mtt::serialize(mtt::extract_size_map(t));
    maps.insert(maps.end(), bytes.begin(), bytes.end());
  }
  write_file(fs::path(cfg.out_dir) / "size_maps.szmp", maps);

  std::ostringstream csv;
  csv << "qp,rate_bits,psnr_db,ns_evaluations,nodes_visited,wall_time_s\n"
      << qp << ',' << r.rate_bits << ',';
  if (std::isinf(r.psnr_db))
    csv << "inf";
  else
    csv << r.psnr_db;
  csv << ',' << r.stats.ns_evaluations << ',' << r.stats.nodes_visited << ','
      << r.stats.wall_time_s << '\n';
  write_file(fs::path(cfg.out_dir) / "rd.csv", csv.str());

  json stats = {{"config_hash", hash_hex(cfg)},
                {"seed", cfg.seed},
                {"qp", qp},
                {"rate_bits", r.rate_bits},
                {"psnr_db", mtt::psnr_json(r.psnr_db)},
                {"stats", mtt::rd_stats_json(r.stats)}};
  write_file(fs::path(cfg.out_dir) / "stats.json", stats.dump(2) + "\n");
  return 0;
}

int cmd_ladder(RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  std::vector<mtt::LumaFrame> frames;
  for (const auto& in : cfg.inputs) frames.push_back(load_input(in, cfg));

  mtt::LadderReport rep =
      mtt::run_ladder(frames, cfg.qps, cfg.ref_qp, cfg.constraints(),
                      mtt::guide_mode_from_name(cfg.guide_mode), cfg.workers);

  uint64_t h = mtt::config_hash(cfg.canonical());
  write_file(fs::path(cfg.out_dir) / "ladder.json",
             mtt::ladder_report_json(rep, h, cfg.seed).dump(2) + "\n");
  write_file(fs::path(cfg.out_dir) / "rd_baseline.csv", mtt::rd_csv(rep.baseline));
  write_file(fs::path(cfg.out_dir) / "rd_fast.csv", mtt::rd_csv(rep.fast));

  json sim = {{"config_hash", hash_hex(cfg)},
              {"seed", cfg.seed},
              {"per_qp", mtt::similarity_json(rep.similarity)}};
  write_file(fs::path(cfg.out_dir) / "similarity.json", sim.dump(2) + "\n");

  json red = {{"config_hash", hash_hex(cfg)},
              {"seed", cfg.seed},
              {"summary", mtt::reduction_json(rep.reduction)}};
  write_file(fs::path(cfg.out_dir) / "reduction.json", red.dump(2) + "\n");
  return 0;
}

mtt::RdCurve load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  mtt::RdCurve curve;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.find("rate") != std::string::npos) {
      first = false;
      continue;  // header
    }
    first = false;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
      throw std::runtime_error("bad curve row: " + line);
    curve.points.push_back({std::stod(a), std::stod(b)});
  }
  std::sort(curve.points.begin(), curve.points.end());
  return curve;
}

int cmd_bd(const std::string& anchor, const std::string& test,
           const std::string& mode) {
  mtt::RdCurve a = load_curve_csv(anchor);
  mtt::RdCurve t = load_curve_csv(test);
  double v = mtt::bd_delta(
      a, t, mode == "bd_rate" ? mtt::BdMode::Rate : mtt::BdMode::Quality);
  std::cout << std::fixed << std::setprecision(4) << v << "\n";
  return 0;
}

int cmd_stats(const std::string& report_path) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open " + report_path);
  json j = json::parse(in);
  std::cout << "report: " << report_path << "\n";
  if (j.contains("config_hash"))
    std::cout << "config_hash: " << j["config_hash"] << " seed: " << j.value("seed", 0)
              << "\n";
  if (j.contains("reduction"))
    std::cout << "average_ns_reduction: "
              << j["reduction"].value("average_ns_reduction", 0.0)
              << "  max_rep_reduction: "
              << j["reduction"].value("max_rep_reduction", 0.0) << "\n";
  for (const char* arm : {"baseline", "fast"})
    if (j.contains(arm))
      for (const auto& r : j[arm])
        std::cout << arm << " qp=" << r["qp"] << " rate_bits=" << r["rate_bits"]
                  << " psnr_db=" << r["psnr_db"]
                  << " ns=" << r["stats"]["ns_evaluations"] << "\n";
  if (j.contains("stats"))
    std::cout << "qp=" << j.value("qp", 0) << " rate_bits=" << j.value("rate_bits", 0.0)
              << " ns=" << j["stats"]["ns_evaluations"] << "\n";
  return 0;
}

int cmd_synth(const std::string& kind, int width, int height, uint32_t seed,
              const std::string& out) {
  mtt::LumaFrame f =
      mtt::synth_frame(mtt::synth_kind_from_name(kind), width, height, seed);
  mtt::write_pgm(f, out);
  return 0;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(in);
  for (const auto& e : j.value("inputs", json::array())) {
    InputSpec spec;
    spec.path = e.value("path", "");
    spec.format = e.value("format", "pgm");
    spec.synth = e.value("synth", "");
    cfg.inputs.push_back(spec);
  }
  cfg.width = j.value("width", cfg.width);
  cfg.height = j.value("height", cfg.height);
  cfg.ctu = j.value("ctu", cfg.ctu);
  cfg.min_qt = j.value("min_qt", cfg.min_qt);
  cfg.max_mtt_depth = j.value("max_mtt_depth", cfg.max_mtt_depth);
  cfg.max_bt = j.value("max_bt", cfg.max_bt);
  cfg.max_tt = j.value("max_tt", cfg.max_tt);
  cfg.qt_disable_below = j.value("qt_disable_below", cfg.qt_disable_below);
  if (j.contains("qps")) cfg.qps = j["qps"].get<std::vector<int>>();
  cfg.ref_qp = j.value("ref_qp", cfg.ref_qp);
  cfg.guide_mode = j.value("guide_mode", cfg.guide_mode);
  cfg.seed = j.value("seed", cfg.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-rate MTT partitioning encoder"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::vector<std::string> inputs, synths;
  std::string format = "pgm";

  auto* enc = app.add_subcommand("encode", "single unguided representation");
  int enc_qp = 37;
  add_input_flags(enc, cfg, inputs, synths, format);
  add_config_flags(enc, cfg);
  enc->add_option("--qp", enc_qp, "quantization parameter");

  auto* lad = app.add_subcommand("ladder", "reference + dependent representations");
  std::string config_file;
  add_input_flags(lad, cfg, inputs, synths, format);
  add_config_flags(lad, cfg);
  lad->add_option("--qps", cfg.qps, "QP list");
  lad->add_option("--ref-qp", cfg.ref_qp, "reference QP");
  lad->add_option("--guide-mode", cfg.guide_mode, "scalar or per-dim")
      ->check(CLI::IsMember({"scalar", "per-dim"}));
  lad->add_option("--config", config_file, "JSON config file");

  auto* bd = app.add_subcommand("bd", "Bjontegaard delta between two RD CSVs");
  std::string anchor_csv, test_csv, bd_mode = "bd_quality";
  bd->add_option("anchor", anchor_csv, "anchor curve CSV")->required();
  bd->add_option("test", test_csv, "test curve CSV")->required();
  bd->add_option("--mode", bd_mode, "bd_quality or bd_rate")
      ->check(CLI::IsMember({"bd_quality", "bd_rate"}));

  auto* st = app.add_subcommand("stats", "summarize a JSON report");
  std::string report_path;
  st->add_option("--report", report_path, "report file")->required();

  auto* sy = app.add_subcommand("synth", "write a synthetic frame as PGM");
  std::string sy_kind = "noise", sy_out = "frame.pgm";
  int sy_w = 256, sy_h = 256;
  uint32_t sy_seed = 1;
  sy->add_option("--kind", sy_kind, "flat/hgrad/checker/noise");
  sy->add_option("--width", sy_w, "width");
  sy->add_option("--height", sy_h, "height");
  sy->add_option("--seed", sy_seed, "seed");
  sy->add_option("--out", sy_out, "output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (enc->parsed()) {
      collect_inputs(cfg, inputs, synths, format);
      return cmd_encode(cfg, enc_qp);
    }
    if (lad->parsed()) {
      if (!config_file.empty()) load_config_file(cfg, config_file);
      for (const auto& p : inputs) cfg.inputs.push_back({p, format, ""});
      for (const auto& s : synths) cfg.inputs.push_back({"", "", s});
      if (cfg.inputs.empty()) throw std::runtime_error("no inputs configured");
      return cmd_ladder(cfg);
    }
    if (bd->parsed()) return cmd_bd(anchor_csv, test_csv, bd_mode);
    if (st->parsed()) return cmd_stats(report_path);
    if (sy->parsed()) return cmd_synth(sy_kind, sy_w, sy_h, sy_seed, sy_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
