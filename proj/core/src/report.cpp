#include "mtt/report.hpp"

#include <cmath>
#include <sstream>

namespace mtt {

using nlohmann::json;

uint64_t config_hash(const std::string& canonical) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

json psnr_json(double psnr_db) {
  if (std::isinf(psnr_db)) return "inf";
  return psnr_db;
}

json rd_stats_json(const RdStats& s) {
  return json{{"ns_evaluations", s.ns_evaluations},
              {"nodes_visited", s.nodes_visited},
              {"ns_skipped_by_guide", s.ns_skipped_by_guide},
              {"total_rate_bits", s.total_rate_bits},
              {"total_distortion", s.total_distortion},
              {"wall_time_s", s.wall_time_s}};
}

json reduction_json(const ReductionSummary& r) {
  json per_qp = json::array();
  for (const auto& q : r.per_qp)
    per_qp.push_back({{"qp", q.qp},
                      {"ns_reduction", q.ns_reduction},
                      {"wall_reduction", q.wall_reduction}});
  return json{{"per_qp", per_qp},
              {"average_ns_reduction", r.average_ns_reduction},
              {"average_wall_reduction", r.average_wall_reduction},
              {"max_rep_reduction", r.max_rep_reduction}};
}

json similarity_json(const SimilarityReport& report) {
  json out = json::array();
  for (const auto& e : report)
    out.push_back({{"qp", e.qp},
                   {"pct_smaller", e.pct_smaller},
                   {"pct_equal", e.pct_equal},
                   {"pct_larger", e.pct_larger}});
  return out;
}

namespace {

json rep_record_json(const LadderRepRecord& r) {
  return json{{"qp", r.qp},
              {"guided", r.guided},
              {"rate_bits", r.rate_bits},
              {"psnr_db", psnr_json(r.psnr_db)},
              {"stats", rd_stats_json(r.stats)}};
}

}  // namespace

json ladder_report_json(const LadderReport& report, uint64_t cfg_hash,
                        uint32_t seed) {
  json base = json::array(), fast = json::array();
  for (const auto& r : report.baseline) base.push_back(rep_record_json(r));
  for (const auto& r : report.fast) fast.push_back(rep_record_json(r));

  std::ostringstream hash_hex;
  hash_hex << std::hex << cfg_hash;
  return json{{"config_hash", hash_hex.str()},
              {"seed", seed},
              {"ref_qp", report.ref_qp},
              {"guide_mode", guide_mode_name(report.mode)},
              {"qps", report.qps},
              {"baseline", base},
              {"fast", fast},
              {"similarity", similarity_json(report.similarity)},
              {"reduction", reduction_json(report.reduction)}};
}

void strip_timing(json& j) {
  if (j.is_object()) {
    j.erase("wall_time_s");
    j.erase("wall_reduction");
    j.erase("average_wall_reduction");
    for (auto& [k, v] : j.items()) strip_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_timing(v);
  }
}

std::string rd_csv(const std::vector<LadderRepRecord>& records) {
  std::ostringstream out;
  out << "qp,rate_bits,psnr_db,ns_evaluations,nodes_visited,wall_time_s\n";
  for (const auto& r : records) {
    out << r.qp << ',' << r.rate_bits << ',';
    if (std::isinf(r.psnr_db))
      out << "inf";
    else
      out << r.psnr_db;
    out << ',' << r.stats.ns_evaluations << ',' << r.stats.nodes_visited << ','
        << r.stats.wall_time_s << '\n';
  }
  return out.str();
}

}  // namespace mtt
