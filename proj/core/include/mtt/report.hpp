#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"
#include "mtt/analytics.hpp"
#include "mtt/orchestrator.hpp"

namespace mtt {

// FNV-1a over the canonical config string; embedded in every report so a
// rerun with the same config is recognizable.
uint64_t config_hash(const std::string& canonical);

// Infinite PSNR serializes as the string "inf" (JSON has no infinity).
nlohmann::json psnr_json(double psnr_db);

nlohmann::json rd_stats_json(const RdStats& stats);
nlohmann::json reduction_json(const ReductionSummary& summary);
nlohmann::json similarity_json(const SimilarityReport& report);
nlohmann::json ladder_report_json(const LadderReport& report, uint64_t cfg_hash,
                                  uint32_t seed);

// Removes wall-time fields in place; used when comparing reports for
// determinism.
void strip_timing(nlohmann::json& j);

// CSV with header "qp,rate_bits,psnr_db,ns_evaluations,nodes_visited,wall_time_s".
std::string rd_csv(const std::vector<LadderRepRecord>& records);

}  // namespace mtt
