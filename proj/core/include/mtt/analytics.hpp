#pragma once

#include <string>
#include <vector>

#include "mtt/frame.hpp"
#include "mtt/partition.hpp"
#include "mtt/size_map.hpp"

namespace mtt {

// 10*log10(255^2 / MSE) over the origin region; +infinity when MSE is 0.
double psnr(const LumaFrame& orig, const LumaFrame& recon);
double sse_origin_region(const LumaFrame& orig, const LumaFrame& recon);

// Per-dependent-QP share of NS leaves whose (width, height) are both
// smaller / equal / larger than the reference map entry at the leaf's
// top-left sub-block. Mixed-dimension cases are uncounted, so the three
// percentages need not sum to 100.
struct SimilarityCounts {
  double smaller = 0, equal = 0, larger = 0, total = 0;
  SimilarityCounts& operator+=(const SimilarityCounts& o);
};

struct SimilarityEntry {
  int qp = 0;
  double pct_smaller = 0, pct_equal = 0, pct_larger = 0;
};

using SimilarityReport = std::vector<SimilarityEntry>;

// per_area weights each leaf by its 4x4 sub-block count instead of 1.
SimilarityCounts similarity_counts(const std::vector<SizeMap>& ref_maps, int ctus_x,
                                   int ctu_size,
                                   const std::vector<PartitionTree>& dep_trees,
                                   bool per_area = false);
SimilarityEntry similarity_from_counts(int qp, const SimilarityCounts& c);

// A rate-quality curve; rates strictly increasing and positive.
struct RdCurve {
  std::vector<std::pair<double, double>> points;  // (rate_bits, quality_db)
};

enum class BdMode { Quality, Rate };

// Classic Bjontegaard delta: cubic fit of quality against log10(rate)
// (inverse for BdMode::Rate), integrated over the common range. Quality mode
// returns dB; Rate mode returns percent.
double bd_delta(const RdCurve& anchor, const RdCurve& test, BdMode mode);

struct QpReduction {
  int qp = 0;
  double ns_reduction = 0.0;    // 1 - fast/baseline NS evaluations
  double wall_reduction = 0.0;  // wall-time analog
};

struct ReductionSummary {
  std::vector<QpReduction> per_qp;       // dependent QPs only
  double average_ns_reduction = 0.0;     // mean over dependent QPs
  double average_wall_reduction = 0.0;
  double max_rep_reduction = 0.0;  // latency proxy: reduction of the max
                                   // over the dependent representations
                                   // per-representation NS count
};

ReductionSummary reduction_report(const std::vector<std::pair<int, RdStats>>& baseline,
                                  const std::vector<std::pair<int, RdStats>>& fast,
                                  int ref_qp);

}  // namespace mtt
