#pragma once

#include <cstdint>
#include <vector>

#include "mtt/analytics.hpp"
#include "mtt/frame.hpp"
#include "mtt/partition.hpp"
#include "mtt/size_map.hpp"

namespace mtt {

enum class GuideMode { Scalar, PerDimension };
enum class SkipDecision { EvaluateNS, ExcludeNS };

const char* guide_mode_name(GuideMode m);
GuideMode guide_mode_from_name(const std::string& name);

// Reference size maps covering one frame, one per CTU.
struct SkipGuide {
  int ctu_size = 0;
  int ctus_x = 0, ctus_y = 0;
  GuideMode mode = GuideMode::Scalar;
  std::vector<SizeMap> maps;  // row-major over the CTU grid

  const SizeMap& map_at(int cx, int cy) const {
    return maps[size_t(cy) * ctus_x + cx];
  }
};

SkipGuide build_guide(const std::vector<PartitionTree>& ctu_trees, int frame_width,
                      int frame_height, int ctu_size, GuideMode mode);

// The CU-size skip rule: when splits other than NS are legal and the current
// CU exceeds the reference map's max size over its footprint, NS is excluded
// and the CU is split further. geom is in frame coordinates.
SkipDecision skip_decision(const CuGeom& geom, const std::vector<SplitType>& legal,
                           const SkipGuide& guide);

struct RepresentationResult {
  int qp = 0;
  bool guided = false;
  std::vector<PartitionTree> trees;  // row-major CTU order
  std::vector<double> ctu_costs;     // per-CTU minimum J
  RdStats stats;
  double rate_bits = 0.0;
  double psnr_db = 0.0;
  double sse_origin = 0.0;           // squared error over the origin region
};

// Encodes one representation, one rdo_search per CTU (parallel across CTUs
// when workers != 1; workers == 0 means hardware concurrency). PSNR covers
// the origin region only.
RepresentationResult encode_representation(const LumaFrame& frame, int qp,
                                           const PartitionConstraints& cons,
                                           const SkipGuide* guide = nullptr,
                                           int workers = 0);

// Assembles the reconstruction from the trees' leaf codings.
LumaFrame reconstruct_frame(const LumaFrame& frame, const std::vector<PartitionTree>& trees);

// One ladder entry: a representation aggregated over all input frames.
struct LadderRepRecord {
  int qp = 0;
  bool guided = false;
  double rate_bits = 0.0;
  double psnr_db = 0.0;  // corpus-level (pooled squared error)
  RdStats stats;
  std::vector<RepresentationResult> per_frame;
};

struct LadderReport {
  int ref_qp = 0;
  GuideMode mode = GuideMode::Scalar;
  std::vector<int> qps;
  std::vector<LadderRepRecord> baseline;  // one per QP, unguided
  std::vector<LadderRepRecord> fast;      // one per QP; ref entry is unguided
  std::vector<std::vector<SizeMap>> guides;  // per frame, per CTU
  SimilarityReport similarity;               // baseline dependents vs reference
  ReductionSummary reduction;
};

// Encodes the reference unguided, builds guides, then encodes each dependent
// QP both unguided (baseline) and guided (fast). The reference must finish
// before any dependent starts; dependents then share the read-only guides.
LadderReport run_ladder(const std::vector<LumaFrame>& frames,
                        const std::vector<int>& qps, int ref_qp,
                        const PartitionConstraints& cons, GuideMode mode,
                        int workers = 0);

}  // namespace mtt
