#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtt/codec.hpp"
#include "mtt/frame.hpp"

namespace mtt {

// The six split modes. The enumeration order is also the deterministic
// tie-breaking order used by both searchers.
enum class SplitType : uint8_t { NS = 0, QT, HBT, VBT, HTT, VTT };

const char* split_name(SplitType s);
std::optional<SplitType> split_from_name(const std::string& name);

struct CuGeom {
  int x = 0, y = 0;           // top-left, frame coordinates, multiples of 4
  int width = 0, height = 0;  // each in {4,8,16,32,64,128}
  int qt_depth = 0;
  int mtt_depth = 0;
  bool inside_mtt = false;

  bool operator==(const CuGeom&) const = default;
};

struct PartitionConstraints {
  int ctu_size = 64;
  int min_cu = 4;
  int min_qt_size = 8;
  int max_mtt_depth = 3;
  int max_bt_size = 64;
  int max_tt_size = 32;
  // When set, QT is off for CUs with width <= this value.
  std::optional<int> qt_disabled_below;
};

// Legality rules (NS always allowed, result ordered NS..VTT):
//   QT   square, width >= 2*min_qt_size, not inside MTT, width above the
//        optional QT-disable threshold
//   BT   split dimension >= 2*min_cu, max side <= max_bt_size, MTT budget left
//   TT   split dimension >= 4*min_cu, max side <= max_tt_size, MTT budget left
std::vector<SplitType> legal_splits(const CuGeom& geom,
                                    const PartitionConstraints& cons);

// Child geometries in raster order; TT splits the dimension 1/4, 1/2, 1/4.
// QT bumps qt_depth; BT/TT bump mtt_depth and set inside_mtt.
std::vector<CuGeom> split_children(const CuGeom& geom, SplitType split);

// ceil(log2(choices)) bits, charged once per node with more than one option.
double signal_bits(size_t legal_count);

struct PartitionTree {
  CuGeom geom;
  SplitType split = SplitType::NS;
  std::vector<PartitionTree> children;              // empty iff split == NS
  std::optional<CodedBlock> leaf_coding;            // present iff split == NS
};

struct RdStats {
  uint64_t ns_evaluations = 0;
  uint64_t nodes_visited = 0;
  uint64_t ns_skipped_by_guide = 0;
  double total_rate_bits = 0.0;
  double total_distortion = 0.0;
  double wall_time_s = 0.0;

  RdStats& operator+=(const RdStats& o);
};

// Returns true when NS may be evaluated at this node; consulted only at
// nodes where splits other than NS are legal.
using NsGate =
    std::function<bool(const CuGeom& geom, const std::vector<SplitType>& legal)>;

struct SearchResult {
  PartitionTree tree;
  double cost = 0.0;
  RdStats stats;
};

// Depth-first RD-optimal search over one CTU. J(NS) = D + lambda*(R + sig),
// J(split) = lambda*sig + sum of child J. Ties break toward the earlier
// split in enum order. Exact because J is additive over children.
SearchResult rdo_search(const LumaFrame& frame, int ctu_x, int ctu_y,
                        const QpParams& qp, const PartitionConstraints& cons,
                        const NsGate* gate = nullptr);

// Number of complete legal partition trees rooted at geom, saturating at cap.
uint64_t count_partition_trees(const CuGeom& geom, const PartitionConstraints& cons,
                               uint64_t cap);

struct OracleResult {
  PartitionTree tree;
  double min_cost = 0.0;
  uint64_t tree_count = 0;
};

// Enumerates every legal partition tree (no subtree-optimum reuse) and
// returns the exact minimum; equal costs resolve to the lexicographically
// smallest preorder split serialization. Refuses when the tree count
// reaches 10^7.
OracleResult exhaustive_oracle(const LumaFrame& frame, int ctu_x, int ctu_y,
                               const QpParams& qp, const PartitionConstraints& cons);

// Hierarchical text form, one node per line:
//   "<indent><SPLIT> <x> <y> <width> <height>"
std::string tree_to_text(const PartitionTree& tree);
PartitionTree tree_from_text(const std::string& text);

// Visits every NS leaf.
void for_each_leaf(const PartitionTree& tree,
                   const std::function<void(const PartitionTree&)>& fn);

}  // namespace mtt
