#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "mtt/partition.hpp"

using namespace mtt;

namespace {

// The small-CTU configuration used for exhaustive cross-checks: 16x16 CTU,
// QT disabled at 8x8, combined depth budget of 3 expressed as
// (min_qt_size = 8, max_mtt_depth = 3).
PartitionConstraints small_config() {
  PartitionConstraints c;
  c.ctu_size = 16;
  c.min_cu = 4;
  c.min_qt_size = 8;
  c.max_mtt_depth = 3;
  c.max_bt_size = 16;
  c.max_tt_size = 16;
  c.qt_disabled_below = 8;
  return c;
}

// Independent tree counter, written against the rules directly rather than
// through count_partition_trees.
uint64_t count_oracle(const CuGeom& g, const PartitionConstraints& c) {
  uint64_t total = 0;
  for (SplitType s : legal_splits(g, c)) {
    if (s == SplitType::NS) {
      ++total;
      continue;
    }
    uint64_t prod = 1;
    for (const CuGeom& child : split_children(g, s)) prod *= count_oracle(child, c);
    total += prod;
  }
  return total;
}

bool trees_equal(const PartitionTree& a, const PartitionTree& b) {
  if (a.split != b.split || !(a.geom == b.geom)) return false;
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!trees_equal(a.children[i], b.children[i])) return false;
  return true;
}

void check_tiling(const PartitionTree& tree) {
  const CuGeom& root = tree.geom;
  std::vector<int> cover(size_t(root.width) * root.height, 0);
  for_each_leaf(tree, [&](const PartitionTree& leaf) {
    for (int y = 0; y < leaf.geom.height; ++y)
      for (int x = 0; x < leaf.geom.width; ++x) {
        int fx = leaf.geom.x - root.x + x;
        int fy = leaf.geom.y - root.y + y;
        REQUIRE(fx >= 0);
        REQUIRE(fy >= 0);
        REQUIRE(fx < root.width);
        REQUIRE(fy < root.height);
        ++cover[size_t(fy) * root.width + fx];
      }
  });
  for (int c : cover) CHECK(c == 1);
}

}  // namespace

TEST_CASE("legal splits at the 16x16 root include all six types") {
  auto cons = small_config();
  CuGeom root{0, 0, 16, 16, 0, 0, false};
  auto legal = legal_splits(root, cons);
  CHECK(legal == std::vector<SplitType>{SplitType::NS, SplitType::QT, SplitType::HBT,
                                        SplitType::VBT, SplitType::HTT,
                                        SplitType::VTT});
}

TEST_CASE("8x8 under the small config allows only NS and binary splits") {
  auto cons = small_config();
  CuGeom g{0, 0, 8, 8, 1, 0, false};
  auto legal = legal_splits(g, cons);
  CHECK(legal == std::vector<SplitType>{SplitType::NS, SplitType::HBT, SplitType::VBT});
}

TEST_CASE("4x4 allows only NS") {
  auto cons = small_config();
  CuGeom g{0, 0, 4, 4, 2, 0, false};
  CHECK(legal_splits(g, cons) == std::vector<SplitType>{SplitType::NS});
}

TEST_CASE("QT is not available inside the MTT") {
  PartitionConstraints cons;
  cons.ctu_size = 64;
  CuGeom g{0, 0, 32, 32, 0, 1, true};
  for (SplitType s : legal_splits(g, cons)) CHECK(s != SplitType::QT);
}

TEST_CASE("split children geometry") {
  CuGeom g32{0, 0, 32, 32, 0, 0, false};
  auto qt = split_children(g32, SplitType::QT);
  REQUIRE(qt.size() == 4);
  CHECK(qt[0].x == 0);
  CHECK(qt[1].x == 16);
  CHECK(qt[2].y == 16);
  CHECK(qt[3].x == 16);
  CHECK(qt[3].y == 16);
  for (const auto& c : qt) {
    CHECK(c.width == 16);
    CHECK(c.qt_depth == 1);
    CHECK_FALSE(c.inside_mtt);
  }

  CuGeom g16{0, 0, 16, 16, 0, 0, false};
  auto vtt = split_children(g16, SplitType::VTT);
  REQUIRE(vtt.size() == 3);
  CHECK(vtt[0].width == 4);
  CHECK(vtt[1].width == 8);
  CHECK(vtt[2].width == 4);
  CHECK(vtt[1].x == 4);
  CHECK(vtt[2].x == 12);
  for (const auto& c : vtt) {
    CHECK(c.mtt_depth == 1);
    CHECK(c.inside_mtt);
  }

  CuGeom g168{0, 0, 16, 8, 0, 0, false};
  auto hbt = split_children(g168, SplitType::HBT);
  REQUIRE(hbt.size() == 2);
  CHECK(hbt[0].height == 4);
  CHECK(hbt[1].y == 4);
  CHECK(hbt[1].width == 16);

  CHECK_THROWS_AS(split_children(g16, SplitType::NS), std::invalid_argument);
}

TEST_CASE("signal bits") {
  CHECK(signal_bits(1) == 0.0);
  CHECK(signal_bits(2) == 1.0);
  CHECK(signal_bits(3) == 2.0);
  CHECK(signal_bits(6) == 3.0);
}

TEST_CASE("flat CTU stays unsplit") {
  auto cons = small_config();
  LumaFrame f = synth_frame(SynthKind::Flat, 16, 16, 0);
  auto res = rdo_search(f, 0, 0, qp_params(27), cons);
  CHECK(res.tree.split == SplitType::NS);
  CHECK(res.stats.ns_skipped_by_guide == 0);
}

TEST_CASE("tree count matches the independent recursion") {
  auto cons = small_config();
  CuGeom root{0, 0, 16, 16, 0, 0, false};
  uint64_t expect = count_oracle(root, cons);
  CHECK(count_partition_trees(root, cons, 10'000'000) == expect);

  LumaFrame f = synth_frame(SynthKind::Noise, 16, 16, 17);
  auto oracle = exhaustive_oracle(f, 0, 0, qp_params(32), cons);
  CHECK(oracle.tree_count == expect);
}

TEST_CASE("oracle refuses oversized search spaces") {
  PartitionConstraints cons;
  cons.ctu_size = 64;
  cons.min_qt_size = 8;
  cons.max_mtt_depth = 3;
  cons.max_bt_size = 64;
  cons.max_tt_size = 64;
  LumaFrame f = synth_frame(SynthKind::Noise, 64, 64, 1);
  try {
    exhaustive_oracle(f, 0, 0, qp_params(27), cons);
    FAIL("expected refusal");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("10^7") != std::string::npos);
  }
}

TEST_CASE("search equals the exhaustive oracle on seeded CTUs") {
  auto cons = small_config();
  for (uint32_t seed = 0; seed < 10; ++seed) {
    LumaFrame f = synth_frame(SynthKind::Noise, 16, 16, seed);
    for (int qp : {22, 37}) {
      auto fast = rdo_search(f, 0, 0, qp_params(qp), cons);
      auto slow = exhaustive_oracle(f, 0, 0, qp_params(qp), cons);
      CHECK(fast.cost == slow.min_cost);
      CHECK(trees_equal(fast.tree, slow.tree));
    }
  }
}

TEST_CASE("leaves tile the CTU and counters stay sane") {
  auto cons = small_config();
  for (uint32_t seed = 20; seed < 26; ++seed) {
    LumaFrame f = synth_frame(SynthKind::Noise, 16, 16, seed);
    auto res = rdo_search(f, 0, 0, qp_params(27), cons);
    check_tiling(res.tree);
    CHECK(res.stats.ns_skipped_by_guide == 0);
    CHECK(res.stats.ns_evaluations + res.stats.ns_skipped_by_guide <=
          res.stats.nodes_visited);
  }
}

TEST_CASE("a gate that blocks large CUs forces a split at the root") {
  auto cons = small_config();
  LumaFrame f = synth_frame(SynthKind::Noise, 16, 16, 3);
  // Reference partitioned to 8x8: exclude NS above that size.
  NsGate gate = [](const CuGeom& g, const std::vector<SplitType>&) {
    return g.width <= 8 && g.height <= 8;
  };
  auto guided = rdo_search(f, 0, 0, qp_params(27), cons, &gate);
  auto plain = rdo_search(f, 0, 0, qp_params(27), cons);
  CHECK(guided.stats.ns_skipped_by_guide >= 1);
  CHECK(guided.tree.split != SplitType::NS);
  CHECK(guided.cost >= plain.cost);
  CHECK(guided.stats.ns_evaluations < plain.stats.ns_evaluations);
}

TEST_CASE("tree text roundtrip") {
  auto cons = small_config();
  LumaFrame f = synth_frame(SynthKind::Noise, 16, 16, 5);
  auto res = rdo_search(f, 0, 0, qp_params(22), cons);
  std::string text = tree_to_text(res.tree);
  PartitionTree parsed = tree_from_text(text);
  CHECK(tree_to_text(parsed) == text);
  CHECK_THROWS(tree_from_text("BOGUS 0 0 16 16\n"));
  CHECK_THROWS(tree_from_text(""));
}
