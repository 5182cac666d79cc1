#include "mtt/partition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mtt {

const char* split_name(SplitType s) {
  switch (s) {
    case SplitType::NS: return "NS";
    case SplitType::QT: return "QT";
    case SplitType::HBT: return "HBT";
    case SplitType::VBT: return "VBT";
    case SplitType::HTT: return "HTT";
    case SplitType::VTT: return "VTT";
  }
  return "?";
}

std::optional<SplitType> split_from_name(const std::string& name) {
  for (uint8_t i = 0; i <= uint8_t(SplitType::VTT); ++i)
    if (name == split_name(SplitType(i))) return SplitType(i);
  return std::nullopt;
}

std::vector<SplitType> legal_splits(const CuGeom& g, const PartitionConstraints& c) {
  std::vector<SplitType> out;
  out.push_back(SplitType::NS);

  bool qt_ok = g.width == g.height && g.width >= 2 * c.min_qt_size && !g.inside_mtt;
  if (qt_ok && c.qt_disabled_below && g.width <= *c.qt_disabled_below) qt_ok = false;
  if (qt_ok) out.push_back(SplitType::QT);

  int max_side = std::max(g.width, g.height);
  bool mtt_budget = g.mtt_depth < c.max_mtt_depth;
  if (mtt_budget && max_side <= c.max_bt_size) {
    if (g.height >= 2 * c.min_cu) out.push_back(SplitType::HBT);
    if (g.width >= 2 * c.min_cu) out.push_back(SplitType::VBT);
  }
  if (mtt_budget && max_side <= c.max_tt_size) {
    if (g.height >= 4 * c.min_cu) out.push_back(SplitType::HTT);
    if (g.width >= 4 * c.min_cu) out.push_back(SplitType::VTT);
  }
  // Keep enum order: TT entries were appended after BT, and HTT/VTT follow
  // HBT/VBT already, so the vector is sorted by construction.
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CuGeom> split_children(const CuGeom& g, SplitType split) {
  std::vector<CuGeom> ch;
  auto child = [&](int x, int y, int w, int h, bool mtt) {
    CuGeom c = g;
    c.x = x;
    c.y = y;
    c.width = w;
    c.height = h;
    if (mtt) {
      c.mtt_depth = g.mtt_depth + 1;
      c.inside_mtt = true;
    } else {
      c.qt_depth = g.qt_depth + 1;
    }
    ch.push_back(c);
  };
  int w = g.width, h = g.height;
  switch (split) {
    case SplitType::QT:
      child(g.x, g.y, w / 2, h / 2, false);
      child(g.x + w / 2, g.y, w / 2, h / 2, false);
      child(g.x, g.y + h / 2, w / 2, h / 2, false);
      child(g.x + w / 2, g.y + h / 2, w / 2, h / 2, false);
      break;
    case SplitType::HBT:
      child(g.x, g.y, w, h / 2, true);
      child(g.x, g.y + h / 2, w, h / 2, true);
      break;
    case SplitType::VBT:
      child(g.x, g.y, w / 2, h, true);
      child(g.x + w / 2, g.y, w / 2, h, true);
      break;
    case SplitType::HTT:
      child(g.x, g.y, w, h / 4, true);
      child(g.x, g.y + h / 4, w, h / 2, true);
      child(g.x, g.y + 3 * h / 4, w, h / 4, true);
      break;
    case SplitType::VTT:
      child(g.x, g.y, w / 4, h, true);
      child(g.x + w / 4, g.y, w / 2, h, true);
      child(g.x + 3 * w / 4, g.y, w / 4, h, true);
      break;
    case SplitType::NS:
      throw std::invalid_argument("NS has no children");
  }
  return ch;
}

double signal_bits(size_t legal_count) {
  if (legal_count <= 1) return 0.0;
  return std::ceil(std::log2(double(legal_count)));
}

RdStats& RdStats::operator+=(const RdStats& o) {
  ns_evaluations += o.ns_evaluations;
  nodes_visited += o.nodes_visited;
  ns_skipped_by_guide += o.ns_skipped_by_guide;
  total_rate_bits += o.total_rate_bits;
  total_distortion += o.total_distortion;
  wall_time_s += o.wall_time_s;
  return *this;
}

namespace {

struct Searcher {
  const LumaFrame& frame;
  const QpParams& qp;
  const PartitionConstraints& cons;
  const NsGate* gate;
  RdStats stats;

  // Returns the optimal subtree and its cost J.
  std::pair<PartitionTree, double> search(const CuGeom& geom) {
    ++stats.nodes_visited;
    std::vector<SplitType> legal = legal_splits(geom, cons);
    double sig = signal_bits(legal.size());

    PartitionTree best;
    double best_cost = 0.0;
    bool have_best = false;

    bool eval_ns = true;
    if (gate && legal.size() > 1 && !(*gate)(geom, legal)) {
      eval_ns = false;
      ++stats.ns_skipped_by_guide;
    }
    if (eval_ns) {
      CodedBlock cb = code_block(frame, geom.x, geom.y, geom.width, geom.height, qp);
      ++stats.ns_evaluations;
      best_cost = cb.distortion + qp.lambda * (cb.rate_bits + sig);
      best.geom = geom;
      best.split = SplitType::NS;
      best.leaf_coding = std::move(cb);
      have_best = true;
    }

    for (SplitType s : legal) {
      if (s == SplitType::NS) continue;
      double cost = qp.lambda * sig;
      std::vector<PartitionTree> kids;
      for (const CuGeom& cg : split_children(geom, s)) {
        auto [sub, sub_cost] = search(cg);
        cost += sub_cost;
        kids.push_back(std::move(sub));
      }
      if (!have_best || cost < best_cost) {
        best = PartitionTree{geom, s, std::move(kids), std::nullopt};
        best_cost = cost;
        have_best = true;
      }
    }
    return {std::move(best), best_cost};
  }
};

void accumulate_totals(const PartitionTree& t, const PartitionConstraints& cons,
                       RdStats& stats) {
  double sig = signal_bits(legal_splits(t.geom, cons).size());
  stats.total_rate_bits += sig;
  if (t.split == SplitType::NS) {
    stats.total_rate_bits += t.leaf_coding->rate_bits;
    stats.total_distortion += t.leaf_coding->distortion;
  } else {
    for (const auto& c : t.children) accumulate_totals(c, cons, stats);
  }
}

}  // namespace

SearchResult rdo_search(const LumaFrame& frame, int ctu_x, int ctu_y,
                        const QpParams& qp, const PartitionConstraints& cons,
                        const NsGate* gate) {
  if (ctu_x % cons.ctu_size || ctu_y % cons.ctu_size ||
      ctu_x + cons.ctu_size > frame.width || ctu_y + cons.ctu_size > frame.height)
    throw std::invalid_argument("ctu origin not on the frame's CTU grid");

  auto t0 = std::chrono::steady_clock::now();
  Searcher s{frame, qp, cons, gate, {}};
  CuGeom root{ctu_x, ctu_y, cons.ctu_size, cons.ctu_size, 0, 0, false};
  auto [tree, cost] = s.search(root);
  accumulate_totals(tree, cons, s.stats);
  s.stats.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return SearchResult{std::move(tree), cost, std::move(s.stats)};
}

uint64_t count_partition_trees(const CuGeom& geom, const PartitionConstraints& cons,
                               uint64_t cap) {
  uint64_t total = 0;
  for (SplitType s : legal_splits(geom, cons)) {
    if (s == SplitType::NS) {
      total += 1;
    } else {
      uint64_t prod = 1;
      for (const CuGeom& c : split_children(geom, s)) {
        uint64_t sub = count_partition_trees(c, cons, cap);
        if (sub >= cap || prod >= cap / std::max<uint64_t>(sub, 1)) {
          prod = cap;
          break;
        }
        prod *= sub;
      }
      total += prod;
    }
    if (total >= cap) return cap;
  }
  return total;
}

namespace {

struct OracleCand {
  double cost;
  std::vector<uint8_t> serial;  // preorder split indices
};

struct Oracle {
  const LumaFrame& frame;
  const QpParams& qp;
  const PartitionConstraints& cons;
  std::unordered_map<uint64_t, CodedBlock> leaf_cache;

  const CodedBlock& leaf(const CuGeom& g) {
    uint64_t key = (uint64_t(uint16_t(g.x)) << 48) | (uint64_t(uint16_t(g.y)) << 32) |
                   (uint64_t(uint16_t(g.width)) << 16) | uint64_t(uint16_t(g.height));
    auto it = leaf_cache.find(key);
    if (it == leaf_cache.end())
      it = leaf_cache
               .emplace(key, code_block(frame, g.x, g.y, g.width, g.height, qp))
               .first;
    return it->second;
  }

  std::vector<OracleCand> enumerate(const CuGeom& geom) {
    std::vector<SplitType> legal = legal_splits(geom, cons);
    double sig = signal_bits(legal.size());
    std::vector<OracleCand> out;

    for (SplitType s : legal) {
      if (s == SplitType::NS) {
        const CodedBlock& cb = leaf(geom);
        out.push_back({cb.distortion + qp.lambda * (cb.rate_bits + sig),
                       {uint8_t(SplitType::NS)}});
        continue;
      }
      std::vector<std::vector<OracleCand>> child_cands;
      for (const CuGeom& c : split_children(geom, s))
        child_cands.push_back(enumerate(c));

      // Cartesian product over child subtrees, costs folded left so the
      // arithmetic matches rdo_search bit for bit.
      std::vector<size_t> idx(child_cands.size(), 0);
      for (;;) {
        OracleCand cand;
        cand.cost = qp.lambda * sig;
        cand.serial.push_back(uint8_t(s));
        for (size_t i = 0; i < idx.size(); ++i) {
          const OracleCand& cc = child_cands[i][idx[i]];
          cand.cost += cc.cost;
          cand.serial.insert(cand.serial.end(), cc.serial.begin(), cc.serial.end());
        }
        out.push_back(std::move(cand));
        size_t i = idx.size();
        while (i > 0) {
          --i;
          if (++idx[i] < child_cands[i].size()) break;
          idx[i] = 0;
          if (i == 0) goto done;
        }
        if (idx.size() == 0) break;
      }
    done:;
    }
    return out;
  }

  PartitionTree decode(const std::vector<uint8_t>& serial, size_t& pos,
                       const CuGeom& geom) {
    SplitType s = SplitType(serial.at(pos++));
    PartitionTree t;
    t.geom = geom;
    t.split = s;
    if (s == SplitType::NS) {
      t.leaf_coding = leaf(geom);
    } else {
      for (const CuGeom& c : split_children(geom, s))
        t.children.push_back(decode(serial, pos, c));
    }
    return t;
  }
};

}  // namespace

OracleResult exhaustive_oracle(const LumaFrame& frame, int ctu_x, int ctu_y,
                               const QpParams& qp, const PartitionConstraints& cons) {
  CuGeom root{ctu_x, ctu_y, cons.ctu_size, cons.ctu_size, 0, 0, false};
  constexpr uint64_t kCap = 10'000'000;
  uint64_t count = count_partition_trees(root, cons, kCap);
  if (count >= kCap)
    throw std::runtime_error("exhaustive_oracle: search space has at least " +
                             std::to_string(count) + " trees, above the 10^7 bound");

  Oracle o{frame, qp, cons, {}};
  std::vector<OracleCand> cands = o.enumerate(root);

  const OracleCand* best = &cands.front();
  for (const OracleCand& c : cands) {
    if (c.cost < best->cost ||
        (c.cost == best->cost && c.serial < best->serial))
      best = &c;
  }
  size_t pos = 0;
  PartitionTree tree = o.decode(best->serial, pos, root);
  return OracleResult{std::move(tree), best->cost, uint64_t(cands.size())};
}

namespace {

void write_node(const PartitionTree& t, int depth, std::ostringstream& out) {
  for (int i = 0; i < depth; ++i) out << "  ";
  out << split_name(t.split) << ' ' << t.geom.x << ' ' << t.geom.y << ' '
      << t.geom.width << ' ' << t.geom.height << '\n';
  for (const auto& c : t.children) write_node(c, depth + 1, out);
}

}  // namespace

std::string tree_to_text(const PartitionTree& tree) {
  std::ostringstream out;
  write_node(tree, 0, out);
  return out.str();
}

PartitionTree tree_from_text(const std::string& text) {
  struct Line {
    int depth;
    PartitionTree node;
  };
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    if (raw.empty()) continue;
    size_t indent = raw.find_first_not_of(' ');
    if (indent == std::string::npos || indent % 2 != 0)
      throw std::runtime_error("tree text: bad indentation");
    std::istringstream ls(raw.substr(indent));
    std::string name;
    PartitionTree node;
    if (!(ls >> name >> node.geom.x >> node.geom.y >> node.geom.width >>
          node.geom.height))
      throw std::runtime_error("tree text: bad node line: " + raw);
    auto s = split_from_name(name);
    if (!s) throw std::runtime_error("tree text: unknown split: " + name);
    node.split = *s;
    lines.push_back({int(indent / 2), std::move(node)});
  }
  if (lines.empty()) throw std::runtime_error("tree text: empty input");

  // Rebuild the hierarchy from indentation with a spine of open nodes.
  std::vector<PartitionTree*> spine;
  PartitionTree root = std::move(lines[0].node);
  if (lines[0].depth != 0) throw std::runtime_error("tree text: root must be depth 0");
  spine.push_back(&root);
  for (size_t i = 1; i < lines.size(); ++i) {
    int d = lines[i].depth;
    if (d < 1 || d > int(spine.size()))
      throw std::runtime_error("tree text: inconsistent depth");
    spine.resize(size_t(d));
    PartitionTree* parent = spine.back();
    parent->children.push_back(std::move(lines[i].node));
    spine.push_back(&parent->children.back());
  }
  return root;
}

void for_each_leaf(const PartitionTree& tree,
                   const std::function<void(const PartitionTree&)>& fn) {
  if (tree.split == SplitType::NS) {
    fn(tree);
    return;
  }
  for (const auto& c : tree.children) for_each_leaf(c, fn);
}

}  // namespace mtt
