#include "mtt/orchestrator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace mtt {

const char* guide_mode_name(GuideMode m) {
  return m == GuideMode::Scalar ? "scalar" : "per-dim";
}

GuideMode guide_mode_from_name(const std::string& name) {
  if (name == "scalar") return GuideMode::Scalar;
  if (name == "per-dim" || name == "per_dimension") return GuideMode::PerDimension;
  throw std::invalid_argument("unknown guide mode: " + name);
}

SkipGuide build_guide(const std::vector<PartitionTree>& ctu_trees, int frame_width,
                      int frame_height, int ctu_size, GuideMode mode) {
  SkipGuide g;
  g.ctu_size = ctu_size;
  g.ctus_x = frame_width / ctu_size;
  g.ctus_y = frame_height / ctu_size;
  g.mode = mode;
  if (ctu_trees.size() != size_t(g.ctus_x) * g.ctus_y)
    throw std::invalid_argument("guide: tree count does not cover the frame");
  g.maps.reserve(ctu_trees.size());
  for (const auto& t : ctu_trees) g.maps.push_back(extract_size_map(t));
  return g;
}

SkipDecision skip_decision(const CuGeom& geom, const std::vector<SplitType>& legal,
                           const SkipGuide& guide) {
  if (legal.size() <= 1) return SkipDecision::EvaluateNS;

  if (geom.x < 0 || geom.y < 0 || geom.x + geom.width > guide.ctus_x * guide.ctu_size ||
      geom.y + geom.height > guide.ctus_y * guide.ctu_size)
    throw std::invalid_argument("skip_decision: geometry outside guide coverage");

  int cx = geom.x / guide.ctu_size;
  int cy = geom.y / guide.ctu_size;
  const SizeMap& map = guide.map_at(cx, cy);
  int lx = geom.x % guide.ctu_size;
  int ly = geom.y % guide.ctu_size;

  if (guide.mode == GuideMode::Scalar) {
    int max_sz = max_size_in_region(map, lx, ly, geom.width, geom.height);
    return (geom.width <= max_sz && geom.height <= max_sz) ? SkipDecision::EvaluateNS
                                                           : SkipDecision::ExcludeNS;
  }
  auto [mw, mh] = max_dims_in_region(map, lx, ly, geom.width, geom.height);
  return (geom.width <= mw && geom.height <= mh) ? SkipDecision::EvaluateNS
                                                 : SkipDecision::ExcludeNS;
}

namespace {

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  if (workers <= 0) workers = int(std::thread::hardware_concurrency());
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  int count = std::min(workers, n);
  for (int t = 0; t < count; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(error_mu);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

RepresentationResult encode_representation(const LumaFrame& frame, int qp,
                                           const PartitionConstraints& cons,
                                           const SkipGuide* guide, int workers) {
  if (frame.width % cons.ctu_size || frame.height % cons.ctu_size)
    throw std::invalid_argument("encode: frame not padded to the CTU grid");
  if (guide) {
    if (guide->ctu_size != cons.ctu_size ||
        guide->ctus_x != frame.width / cons.ctu_size ||
        guide->ctus_y != frame.height / cons.ctu_size)
      throw std::invalid_argument("encode: guide grid does not match the frame");
  }

  int ctus_x = frame.width / cons.ctu_size;
  int ctus_y = frame.height / cons.ctu_size;
  int n = ctus_x * ctus_y;

  QpParams qpp = qp_params(qp);
  NsGate gate;
  if (guide)
    gate = [guide](const CuGeom& g, const std::vector<SplitType>& legal) {
      return skip_decision(g, legal, *guide) == SkipDecision::EvaluateNS;
    };

  std::vector<SearchResult> results(static_cast<size_t>(n));
  parallel_for(n, workers, [&](int i) {
    int cx = i % ctus_x, cy = i / ctus_x;
    results[size_t(i)] = rdo_search(frame, cx * cons.ctu_size, cy * cons.ctu_size,
                                    qpp, cons, guide ? &gate : nullptr);
  });

  RepresentationResult out;
  out.qp = qp;
  out.guided = guide != nullptr;
  out.trees.reserve(size_t(n));
  out.ctu_costs.reserve(size_t(n));
  for (auto& r : results) {
    out.stats += r.stats;
    out.ctu_costs.push_back(r.cost);
    out.trees.push_back(std::move(r.tree));
  }
  out.rate_bits = out.stats.total_rate_bits;

  LumaFrame recon = reconstruct_frame(frame, out.trees);
  out.sse_origin = sse_origin_region(frame, recon);
  out.psnr_db = psnr(frame, recon);
  return out;
}

LumaFrame reconstruct_frame(const LumaFrame& frame,
                            const std::vector<PartitionTree>& trees) {
  LumaFrame recon = frame;
  for (const auto& tree : trees)
    for_each_leaf(tree, [&](const PartitionTree& leaf) {
      const CuGeom& g = leaf.geom;
      const CodedBlock& cb = *leaf.leaf_coding;
      for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x)
          recon.at(g.x + x, g.y + y) = cb.reconstruction[size_t(y) * g.width + x];
    });
  return recon;
}

LadderReport run_ladder(const std::vector<LumaFrame>& frames,
                        const std::vector<int>& qps, int ref_qp,
                        const PartitionConstraints& cons, GuideMode mode,
                        int workers) {
  if (frames.empty()) throw std::invalid_argument("ladder: empty frame list");
  if (std::find(qps.begin(), qps.end(), ref_qp) == qps.end())
    throw std::invalid_argument("ladder: ref_qp not in the QP list");

  std::vector<LumaFrame> padded;
  padded.reserve(frames.size());
  for (const auto& f : frames) padded.push_back(pad_to_ctu_grid(f, cons.ctu_size));

  LadderReport rep;
  rep.ref_qp = ref_qp;
  rep.mode = mode;
  rep.qps = qps;

  // Reference pass; dependent encodes only start once all guides exist.
  LadderRepRecord ref_rec;
  ref_rec.qp = ref_qp;
  ref_rec.guided = false;
  std::vector<SkipGuide> guides;
  double ref_sse = 0.0, ref_pixels = 0.0;
  for (const auto& f : padded) {
    RepresentationResult r = encode_representation(f, ref_qp, cons, nullptr, workers);
    guides.push_back(
        build_guide(r.trees, f.width, f.height, cons.ctu_size, mode));
    rep.guides.push_back(guides.back().maps);
    ref_rec.rate_bits += r.rate_bits;
    ref_rec.stats += r.stats;
    ref_sse += r.sse_origin;
    ref_pixels += double(f.origin_width) * f.origin_height;
    ref_rec.per_frame.push_back(std::move(r));
  }
  auto pooled_psnr = [](double sse, double pixels) {
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / (sse / pixels));
  };
  ref_rec.psnr_db = pooled_psnr(ref_sse, ref_pixels);

  std::vector<std::pair<int, RdStats>> base_stats, fast_stats;
  for (int qp : qps) {
    if (qp == ref_qp) {
      rep.baseline.push_back(ref_rec);
      rep.fast.push_back(ref_rec);
      base_stats.push_back({qp, ref_rec.stats});
      fast_stats.push_back({qp, ref_rec.stats});
      continue;
    }
    LadderRepRecord base, fast;
    base.qp = fast.qp = qp;
    base.guided = false;
    fast.guided = true;
    double base_sse = 0.0, fast_sse = 0.0, pixels = 0.0;
    for (size_t fi = 0; fi < padded.size(); ++fi) {
      const LumaFrame& f = padded[fi];
      RepresentationResult b = encode_representation(f, qp, cons, nullptr, workers);
      RepresentationResult g =
          encode_representation(f, qp, cons, &guides[fi], workers);
      base.rate_bits += b.rate_bits;
      base.stats += b.stats;
      base_sse += b.sse_origin;
      fast.rate_bits += g.rate_bits;
      fast.stats += g.stats;
      fast_sse += g.sse_origin;
      pixels += double(f.origin_width) * f.origin_height;
      base.per_frame.push_back(std::move(b));
      fast.per_frame.push_back(std::move(g));
    }
    base.psnr_db = pooled_psnr(base_sse, pixels);
    fast.psnr_db = pooled_psnr(fast_sse, pixels);
    base_stats.push_back({qp, base.stats});
    fast_stats.push_back({qp, fast.stats});

    // Fig. 2-style similarity of the dependent's own (unguided) partitions
    // against the reference size maps, pooled over frames.
    SimilarityCounts counts;
    for (size_t fi = 0; fi < padded.size(); ++fi)
      counts += similarity_counts(guides[fi].maps,
                                  padded[fi].width / cons.ctu_size, cons.ctu_size,
                                  base.per_frame[fi].trees);
    rep.similarity.push_back(similarity_from_counts(qp, counts));

    rep.baseline.push_back(std::move(base));
    rep.fast.push_back(std::move(fast));
  }

  rep.reduction = reduction_report(base_stats, fast_stats, ref_qp);
  return rep;
}

}  // namespace mtt
