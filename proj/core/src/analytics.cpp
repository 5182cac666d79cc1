#include "mtt/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mtt {

double sse_origin_region(const LumaFrame& orig, const LumaFrame& recon) {
  if (orig.origin_width != recon.origin_width ||
      orig.origin_height != recon.origin_height)
    throw std::invalid_argument("psnr: origin dimensions differ");
  double sse = 0.0;
  for (int y = 0; y < orig.origin_height; ++y)
    for (int x = 0; x < orig.origin_width; ++x) {
      double d = double(orig.at(x, y)) - double(recon.at(x, y));
      sse += d * d;
    }
  return sse;
}

double psnr(const LumaFrame& orig, const LumaFrame& recon) {
  double sse = sse_origin_region(orig, recon);
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  double mse = sse / (double(orig.origin_width) * orig.origin_height);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

SimilarityCounts& SimilarityCounts::operator+=(const SimilarityCounts& o) {
  smaller += o.smaller;
  equal += o.equal;
  larger += o.larger;
  total += o.total;
  return *this;
}

SimilarityCounts similarity_counts(const std::vector<SizeMap>& ref_maps, int ctus_x,
                                   int ctu_size,
                                   const std::vector<PartitionTree>& dep_trees,
                                   bool per_area) {
  if (ref_maps.size() != dep_trees.size() || ctus_x <= 0)
    throw std::invalid_argument("similarity: reference/dependent grid mismatch");

  SimilarityCounts counts;
  for (size_t i = 0; i < dep_trees.size(); ++i) {
    const SizeMap& map = ref_maps[i];
    if (map.ctu_size != ctu_size)
      throw std::invalid_argument("similarity: CTU size mismatch");
    const CuGeom& root = dep_trees[i].geom;
    for_each_leaf(dep_trees[i], [&](const PartitionTree& leaf) {
      int gx = (leaf.geom.x - root.x) / SizeMap::kGranularity;
      int gy = (leaf.geom.y - root.y) / SizeMap::kGranularity;
      const auto& e = map.entry(gx, gy);
      double w = per_area ? double(leaf.geom.width / 4) * (leaf.geom.height / 4) : 1.0;
      counts.total += w;
      if (leaf.geom.width < e.first && leaf.geom.height < e.second)
        counts.smaller += w;
      else if (leaf.geom.width == e.first && leaf.geom.height == e.second)
        counts.equal += w;
      else if (leaf.geom.width > e.first && leaf.geom.height > e.second)
        counts.larger += w;
      // mixed width/height relations stay uncounted
    });
  }
  return counts;
}

SimilarityEntry similarity_from_counts(int qp, const SimilarityCounts& c) {
  SimilarityEntry e;
  e.qp = qp;
  if (c.total > 0) {
    e.pct_smaller = 100.0 * c.smaller / c.total;
    e.pct_equal = 100.0 * c.equal / c.total;
    e.pct_larger = 100.0 * c.larger / c.total;
  }
  return e;
}

namespace {

// Least-squares cubic fit around the mean of x; with exactly four points the
// fit interpolates.
struct Cubic {
  double x0 = 0.0;      // centering offset
  double c[4] = {0, 0, 0, 0};

  double integral(double lo, double hi) const {
    auto F = [&](double x) {
      double t = x - x0;
      return c[0] * t + c[1] * t * t / 2 + c[2] * t * t * t / 3 +
             c[3] * t * t * t * t / 4;
    };
    return F(hi) - F(lo);
  }
};

Cubic fit_cubic(const std::vector<double>& xs, const std::vector<double>& ys) {
  size_t n = xs.size();
  Cubic fit;
  for (double x : xs) fit.x0 += x;
  fit.x0 /= double(n);

  // Normal equations A^T A c = A^T y over basis {1, t, t^2, t^3}.
  double ata[4][4] = {};
  double aty[4] = {};
  for (size_t i = 0; i < n; ++i) {
    double t = xs[i] - fit.x0;
    double pw[4] = {1.0, t, t * t, t * t * t};
    for (int r = 0; r < 4; ++r) {
      aty[r] += pw[r] * ys[i];
      for (int c = 0; c < 4; ++c) ata[r][c] += pw[r] * pw[c];
    }
  }
  // Gaussian elimination with partial pivoting.
  int perm[4] = {0, 1, 2, 3};
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(ata[perm[r]][col]) > std::abs(ata[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    double d = ata[perm[col]][col];
    if (std::abs(d) < 1e-30) throw std::invalid_argument("bd: degenerate fit");
    for (int r = col + 1; r < 4; ++r) {
      double f = ata[perm[r]][col] / d;
      for (int c2 = col; c2 < 4; ++c2) ata[perm[r]][c2] -= f * ata[perm[col]][c2];
      aty[perm[r]] -= f * aty[perm[col]];
    }
  }
  for (int col = 3; col >= 0; --col) {
    double acc = aty[perm[col]];
    for (int c2 = col + 1; c2 < 4; ++c2) acc -= ata[perm[col]][c2] * fit.c[c2];
    fit.c[col] = acc / ata[perm[col]][col];
  }
  return fit;
}

void validate_curve(const RdCurve& c) {
  if (c.points.size() < 4) throw std::invalid_argument("bd: need at least 4 points");
  double prev = 0.0;
  for (const auto& [rate, q] : c.points) {
    if (rate <= 0.0) throw std::invalid_argument("bd: rates must be positive");
    if (rate <= prev) throw std::invalid_argument("bd: rates must strictly increase");
    if (!std::isfinite(q)) throw std::invalid_argument("bd: qualities must be finite");
    prev = rate;
  }
}

}  // namespace

double bd_delta(const RdCurve& anchor, const RdCurve& test, BdMode mode) {
  validate_curve(anchor);
  validate_curve(test);

  auto axes = [&](const RdCurve& c) {
    std::vector<double> xs, ys;
    for (const auto& [rate, q] : c.points) {
      double lr = std::log10(rate);
      xs.push_back(mode == BdMode::Quality ? lr : q);
      ys.push_back(mode == BdMode::Quality ? q : lr);
    }
    for (size_t i = 1; i < xs.size(); ++i)
      if (xs[i] == xs[i - 1])
        throw std::invalid_argument("bd: duplicate abscissa values");
    return std::pair{xs, ys};
  };

  auto [ax, ay] = axes(anchor);
  auto [tx, ty] = axes(test);

  double lo = std::max(*std::min_element(ax.begin(), ax.end()),
                       *std::min_element(tx.begin(), tx.end()));
  double hi = std::min(*std::max_element(ax.begin(), ax.end()),
                       *std::max_element(tx.begin(), tx.end()));
  if (hi <= lo) throw std::range_error("bd: curves do not overlap");

  Cubic fa = fit_cubic(ax, ay);
  Cubic ft = fit_cubic(tx, ty);
  double diff = (ft.integral(lo, hi) - fa.integral(lo, hi)) / (hi - lo);
  if (mode == BdMode::Quality) return diff;
  return (std::pow(10.0, diff) - 1.0) * 100.0;
}

ReductionSummary reduction_report(const std::vector<std::pair<int, RdStats>>& baseline,
                                  const std::vector<std::pair<int, RdStats>>& fast,
                                  int ref_qp) {
  if (baseline.size() != fast.size() || baseline.empty())
    throw std::invalid_argument("reduction: QP sets differ");

  ReductionSummary out;
  double max_base = 0.0, max_fast = 0.0;
  double sum_ns = 0.0, sum_wall = 0.0;
  for (size_t i = 0; i < baseline.size(); ++i) {
    const auto& [qp, b] = baseline[i];
    const auto& [fqp, f] = fast[i];
    if (qp != fqp) throw std::invalid_argument("reduction: QP sets differ");
    if (b.ns_evaluations == 0)
      throw std::invalid_argument("reduction: zero baseline NS count");
    if (qp == ref_qp) continue;
    // Latency proxy: the reference is encoded unguided in both arms, so only
    // the dependent representations can move the slowest-representation cost.
    max_base = std::max(max_base, double(b.ns_evaluations));
    max_fast = std::max(max_fast, double(f.ns_evaluations));
    QpReduction r;
    r.qp = qp;
    r.ns_reduction = 1.0 - double(f.ns_evaluations) / double(b.ns_evaluations);
    r.wall_reduction =
        b.wall_time_s > 0.0 ? 1.0 - f.wall_time_s / b.wall_time_s : 0.0;
    sum_ns += r.ns_reduction;
    sum_wall += r.wall_reduction;
    out.per_qp.push_back(r);
  }
  if (!out.per_qp.empty()) {
    out.average_ns_reduction = sum_ns / double(out.per_qp.size());
    out.average_wall_reduction = sum_wall / double(out.per_qp.size());
  }
  out.max_rep_reduction = max_base > 0.0 ? 1.0 - max_fast / max_base : 0.0;
  return out;
}

}  // namespace mtt
