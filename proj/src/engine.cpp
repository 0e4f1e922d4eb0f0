#include "frozenperc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace frozenperc {

// Bucket sort on t (uniform times leave O(1) edges per bucket), then a
// comparison sort inside each bucket. Correct for any input distribution.
void Engine::sort_rings(std::span<const double> values, double until) {
  const std::size_t m = values.size();
  const std::size_t buckets = std::max<std::size_t>(1, m / 2);
  const auto bucket_of = [&](double t) {
    return std::min(buckets - 1, static_cast<std::size_t>(t * static_cast<double>(buckets)));
  };
  start_.assign(buckets + 1, 0);
  std::size_t kept = 0;
  for (double t : values) {
    if (t < until) {
      ++start_[bucket_of(t) + 1];
      ++kept;
    }
  }
  std::partial_sum(start_.begin(), start_.end(), start_.begin());
  order_.resize(kept);
  for (std::size_t i = 0; i < m; ++i) {
    if (values[i] < until) order_[start_[bucket_of(values[i])]++] = {values[i], static_cast<std::uint32_t>(i)};
  }
  const auto less = [](const Ring& a, const Ring& b) { return earlier(a.time, a.edge, b.time, b.edge); };
  std::size_t lo = 0;
  for (std::size_t k = 0; k < buckets; ++k) {
    const std::size_t hi = start_[k];
    if (hi - lo > 1) {
      if (hi - lo < 16) {
        for (std::size_t i = lo + 1; i < hi; ++i) {
          const Ring r = order_[i];
          std::size_t j = i;
          for (; j > lo && less(r, order_[j - 1]); --j) order_[j] = order_[j - 1];
          order_[j] = r;
        }
      } else {
        std::sort(order_.begin() + static_cast<std::ptrdiff_t>(lo), order_.begin() + static_cast<std::ptrdiff_t>(hi),
                  less);
      }
    }
    lo = hi;
  }
}

void Engine::replay(const EdgeTimes& times, FreezeThreshold n, double until, std::vector<std::uint8_t>* open,
                    std::vector<EngineEvent>* log) {
  const Window& w = times.window();
  const std::size_t nv = w.vertex_count();

  sort_rings(times.values(), until);

  parent_.resize(nv);
  std::iota(parent_.begin(), parent_.end(), 0u);
  size_.assign(nv, 1);
  bbox_.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const Vertex p = w.vertex_at(v);
    bbox_[v] = {p.x, p.x, p.y, p.y};
  }
  freeze_time_.assign(nv, std::numeric_limits<double>::quiet_NaN());

  const bool bounded = !n.is_unbounded();
  for (const Ring& ring : order_) {
    auto [u, v] = w.endpoints(ring.edge);
    std::uint32_t ru = find(static_cast<std::uint32_t>(u));
    std::uint32_t rv = find(static_cast<std::uint32_t>(v));
    if (!std::isnan(freeze_time_[ru]) || !std::isnan(freeze_time_[rv])) {
      if (log) log->push_back({ring.time, ring.edge, EventKind::Blocked});
      continue;
    }
    if (open) (*open)[ring.edge] = 1;
    if (ru == rv) {
      if (log) log->push_back({ring.time, ring.edge, EventKind::Internal});
      continue;
    }
    if (size_[ru] < size_[rv]) std::swap(ru, rv);
    parent_[rv] = ru;
    size_[ru] += size_[rv];
    Box& b = bbox_[ru];
    const Box& o = bbox_[rv];
    b.x_min = std::min(b.x_min, o.x_min);
    b.x_max = std::max(b.x_max, o.x_max);
    b.y_min = std::min(b.y_min, o.y_min);
    b.y_max = std::max(b.y_max, o.y_max);
    if (bounded && n.reached(std::max(b.x_max - b.x_min, b.y_max - b.y_min))) {
      freeze_time_[ru] = ring.time;
    }
    if (log) log->push_back({ring.time, ring.edge, EventKind::Merge});
  }
}

FinalState Engine::run(const EdgeTimes& times, FreezeThreshold n, const RunOptions& options) {
  if (!(options.until >= 0.0 && options.until <= 1.0)) throw std::invalid_argument("time must lie in [0, 1]");
  FinalState state;
  state.window = times.window();
  state.n = n;
  state.time = options.until;
  state.open_edges.assign(times.size(), 0);
  replay(times, n, options.until, &state.open_edges, options.record_events ? &state.event_log : nullptr);

  const std::size_t nv = state.window.vertex_count();
  constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(nv, kNone);
  state.cluster_of.resize(nv);
  for (std::size_t v = 0; v < nv; ++v) {
    const std::uint32_t r = find(static_cast<std::uint32_t>(v));
    if (label[r] == kNone) {
      label[r] = static_cast<std::uint32_t>(state.clusters.size());
      ClusterRecord rec;
      rec.root = r;
      rec.size = size_[r];
      rec.bbox = {bbox_[r].x_min, bbox_[r].x_max, bbox_[r].y_min, bbox_[r].y_max};
      if (!std::isnan(freeze_time_[r])) {
        rec.frozen = true;
        rec.freeze_time = freeze_time_[r];
      }
      state.clusters.push_back(rec);
    }
    state.cluster_of[v] = label[r];
  }
  return state;
}

OriginStats Engine::run_origin(const EdgeTimes& times, FreezeThreshold n) {
  const Window& w = times.window();
  if (!w.contains(Vertex{0, 0})) throw std::invalid_argument("window does not contain the origin");
  replay(times, n, 1.0, nullptr, nullptr);
  const std::uint32_t r = find(static_cast<std::uint32_t>(w.vertex_index({0, 0})));
  const Box& b = bbox_[r];
  const Rect& wb = w.bounds();
  OriginStats s;
  s.diameter = std::max(b.x_max - b.x_min, b.y_max - b.y_min);
  s.frozen = !std::isnan(freeze_time_[r]);
  s.size = size_[r];
  s.boundary_margin =
      std::min({b.x_min - wb.x_min, wb.x_max - b.x_max, b.y_min - wb.y_min, wb.y_max - b.y_max});
  return s;
}

FinalState run_frozen(const Window& window, const EdgeTimes& times, FreezeThreshold n, const RunOptions& options) {
  if (!(window == times.window())) throw std::invalid_argument("edge times belong to a different window");
  Engine engine;
  return engine.run(times, n, options);
}

FinalState state_at(const Window& window, const EdgeTimes& times, FreezeThreshold n, double t) {
  RunOptions opts;
  opts.until = t;
  return run_frozen(window, times, n, opts);
}

OriginStats origin_stats(const FinalState& state) {
  const Window& w = state.window;
  if (!w.contains(Vertex{0, 0})) throw std::invalid_argument("window does not contain the origin");
  const ClusterRecord& c = state.cluster_at({0, 0});
  const Rect& wb = w.bounds();
  OriginStats s;
  s.diameter = c.diameter();
  s.frozen = c.frozen;
  s.size = c.size;
  s.boundary_margin = std::min({c.bbox.x_min - wb.x_min, wb.x_max - c.bbox.x_max, c.bbox.y_min - wb.y_min,
                                wb.y_max - c.bbox.y_max});
  return s;
}

void write_open_bitmap(std::ostream& out, const FinalState& state) {
  const std::size_t n = state.open_edges.size();
  for (std::size_t base = 0; base < n; base += 8) {
    unsigned char byte = 0;
    for (std::size_t k = 0; k < 8 && base + k < n; ++k) {
      if (state.open_edges[base + k] != 0) byte = static_cast<unsigned char>(byte | (1u << k));
    }
    out.put(static_cast<char>(byte));
  }
}

void write_cluster_csv(std::ostream& out, const FinalState& state) {
  out << "cluster_id,size,diameter,frozen,freeze_time\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < state.clusters.size(); ++i) {
    const ClusterRecord& c = state.clusters[i];
    out << i << ',' << c.size << ',' << c.diameter() << ',' << (c.frozen ? 1 : 0) << ',';
    if (c.freeze_time) out << *c.freeze_time;
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace frozenperc
