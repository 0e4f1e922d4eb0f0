#include "frozenperc/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace frozenperc {
namespace {

constexpr int kDx[4] = {1, 0, -1, 0};
constexpr int kDy[4] = {0, 1, 0, -1};

/// Dense index over the vertices (or face corners) of a rectangle.
struct Frame {
  Rect r;
  std::size_t w;

  explicit Frame(const Rect& rect) : r(rect), w(static_cast<std::size_t>(rect.width() + 1)) {}
  std::size_t size() const { return r.vertex_count(); }
  bool contains(int x, int y) const { return r.contains(Vertex{x, y}); }
  std::size_t at(int x, int y) const {
    return static_cast<std::size_t>(y - r.y_min) * w + static_cast<std::size_t>(x - r.x_min);
  }
  Vertex point(std::size_t i) const {
    return {r.x_min + static_cast<int>(i % w), r.y_min + static_cast<int>(i / w)};
  }
};

/// Edge from vertex (x, y) in direction d.
Edge edge_from(int x, int y, int d) {
  switch (d) {
    case 0: return {{x, y}, Axis::Horizontal};
    case 1: return {{x, y}, Axis::Vertical};
    case 2: return {{x - 1, y}, Axis::Horizontal};
    default: return {{x, y - 1}, Axis::Vertical};
  }
}

/// Primal edge separating face (fx, fy) from its neighbour in direction d.
Edge edge_between_faces(int fx, int fy, int d) {
  switch (d) {
    case 0: return {{fx + 1, fy}, Axis::Vertical};
    case 1: return {{fx, fy + 1}, Axis::Horizontal};
    case 2: return {{fx, fy}, Axis::Vertical};
    default: return {{fx, fy}, Axis::Horizontal};
  }
}

double clock_of(const EdgeTimes& times, const Edge& e) {
  const auto idx = times.window().find_edge(e);
  if (!idx) throw GeometryError("query region extends beyond the clock window");
  return times.time(*idx);
}

void require_inside_window(const EdgeTimes& times, const Rect& r) {
  if (!times.window().bounds().contains(r)) throw GeometryError("query region extends beyond the clock window");
}

/// Vertices of `domain` joined to `sources` by t-open edges inside `domain`.
std::vector<std::uint8_t> open_component(const EdgeTimes& times, const Region& domain, const Frame& frame,
                                         std::span<const Vertex> sources, double t) {
  std::vector<std::uint8_t> seen(frame.size(), 0);
  std::vector<std::size_t> queue;
  for (const Vertex& s : sources) {
    if (!domain.contains(s)) continue;
    const std::size_t i = frame.at(s.x, s.y);
    if (!seen[i]) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = frame.point(queue[head]);
    for (int d = 0; d < 4; ++d) {
      const Vertex w{v.x + kDx[d], v.y + kDy[d]};
      if (!domain.contains(w)) continue;
      const std::size_t j = frame.at(w.x, w.y);
      if (seen[j] || !(clock_of(times, edge_from(v.x, v.y, d)) < t)) continue;
      seen[j] = 1;
      queue.push_back(j);
    }
  }
  return seen;
}

std::uint64_t pack(DoubledPoint p) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x)) << 32) | static_cast<std::uint32_t>(p.y);
}

int direction(DoubledPoint from, DoubledPoint to) {
  for (int d = 0; d < 4; ++d) {
    if (to.x == from.x + 2 * kDx[d] && to.y == from.y + 2 * kDy[d]) return d;
  }
  throw GeometryError("circuit points are not lattice neighbours");
}

/// Chains unit segments, each point of degree exactly two, into one cycle
/// listed counter-clockwise from the leftmost point of the lowest row.
Circuit chain_cycle(CircuitKind kind, const std::vector<std::pair<DoubledPoint, DoubledPoint>>& segments) {
  std::unordered_map<std::uint64_t, std::uint8_t> dirs;
  DoubledPoint start = segments.at(0).first;
  for (const auto& [p, q] : segments) {
    const int d = direction(p, q);
    dirs[pack(p)] |= static_cast<std::uint8_t>(1u << d);
    dirs[pack(q)] |= static_cast<std::uint8_t>(1u << ((d + 2) % 4));
    for (const DoubledPoint& s : {p, q}) {
      if (s.y < start.y || (s.y == start.y && s.x < start.x)) start = s;
    }
  }
  for (const auto& [key, mask] : dirs) {
    if (std::popcount(mask) != 2) throw std::logic_error("interface is not a simple cycle");
  }
  if (dirs.at(pack(start)) != 0b0011) throw std::logic_error("interface corner is not convex");
  Circuit c;
  c.kind = kind;
  // The lowest-leftmost point has its two segments going east and north.
  int d = 0;
  DoubledPoint p = start;
  do {
    c.points.push_back(p);
    const std::uint8_t mask = dirs.at(pack(p));
    const int back = (d + 2) % 4;
    if (c.points.size() == 1) {
      d = 0;
    } else {
      d = -1;
      for (int k = 0; k < 4; ++k) {
        if ((mask >> k & 1u) && k != back) d = k;
      }
    }
    p = {p.x + 2 * kDx[d], p.y + 2 * kDy[d]};
  } while (!(p == start));
  if (c.points.size() != segments.size()) throw std::logic_error("interface has more than one component");
  return c;
}

/// Faces reached from the inner set without crossing a t-open ring edge.
struct DualSearch {
  Frame faces;
  std::vector<std::uint8_t> reached;
  bool escaped = false;
};

DualSearch search_dual_from_inner(const EdgeTimes& times, const Annulus& an, double t) {
  const Rect o = an.outer.domain();
  DualSearch s{Frame(Rect{o.x_min - 1, o.x_max, o.y_min - 1, o.y_max}), {}, false};
  const Frame& f = s.faces;
  s.reached.assign(f.size(), 0);
  const auto corners_any = [](int fx, int fy, auto&& pred) {
    return pred(Vertex{fx, fy}) || pred(Vertex{fx + 1, fy}) || pred(Vertex{fx, fy + 1}) ||
           pred(Vertex{fx + 1, fy + 1});
  };
  const auto is_outside = [&](Vertex v) { return !an.outer.contains(v); };
  const auto is_inner = [&](Vertex v) { return an.inner.contains(v); };

  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vertex c = f.point(i);
    if (corners_any(c.x, c.y, is_inner)) {
      s.reached[i] = 1;
      queue.push_back(i);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex c = f.point(queue[head]);
    if (corners_any(c.x, c.y, is_outside)) s.escaped = true;
    for (int d = 0; d < 4; ++d) {
      const int nx = c.x + kDx[d];
      const int ny = c.y + kDy[d];
      if (!f.contains(nx, ny)) continue;
      const std::size_t j = f.at(nx, ny);
      if (s.reached[j]) continue;
      const Edge e = edge_between_faces(c.x, c.y, d);
      if (an.in_ring(e.lo) && an.in_ring(e.hi()) && clock_of(times, e) < t) continue;
      s.reached[j] = 1;
      queue.push_back(j);
    }
  }
  return s;
}

/// Joins the outer boundary through t-open edges of the outer set.
std::vector<std::uint8_t> search_primal_from_outer(const EdgeTimes& times, const Annulus& an, const Frame& frame,
                                                   double t) {
  std::vector<Vertex> boundary;
  for (const Vertex& v : an.outer.vertices()) {
    if (an.outer.on_boundary(v)) boundary.push_back(v);
  }
  return open_component(times, an.outer, frame, boundary, t);
}

std::vector<Vertex> faces_next_to(const Circuit& c) {
  std::vector<Vertex> out;
  if (c.kind == CircuitKind::Dual) {
    for (const DoubledPoint& p : c.points) out.push_back(face_corner(p));
    return out;
  }
  for (const Edge& e : c.edges()) {
    out.push_back(e.lo);
    out.push_back(e.axis == Axis::Horizontal ? Vertex{e.lo.x, e.lo.y - 1} : Vertex{e.lo.x - 1, e.lo.y});
  }
  return out;
}

int floor_div2(int v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }
int ceil_div2(int v) { return -floor_div2(-v); }

}  // namespace

std::vector<Edge> Circuit::edges() const {
  std::vector<Edge> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const DoubledPoint p = points[i];
    const DoubledPoint q = points[(i + 1) % points.size()];
    if (kind == CircuitKind::Primal) {
      out.push_back(Edge::between({p.x / 2, p.y / 2}, {q.x / 2, q.y / 2}));
    } else {
      out.push_back(primal_of(p, q));
    }
  }
  return out;
}

std::vector<Vertex> Circuit::vertices() const {
  std::vector<Vertex> out;
  if (kind != CircuitKind::Primal) return out;
  out.reserve(points.size());
  for (const DoubledPoint& p : points) out.push_back({p.x / 2, p.y / 2});
  return out;
}

void Circuit::validate() const {
  if (points.size() < 4) throw GeometryError("a circuit needs at least four points");
  std::unordered_set<std::uint64_t> seen;
  const bool dual = kind == CircuitKind::Dual;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const DoubledPoint p = points[i];
    const bool odd_x = (p.x & 1) != 0;
    const bool odd_y = (p.y & 1) != 0;
    if (odd_x != dual || odd_y != dual) throw GeometryError("circuit point has the wrong parity for its kind");
    if (!seen.insert(pack(p)).second) throw GeometryError("circuit is self-intersecting");
    direction(p, points[(i + 1) % points.size()]);
  }
}

Annulus Annulus::make(Region inner, Region outer) {
  if (inner.empty()) throw GeometryError("malformed annulus: empty inner set");
  for (const Vertex& v : inner.vertices()) {
    if (!outer.contains(v) || outer.on_boundary(v)) {
      throw GeometryError("malformed annulus: inner set is not strictly inside the outer set");
    }
  }
  return {std::move(inner), std::move(outer)};
}

bool has_horizontal_open_crossing(const EdgeTimes& times, const Rect& rect, double t) {
  if (rect.width() <= 0) throw GeometryError("crossing of a zero-width rectangle");
  require_inside_window(times, rect);
  return has_horizontal_open_crossing(times, Region::from_rect(rect), rect.x_min, rect.x_max, t);
}

bool has_horizontal_open_crossing(const EdgeTimes& times, const Region& region, int west, int east, double t) {
  if (region.empty()) return false;
  std::vector<Vertex> sources;
  for (const Vertex& v : region.vertices()) {
    if (v.x == west) sources.push_back(v);
  }
  if (sources.empty()) return false;
  const Frame frame(region.domain());
  const auto seen = open_component(times, region, frame, sources, t);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] && frame.point(i).x == east) return true;
  }
  return false;
}

double crossing_threshold(const EdgeTimes& times, const Rect& rect) {
  if (rect.width() <= 0) throw GeometryError("crossing of a zero-width rectangle");
  require_inside_window(times, rect);
  const Frame frame(rect);
  const auto west = static_cast<std::uint32_t>(frame.size());
  const std::uint32_t east = west + 1;
  std::vector<std::uint32_t> parent(frame.size() + 2);
  std::iota(parent.begin(), parent.end(), 0u);
  const auto find = [&](std::uint32_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (int y = rect.y_min; y <= rect.y_max; ++y) {
    parent[frame.at(rect.x_min, y)] = west;
    parent[frame.at(rect.x_max, y)] = east;
  }
  struct Item {
    double time;
    std::size_t index;
    std::uint32_t u, v;
  };
  std::vector<Item> items;
  for (int y = rect.y_min; y <= rect.y_max; ++y) {
    for (int x = rect.x_min; x <= rect.x_max; ++x) {
      for (int d = 0; d < 2; ++d) {
        const int nx = x + kDx[d];
        const int ny = y + kDy[d];
        if (!frame.contains(nx, ny)) continue;
        const Edge e = edge_from(x, y, d);
        const std::size_t idx = times.window().edge_index(e);
        items.push_back({times.time(idx), idx, static_cast<std::uint32_t>(frame.at(x, y)),
                         static_cast<std::uint32_t>(frame.at(nx, ny))});
      }
    }
  }
  std::sort(items.begin(), items.end(),
            [](const Item& a, const Item& b) { return earlier(a.time, a.index, b.time, b.index); });
  for (const Item& it : items) {
    const std::uint32_t a = find(it.u);
    const std::uint32_t b = find(it.v);
    if (a == b) continue;
    if (a == west || a == east) {
      parent[b] = a;
    } else {
      parent[a] = b;
    }
    if (find(west) == find(east)) return it.time;
  }
  throw std::logic_error("rectangle is not crossed even with every edge open");
}

bool has_closed_dual_crossing(const EdgeTimes& times, const Annulus& annulus, double t) {
  return search_dual_from_inner(times, annulus, t).escaped;
}

bool has_open_circuit(const EdgeTimes& times, const Annulus& annulus, double t) {
  return !has_closed_dual_crossing(times, annulus, t);
}

bool has_open_crossing(const EdgeTimes& times, const Annulus& annulus, double t) {
  const Frame frame(annulus.outer.domain());
  const auto z = search_primal_from_outer(times, annulus, frame, t);
  for (const Vertex& v : annulus.inner.vertices()) {
    if (z[frame.at(v.x, v.y)]) return true;
  }
  return false;
}

bool has_closed_dual_circuit(const EdgeTimes& times, const Annulus& annulus, double t) {
  return !has_open_crossing(times, annulus, t);
}

std::optional<Circuit> innermost_open_circuit(const EdgeTimes& times, const Annulus& annulus, double t) {
  const DualSearch s = search_dual_from_inner(times, annulus, t);
  if (s.escaped) return std::nullopt;
  const Frame& f = s.faces;

  // Fill holes: faces not reachable from the frame border without entering
  // the reached set belong to the enclosed region.
  std::vector<std::uint8_t> exterior(f.size(), 0);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Vertex c = f.point(i);
    const bool border = c.x == f.r.x_min || c.x == f.r.x_max || c.y == f.r.y_min || c.y == f.r.y_max;
    if (border && !s.reached[i]) {
      exterior[i] = 1;
      queue.push_back(i);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex c = f.point(queue[head]);
    for (int d = 0; d < 4; ++d) {
      const int nx = c.x + kDx[d];
      const int ny = c.y + kDy[d];
      if (!f.contains(nx, ny)) continue;
      const std::size_t j = f.at(nx, ny);
      if (exterior[j] || s.reached[j]) continue;
      exterior[j] = 1;
      queue.push_back(j);
    }
  }

  std::vector<std::pair<DoubledPoint, DoubledPoint>> segments;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (exterior[i]) continue;
    const Vertex c = f.point(i);
    for (int d = 0; d < 4; ++d) {
      const int nx = c.x + kDx[d];
      const int ny = c.y + kDy[d];
      if (!f.contains(nx, ny) || !exterior[f.at(nx, ny)]) continue;
      const Edge e = edge_between_faces(c.x, c.y, d);
      segments.emplace_back(doubled(e.lo), doubled(e.hi()));
    }
  }
  return chain_cycle(CircuitKind::Primal, segments);
}

std::optional<Circuit> outermost_closed_dual_circuit(const EdgeTimes& times, const Annulus& annulus, double t) {
  const Frame frame(annulus.outer.domain());
  const auto z = search_primal_from_outer(times, annulus, frame, t);
  const auto inner = annulus.inner.vertices();
  for (const Vertex& v : inner) {
    if (z[frame.at(v.x, v.y)]) return std::nullopt;
  }

  std::vector<std::uint8_t> core(frame.size(), 0);
  std::vector<std::size_t> queue;
  for (const Vertex& v : inner) {
    core[frame.at(v.x, v.y)] = 1;
    queue.push_back(frame.at(v.x, v.y));
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex v = frame.point(queue[head]);
    for (int d = 0; d < 4; ++d) {
      const Vertex w{v.x + kDx[d], v.y + kDy[d]};
      if (!annulus.outer.contains(w)) continue;
      const std::size_t j = frame.at(w.x, w.y);
      if (core[j] || z[j]) continue;
      core[j] = 1;
      queue.push_back(j);
    }
  }

  std::vector<std::pair<DoubledPoint, DoubledPoint>> segments;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    if (!core[i]) continue;
    const Vertex v = frame.point(i);
    for (int d = 0; d < 4; ++d) {
      const Vertex w{v.x + kDx[d], v.y + kDy[d]};
      if (frame.contains(w.x, w.y) && core[frame.at(w.x, w.y)]) continue;
      const DualEdge de = dual_of(edge_from(v.x, v.y, d));
      segments.emplace_back(de.from, de.to);
    }
  }
  return chain_cycle(CircuitKind::Dual, segments);
}

bool has_closed_dual_path_connecting(const EdgeTimes& times, const Rect& rect, const Circuit& from,
                                     const Circuit& to, double t) {
  if (from.empty() || to.empty()) throw std::invalid_argument("connecting path between empty circuits");
  require_inside_window(times, rect);
  if (rect.width() < 1 || rect.height() < 1) return false;
  const Frame f(Rect{rect.x_min, rect.x_max - 1, rect.y_min, rect.y_max - 1});

  std::vector<std::uint8_t> target(f.size(), 0);
  for (const Vertex& c : faces_next_to(to)) {
    if (f.contains(c.x, c.y)) target[f.at(c.x, c.y)] = 1;
  }
  std::vector<std::uint8_t> seen(f.size(), 0);
  std::vector<std::size_t> queue;
  for (const Vertex& c : faces_next_to(from)) {
    if (!f.contains(c.x, c.y)) continue;
    const std::size_t i = f.at(c.x, c.y);
    if (!seen[i]) {
      seen[i] = 1;
      queue.push_back(i);
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    if (target[queue[head]]) return true;
    const Vertex c = f.point(queue[head]);
    for (int d = 0; d < 4; ++d) {
      const int nx = c.x + kDx[d];
      const int ny = c.y + kDy[d];
      if (!f.contains(nx, ny)) continue;
      const std::size_t j = f.at(nx, ny);
      if (seen[j] || clock_of(times, edge_between_faces(c.x, c.y, d)) < t) continue;
      seen[j] = 1;
      queue.push_back(j);
    }
  }
  return false;
}

bool has_open_path(const EdgeTimes& times, const Region& domain, std::span<const Vertex> sources,
                   const Region& targets, double t) {
  if (domain.empty()) return false;
  const Frame frame(domain.domain());
  const auto seen = open_component(times, domain, frame, sources, t);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (seen[i] && targets.contains(frame.point(i))) return true;
  }
  return false;
}

Region interior_of(const Circuit& circuit) {
  circuit.validate();
  int xmin = circuit.points[0].x, xmax = xmin, ymin = circuit.points[0].y, ymax = ymin;
  for (const DoubledPoint& p : circuit.points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const Rect dom{ceil_div2(xmin), floor_div2(xmax), ceil_div2(ymin), floor_div2(ymax)};
  const Frame frame(dom);
  // Each vertical segment straddles exactly one even row under the
  // half-open rule low <= 2y < high.
  std::vector<std::vector<int>> crossings(static_cast<std::size_t>(dom.height() + 1));
  const std::size_t n = circuit.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const DoubledPoint p = circuit.points[i];
    const DoubledPoint q = circuit.points[(i + 1) % n];
    if (p.x != q.x) continue;
    const int row = ceil_div2(std::min(p.y, q.y));
    if (row >= dom.y_min && row <= dom.y_max) crossings[static_cast<std::size_t>(row - dom.y_min)].push_back(p.x);
  }
  std::unordered_set<std::uint64_t> on_circuit;
  if (circuit.kind == CircuitKind::Primal) {
    for (const DoubledPoint& p : circuit.points) on_circuit.insert(pack(p));
  }
  std::vector<std::uint8_t> mask(frame.size(), 0);
  for (int y = dom.y_min; y <= dom.y_max; ++y) {
    auto& xs = crossings[static_cast<std::size_t>(y - dom.y_min)];
    std::sort(xs.begin(), xs.end());
    std::size_t right = 0;  // number of crossings with X <= 2x
    for (int x = dom.x_min; x <= dom.x_max; ++x) {
      while (right < xs.size() && xs[right] <= 2 * x) ++right;
      const bool odd = ((xs.size() - right) & 1u) != 0;
      if (odd && !on_circuit.contains(pack(doubled({x, y})))) mask[frame.at(x, y)] = 1;
    }
  }
  return Region::from_mask(dom, std::move(mask));
}

bool encloses(const Circuit& circuit, Vertex v) {
  const DoubledPoint pv = doubled(v);
  std::size_t count = 0;
  const std::size_t n = circuit.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    const DoubledPoint p = circuit.points[i];
    const DoubledPoint q = circuit.points[(i + 1) % n];
    if (circuit.kind == CircuitKind::Primal && p == pv) return false;
    if (p.x != q.x || p.x <= pv.x) continue;
    if (std::min(p.y, q.y) <= pv.y && pv.y < std::max(p.y, q.y)) ++count;
  }
  return (count & 1u) != 0;
}

}  // namespace frozenperc
