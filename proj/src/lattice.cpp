#include "frozenperc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace frozenperc {

int norm(Vertex v) { return std::max(std::abs(v.x), std::abs(v.y)); }

int distance(Vertex v, Vertex w) { return norm({v.x - w.x, v.y - w.y}); }

Edge Edge::between(Vertex u, Vertex v) {
  if (v < u) std::swap(u, v);
  if (v.x == u.x + 1 && v.y == u.y) return {u, Axis::Horizontal};
  if (v.x == u.x && v.y == u.y + 1) return {u, Axis::Vertical};
  throw GeometryError("vertices are not lattice neighbours");
}

DualEdge dual_of(const Edge& e) {
  const DoubledPoint m{2 * e.lo.x, 2 * e.lo.y};
  if (e.axis == Axis::Horizontal) {
    return {e, {m.x + 1, m.y - 1}, {m.x + 1, m.y + 1}};
  }
  return {e, {m.x - 1, m.y + 1}, {m.x + 1, m.y + 1}};
}

Edge primal_of(DualVertex p, DualVertex q) {
  if (!is_dual_vertex(p) || !is_dual_vertex(q)) {
    throw GeometryError("dual edge endpoints must be face centres");
  }
  if (q < p) std::swap(p, q);
  if (p.x == q.x && q.y == p.y + 2) {
    // vertical dual edge crosses a horizontal primal edge
    return {{(p.x - 1) / 2, (p.y + 1) / 2}, Axis::Horizontal};
  }
  if (p.y == q.y && q.x == p.x + 2) {
    return {{(p.x + 1) / 2, (p.y - 1) / 2}, Axis::Vertical};
  }
  throw GeometryError("face centres are not adjacent");
}

Rect Rect::make(int x_min, int x_max, int y_min, int y_max) {
  if (x_min > x_max || y_min > y_max) throw GeometryError("rectangle bounds are inverted");
  return {x_min, x_max, y_min, y_max};
}

Rect bounding_box(std::span<const Vertex> vertices) {
  if (vertices.empty()) throw GeometryError("bounding box of an empty vertex set");
  Rect r{vertices[0].x, vertices[0].x, vertices[0].y, vertices[0].y};
  for (const Vertex& v : vertices) {
    r.x_min = std::min(r.x_min, v.x);
    r.x_max = std::max(r.x_max, v.x);
    r.y_min = std::min(r.y_min, v.y);
    r.y_max = std::max(r.y_max, v.y);
  }
  return r;
}

int chebyshev_diameter(std::span<const Vertex> vertices) {
  if (vertices.empty()) return 0;
  return bounding_box(vertices).diameter();
}

Rect build_box(int k) {
  if (k < 0 || k % 2 != 0) {
    throw GeometryError("box side must be a non-negative even integer, got " + std::to_string(k));
  }
  return {-k / 2, k / 2, -k / 2, k / 2};
}

Window Window::centered(int side) {
  if (side <= 0 || side % 2 != 0) {
    throw GeometryError("window side must be a positive even integer, got " + std::to_string(side));
  }
  return Window(build_box(side));
}

Window Window::spanning(const Rect& bounds) {
  Rect checked = Rect::make(bounds.x_min, bounds.x_max, bounds.y_min, bounds.y_max);
  if (checked.vertex_count() > (std::size_t{1} << 31)) throw GeometryError("window too large");
  return Window(checked);
}

Vertex Window::vertex_at(std::size_t index) const {
  const auto cols = static_cast<std::size_t>(columns());
  return {bounds_.x_min + static_cast<int>(index % cols), bounds_.y_min + static_cast<int>(index / cols)};
}

std::optional<std::size_t> Window::find_edge(const Edge& e) const {
  if (!contains(e)) return std::nullopt;
  const auto col = static_cast<std::size_t>(e.lo.x - bounds_.x_min);
  const auto row = static_cast<std::size_t>(e.lo.y - bounds_.y_min);
  if (e.axis == Axis::Horizontal) {
    return row * static_cast<std::size_t>(bounds_.width()) + col;
  }
  return horizontal_edge_count() + row * static_cast<std::size_t>(columns()) + col;
}

std::size_t Window::edge_index(const Edge& e) const {
  if (auto idx = find_edge(e)) return *idx;
  throw GeometryError("edge outside window");
}

Edge Window::edge_at(std::size_t index) const {
  const std::size_t nh = horizontal_edge_count();
  if (index < nh) {
    const auto w = static_cast<std::size_t>(bounds_.width());
    return {{bounds_.x_min + static_cast<int>(index % w), bounds_.y_min + static_cast<int>(index / w)},
            Axis::Horizontal};
  }
  index -= nh;
  const auto cols = static_cast<std::size_t>(columns());
  return {{bounds_.x_min + static_cast<int>(index % cols), bounds_.y_min + static_cast<int>(index / cols)},
          Axis::Vertical};
}

std::pair<std::size_t, std::size_t> Window::endpoints(std::size_t index) const {
  const std::size_t nh = horizontal_edge_count();
  const auto cols = static_cast<std::size_t>(columns());
  if (index < nh) {
    const auto w = static_cast<std::size_t>(bounds_.width());
    const std::size_t v = (index / w) * cols + index % w;
    return {v, v + 1};
  }
  const std::size_t v = index - nh;
  return {v, v + cols};
}

Region Region::from_rect(const Rect& r) {
  const Rect rects[] = {r};
  return from_rects(rects);
}

Region Region::from_rects(std::span<const Rect> rects) {
  Region out;
  if (rects.empty()) return out;
  Rect dom = rects[0];
  for (const Rect& r : rects) {
    dom.x_min = std::min(dom.x_min, r.x_min);
    dom.x_max = std::max(dom.x_max, r.x_max);
    dom.y_min = std::min(dom.y_min, r.y_min);
    dom.y_max = std::max(dom.y_max, r.y_max);
  }
  out.domain_ = dom;
  out.mask_.assign(dom.vertex_count(), 0);
  for (const Rect& r : rects) {
    for (int y = r.y_min; y <= r.y_max; ++y) {
      for (int x = r.x_min; x <= r.x_max; ++x) out.mask_[out.index({x, y})] = 1;
    }
  }
  out.count_ = static_cast<std::size_t>(std::count(out.mask_.begin(), out.mask_.end(), 1));
  return out;
}

Region Region::from_mask(const Rect& bbox, std::vector<std::uint8_t> mask) {
  if (mask.size() != bbox.vertex_count()) throw GeometryError("mask size does not match its domain");
  Region out;
  out.domain_ = bbox;
  out.mask_ = std::move(mask);
  for (auto& m : out.mask_) m = m != 0 ? 1 : 0;
  out.count_ = static_cast<std::size_t>(std::count(out.mask_.begin(), out.mask_.end(), 1));
  return out;
}

Region Region::from_vertices(std::span<const Vertex> vertices) {
  if (vertices.empty()) return Region{};
  const Rect box = bounding_box(vertices);
  std::vector<std::uint8_t> mask(box.vertex_count(), 0);
  Region out;
  out.domain_ = box;
  for (const Vertex& v : vertices) mask[out.index(v)] = 1;
  return from_mask(box, std::move(mask));
}

std::vector<Vertex> Region::vertices() const {
  std::vector<Vertex> out;
  out.reserve(count_);
  if (count_ == 0) return out;
  for (int y = domain_.y_min; y <= domain_.y_max; ++y) {
    for (int x = domain_.x_min; x <= domain_.x_max; ++x) {
      if (mask_[index({x, y})] != 0) out.push_back({x, y});
    }
  }
  return out;
}

bool Region::on_boundary(Vertex v) const {
  if (!contains(v)) return false;
  return !contains({v.x + 1, v.y}) || !contains({v.x - 1, v.y}) || !contains({v.x, v.y + 1}) ||
         !contains({v.x, v.y - 1});
}

bool operator==(const Region& a, const Region& b) {
  if (a.count_ != b.count_) return false;
  for (const Vertex& v : a.vertices()) {
    if (!b.contains(v)) return false;
  }
  return true;
}

Region chebyshev_neighborhood(const Region& region, int radius) {
  if (radius < 0) throw GeometryError("negative neighbourhood radius");
  if (region.empty()) return region;
  const Rect dom = region.domain().expanded(radius);
  const int w = dom.width() + 1;
  const int h = dom.height() + 1;
  // The Chebyshev ball is a square, so dilate along x and then along y.
  std::vector<std::uint8_t> rows(dom.vertex_count(), 0);
  for (int y = dom.y_min; y <= dom.y_max; ++y) {
    for (int x = dom.x_min; x <= dom.x_max; ++x) {
      if (!region.contains({x, y})) continue;
      const int lo = std::max(dom.x_min, x - radius) - dom.x_min;
      const int hi = std::min(dom.x_max, x + radius) - dom.x_min;
      std::fill(rows.begin() + (y - dom.y_min) * w + lo, rows.begin() + (y - dom.y_min) * w + hi + 1, 1);
    }
  }
  std::vector<std::uint8_t> out(dom.vertex_count(), 0);
  for (int col = 0; col < w; ++col) {
    for (int row = 0; row < h; ++row) {
      if (rows[static_cast<std::size_t>(row) * w + col] == 0) continue;
      for (int r2 = std::max(0, row - radius); r2 <= std::min(h - 1, row + radius); ++r2) {
        out[static_cast<std::size_t>(r2) * w + col] = 1;
      }
    }
  }
  return Region::from_mask(dom, std::move(out));
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::vector<ParamViolation> validate_params(const ShapeParams& p) {
  std::vector<ParamViolation> out;
  if (!(0.0 < p.a && p.a < p.c && p.c < p.b && p.b < 1.0)) {
    out.push_back({"order", "0 < a < c < b < 1 fails for a=" + fmt(p.a) + ", c=" + fmt(p.c) + ", b=" + fmt(p.b)});
  }
  if (!(0.0 < p.eps && p.eps < 1.0)) {
    out.push_back({"eps.range", "0 < eps < 1 fails for eps=" + fmt(p.eps)});
  }
  if (!(p.l > 0.0)) {
    out.push_back({"l.range", "l > 0 fails for l=" + fmt(p.l)});
  }
  const double lower = p.l + (p.b - p.c) / 2.0;
  const double upper = p.l + (p.b + p.c) / 2.0;
  if (!(lower < 1.0)) {
    out.push_back({"eq1.lower", "l + (b-c)/2 < 1 fails: " + fmt(lower) + " >= 1"});
  }
  if (!(1.0 < upper)) {
    out.push_back({"eq1.upper", "1 < l + (b+c)/2 fails: " + fmt(upper) + " <= 1"});
  }
  if (!(lower + p.eps < 1.0)) {
    out.push_back({"eq2", "l + (b-c)/2 + eps < 1 fails: " + fmt(lower + p.eps) + " >= 1"});
  }
  return out;
}

int round_to_even(double x) { return 2 * static_cast<int>(std::floor(x / 2.0 + 0.5)); }

int round_to_int(double x) { return static_cast<int>(std::floor(x + 0.5)); }

int ProofGeometry::minimal_window_side() const {
  const Rect dom = lambda_prime.domain();
  const int half = std::max({std::abs(dom.x_min), dom.x_max, std::abs(dom.y_min), dom.y_max}) + 1;
  return 2 * half;
}

ProofGeometry build_proof_geometry(const ShapeParams& params, int n, const std::optional<Window>& window) {
  if (n < 1) throw GeometryError("N must be positive");
  if (auto violations = validate_params(params); !violations.empty()) {
    std::string msg = "parameter inequality violated:";
    for (const auto& v : violations) msg += " [" + v.name + "] " + v.detail + ";";
    throw GeometryError(msg);
  }
  ProofGeometry g;
  g.params = params;
  g.n = n;
  const int ka = round_to_even(params.a * n);
  const int kc = round_to_even(params.c * n);
  const int kb = round_to_even(params.b * n);
  if (ka < 2 || !(ka < kc && kc < kb)) {
    throw GeometryError("boxes degenerate at N=" + std::to_string(n) + ": rounded sides " + std::to_string(ka) +
                        ", " + std::to_string(kc) + ", " + std::to_string(kb));
  }
  const int e = round_to_int(params.eps * n);
  if (e < 2) {
    throw GeometryError("rounded eps width " + std::to_string(e) + " < 2: geometry degenerate at N=" +
                        std::to_string(n));
  }
  const int ll = round_to_int(params.l * n);
  if (ll < 4 * e) {
    throw GeometryError("tube length " + std::to_string(ll) + " shorter than 4 eps N = " + std::to_string(4 * e));
  }
  g.margin = e;
  g.tube_length = ll;
  g.box_a = build_box(ka);
  g.box_c = build_box(kc);
  g.box_b = build_box(kb);
  g.box_outer = build_box(kb + 2 * e);

  // R: width e, centred on the east side of B(cN); odd widths shift down.
  const int ry_min = (e % 2 == 0) ? -e / 2 : -(e + 1) / 2;
  g.r = {kc / 2, kb / 2 + ll, ry_min, ry_min + e};
  g.tube = {kb / 2 + e, kb / 2 + e + ll, g.r.y_min - e, g.r.y_max + e};
  g.r_prime = {g.tube.x_min, g.tube.x_min + 4 * e, g.tube.y_min, g.tube.y_max};
  g.l1 = {kc / 2 - e, kc / 2, kc / 2, kb / 2 + e};
  g.l2 = {kc / 2 - e, kc / 2, -(kb / 2 + e), -kc / 2};
  if (g.tube.y_max >= g.box_outer.y_max || g.tube.y_min <= g.box_outer.y_min) {
    throw GeometryError("tube wider than the outer box at N=" + std::to_string(n));
  }

  const Rect lambda_parts[] = {g.box_b, g.r};
  g.lambda = Region::from_rects(lambda_parts);
  const Rect lambda_prime_parts[] = {g.box_outer, g.tube};
  g.lambda_prime = Region::from_rects(lambda_prime_parts);

  if (window && !window->bounds().contains(g.lambda_prime.domain().expanded(1))) {
    throw GeometryError("window of side " + std::to_string(window->side()) +
                        " too small for the construction; need at least " +
                        std::to_string(g.minimal_window_side()));
  }
  return g;
}

}  // namespace frozenperc
