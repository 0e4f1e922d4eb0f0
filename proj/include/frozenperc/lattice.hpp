#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace frozenperc {

/// Thrown when a geometric object or parameter tuple cannot be built.
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Vertex {
  int x = 0;
  int y = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

/// Chebyshev norm max(|x|, |y|).
int norm(Vertex v);
int distance(Vertex v, Vertex w);

enum class Axis : std::uint8_t { Horizontal, Vertical };

/// Nearest-neighbour edge, stored as its lower/left endpoint plus an axis.
struct Edge {
  Vertex lo;
  Axis axis = Axis::Horizontal;

  Vertex hi() const {
    return axis == Axis::Horizontal ? Vertex{lo.x + 1, lo.y} : Vertex{lo.x, lo.y + 1};
  }

  /// Throws GeometryError unless u and v differ by a unit step.
  static Edge between(Vertex u, Vertex v);

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A point of the doubled lattice: primal vertex (x, y) sits at (2x, 2y),
/// the face with lower-left corner (x, y) sits at (2x + 1, 2y + 1).
struct DoubledPoint {
  int x = 0;
  int y = 0;

  friend bool operator==(const DoubledPoint&, const DoubledPoint&) = default;
  friend auto operator<=>(const DoubledPoint&, const DoubledPoint&) = default;
};

using DualVertex = DoubledPoint;

inline DoubledPoint doubled(Vertex v) { return {2 * v.x, 2 * v.y}; }
/// Dual vertex at the centre of the face whose lower-left corner is `corner`.
inline DualVertex face_center(Vertex corner) { return {2 * corner.x + 1, 2 * corner.y + 1}; }
/// Lower-left corner of the face centred at `f`.
inline Vertex face_corner(DualVertex f) { return {(f.x - 1) / 2, (f.y - 1) / 2}; }
inline bool is_dual_vertex(DoubledPoint p) { return (p.x & 1) != 0 && (p.y & 1) != 0; }

struct DualEdge {
  Edge crossed;
  DualVertex from;
  DualVertex to;

  friend bool operator==(const DualEdge&, const DualEdge&) = default;
};

DualEdge dual_of(const Edge& e);
/// Primal edge crossed by the dual edge joining two adjacent face centres.
Edge primal_of(DualVertex p, DualVertex q);
inline Edge primal_of(const DualEdge& d) { return primal_of(d.from, d.to); }

/// Axis-parallel vertex rectangle with inclusive integer bounds.
struct Rect {
  int x_min = 0;
  int x_max = 0;
  int y_min = 0;
  int y_max = 0;

  static Rect make(int x_min, int x_max, int y_min, int y_max);

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  int diameter() const { return width() > height() ? width() : height(); }
  std::size_t vertex_count() const {
    return static_cast<std::size_t>(width() + 1) * static_cast<std::size_t>(height() + 1);
  }
  bool contains(Vertex v) const {
    return v.x >= x_min && v.x <= x_max && v.y >= y_min && v.y <= y_max;
  }
  bool contains(const Rect& r) const {
    return r.x_min >= x_min && r.x_max <= x_max && r.y_min >= y_min && r.y_max <= y_max;
  }
  Rect expanded(int by) const { return {x_min - by, x_max + by, y_min - by, y_max + by}; }

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect bounding_box(std::span<const Vertex> vertices);
/// Chebyshev diameter of a vertex set (0 for empty and singleton sets).
int chebyshev_diameter(std::span<const Vertex> vertices);

/// B(k) = [-k/2, k/2]^2 for even k >= 0.
Rect build_box(int k);

/// Finite rectangular piece of the lattice with free boundary. Edge indices
/// are canonical: every horizontal edge in row-major order (y, then x),
/// followed by every vertical edge in row-major order.
class Window {
 public:
  /// The square window B(side); side must be even and positive.
  static Window centered(int side);
  /// Arbitrary rectangular window, used for small exact-enumeration graphs.
  static Window spanning(const Rect& bounds);

  const Rect& bounds() const { return bounds_; }
  /// Side length for square windows; max(width, height) otherwise.
  int side() const { return bounds_.diameter(); }
  int columns() const { return bounds_.width() + 1; }
  int rows() const { return bounds_.height() + 1; }

  std::size_t vertex_count() const { return bounds_.vertex_count(); }
  std::size_t horizontal_edge_count() const {
    return static_cast<std::size_t>(bounds_.width()) * static_cast<std::size_t>(rows());
  }
  std::size_t edge_count() const {
    return horizontal_edge_count() +
           static_cast<std::size_t>(columns()) * static_cast<std::size_t>(bounds_.height());
  }

  bool contains(Vertex v) const { return bounds_.contains(v); }
  bool contains(const Edge& e) const { return contains(e.lo) && contains(e.hi()); }

  std::size_t vertex_index(Vertex v) const {
    return static_cast<std::size_t>(v.y - bounds_.y_min) * static_cast<std::size_t>(columns()) +
           static_cast<std::size_t>(v.x - bounds_.x_min);
  }
  Vertex vertex_at(std::size_t index) const;

  /// Throws GeometryError for edges outside the window.
  std::size_t edge_index(const Edge& e) const;
  std::optional<std::size_t> find_edge(const Edge& e) const;
  Edge edge_at(std::size_t index) const;
  /// Vertex indices of both endpoints of a canonical edge index.
  std::pair<std::size_t, std::size_t> endpoints(std::size_t edge_index) const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  explicit Window(const Rect& bounds) : bounds_(bounds) {}
  Rect bounds_;
};

/// Vertex predicate over a bounding rectangle; regions of the construction
/// are unions of rectangles, circuit interiors are arbitrary masks.
class Region {
 public:
  Region() = default;
  static Region from_rect(const Rect& r);
  static Region from_rects(std::span<const Rect> rects);
  static Region from_mask(const Rect& bbox, std::vector<std::uint8_t> mask);
  static Region from_vertices(std::span<const Vertex> vertices);

  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }
  /// Bounding rectangle of the mask domain (may be larger than the set).
  const Rect& domain() const { return domain_; }
  bool contains(Vertex v) const {
    return domain_.contains(v) && mask_[index(v)] != 0;
  }
  std::vector<Vertex> vertices() const;
  /// Vertices of the region with a lattice neighbour outside it.
  bool on_boundary(Vertex v) const;

  friend bool operator==(const Region& a, const Region& b);

 private:
  std::size_t index(Vertex v) const {
    return static_cast<std::size_t>(v.y - domain_.y_min) * static_cast<std::size_t>(domain_.width() + 1) +
           static_cast<std::size_t>(v.x - domain_.x_min);
  }
  Rect domain_{0, -1, 0, -1};
  std::vector<std::uint8_t> mask_;
  std::size_t count_ = 0;
};

/// All vertices within Chebyshev distance `radius` of the region.
Region chebyshev_neighborhood(const Region& region, int radius);

/// Shape parameters of the construction around the origin.
struct ShapeParams {
  double a = 0.0;
  double c = 0.0;
  double b = 0.0;
  double l = 0.0;
  double eps = 0.0;
};

struct ParamViolation {
  std::string name;    // short identifier, e.g. "order", "eq1.lower"
  std::string detail;  // the evaluated inequality
};

/// Checks 0 < a < c < b < 1, 0 < eps < 1 and
///   l + (b - c)/2 < 1 < l + (b + c)/2,   l + (b - c)/2 + eps < 1.
std::vector<ParamViolation> validate_params(const ShapeParams& p);

/// Lattice realisation of the regions around the origin for a given N.
/// Lengths: boxes use the nearest even integer (ties up), every other
/// length the nearest integer. `margin` is round(eps N).
struct ProofGeometry {
  ShapeParams params;
  int n = 0;
  int margin = 0;        // round(eps N)
  int tube_length = 0;   // round(l N)
  Rect box_a;            // B(aN)
  Rect box_c;            // B(cN)
  Rect box_b;            // B(bN)
  Rect box_outer;        // B(bN + 2 margin)
  Rect r;                // thin rectangle leaving B(cN) eastwards, ending lN past B(bN)
  Rect tube;             // part of the margin-neighbourhood of R sticking out of box_outer
  Rect r_prime;          // leftmost 4 margin columns of the tube
  Rect l1;               // north connector between B(cN) and the outer boundary
  Rect l2;               // south mirror of l1
  Region lambda;         // B(bN) union R
  Region lambda_prime;   // box_outer union tube

  /// Smallest centred window containing every region with a one-vertex
  /// margin, rounded up to an even side.
  int minimal_window_side() const;
};

int round_to_even(double x);
int round_to_int(double x);

/// Throws GeometryError naming the violated inequality or the degenerate
/// length; `window` must contain lambda_prime.
ProofGeometry build_proof_geometry(const ShapeParams& params, int n,
                                   const std::optional<Window>& window = std::nullopt);

}  // namespace frozenperc
